"""Digit dataset for the adversary experiment.

Real MNIST is used when its IDX files are available locally (pass the
directory holding train-images-idx3-ubyte etc.); this sandbox-friendly
default falls back to scikit-learn's bundled 8x8 digits, upsampled with
nearest-neighbor blocks.  Train and evaluation splits are seeded and
disjoint.

The tone range the digits are rendered into is configurable: the cipher's
spatial scrambling strength depends on scene contrast relative to its
per-level gain spread, and the harness exposes that axis as an experiment.
"""

from __future__ import annotations

import gzip
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MNIST_FILES = {
    "train_images": "train-images-idx3-ubyte",
    "train_labels": "train-labels-idx1-ubyte",
    "test_images": "t10k-images-idx3-ubyte",
    "test_labels": "t10k-labels-idx1-ubyte",
}


class MissingDataError(RuntimeError):
    pass


@dataclass(frozen=True)
class DigitSplits:
    train_x: np.ndarray  # uint8 (N, size, size)
    train_y: np.ndarray
    test_x: np.ndarray
    test_y: np.ndarray

    @property
    def size(self) -> int:
        return self.train_x.shape[1]


def _read_idx(path: Path) -> np.ndarray:
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as fh:
        magic, = struct.unpack(">I", fh.read(4))
        ndim = magic & 0xFF
        shape = struct.unpack(f">{ndim}I", fh.read(4 * ndim))
        data = np.frombuffer(fh.read(), dtype=np.uint8)
    return data.reshape(shape)


def _find_idx(data_dir: Path, stem: str) -> Path:
    for candidate in (data_dir / stem, data_dir / (stem + ".gz")):
        if candidate.exists():
            return candidate
    raise MissingDataError(
        f"MNIST file {stem}(.gz) not found in {data_dir}. Download the four IDX "
        "files from an MNIST mirror into that directory, or omit --data-dir to "
        "use the bundled scikit-learn digits fallback."
    )


def _render_tone(values: np.ndarray, value_max: float, tone_lo: int, tone_hi: int) -> np.ndarray:
    codes = tone_lo + values.astype(np.float64) * ((tone_hi - tone_lo) / value_max)
    return np.clip(np.rint(codes), 0, 255).astype(np.uint8)


def load_mnist(
    data_dir: Path, train_count: int, test_count: int, seed: int,
    tone_lo: int = 0, tone_hi: int = 255,
) -> DigitSplits:
    train_x = _read_idx(_find_idx(data_dir, MNIST_FILES["train_images"]))
    train_y = _read_idx(_find_idx(data_dir, MNIST_FILES["train_labels"]))
    test_x = _read_idx(_find_idx(data_dir, MNIST_FILES["test_images"]))
    test_y = _read_idx(_find_idx(data_dir, MNIST_FILES["test_labels"]))
    rng = np.random.default_rng(seed)
    tr = rng.permutation(len(train_x))[:train_count]
    te = rng.permutation(len(test_x))[:test_count]
    return DigitSplits(
        train_x=_render_tone(train_x[tr], 255.0, tone_lo, tone_hi),
        train_y=train_y[tr].astype(np.int64),
        test_x=_render_tone(test_x[te], 255.0, tone_lo, tone_hi),
        test_y=test_y[te].astype(np.int64),
    )


def load_digits_fallback(
    train_count: int, test_count: int, seed: int,
    size: int = 16, tone_lo: int = 0, tone_hi: int = 255,
) -> DigitSplits:
    """scikit-learn 8x8 digits, block-upsampled to `size` (multiple of 8)."""
    from sklearn.datasets import load_digits

    bundle = load_digits()
    if size % 8 != 0:
        raise ValueError(f"size must be a multiple of 8, got {size}")
    factor = size // 8
    images = bundle.images
    if factor > 1:
        images = np.kron(images, np.ones((factor, factor)))
    codes = _render_tone(images, 16.0, tone_lo, tone_hi)
    labels = bundle.target.astype(np.int64)

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(codes))
    if test_count + train_count > len(codes):
        raise MissingDataError(
            f"fallback digits hold only {len(codes)} samples; requested "
            f"{train_count} train + {test_count} test"
        )
    test_idx = order[:test_count]
    train_idx = order[test_count:test_count + train_count]
    return DigitSplits(
        train_x=codes[train_idx],
        train_y=labels[train_idx],
        test_x=codes[test_idx],
        test_y=labels[test_idx],
    )


def load_dataset(
    data_dir: Path | None, train_count: int, test_count: int, seed: int,
    size: int = 16, tone_lo: int = 0, tone_hi: int = 255,
) -> DigitSplits:
    if data_dir is not None:
        return load_mnist(Path(data_dir), train_count, test_count, seed, tone_lo, tone_hi)
    return load_digits_fallback(train_count, test_count, seed, size, tone_lo, tone_hi)
