"""Security and fidelity metrics: adjacent-pixel correlation, PSNR, key
entropy, and batch recovery reports.

Correlations use every adjacent pair in the stated direction (no random
subsampling), so results are deterministic.  RGB inputs collapse to gray by
unweighted channel mean.  PSNR of identical frames is the infinity sentinel
rather than an arbitrary cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateVariance, DimensionMismatch, EmptyBatch
from .frame import ImageFrame

DIRECTIONS = ("horizontal", "vertical", "diagonal")


def _adjacent_pairs(gray: np.ndarray, direction: str) -> tuple[np.ndarray, np.ndarray]:
    if direction == "horizontal":
        return gray[:, :-1].ravel(), gray[:, 1:].ravel()
    if direction == "vertical":
        return gray[:-1, :].ravel(), gray[1:, :].ravel()
    if direction == "diagonal":
        return gray[:-1, :-1].ravel(), gray[1:, 1:].ravel()
    raise ValueError(f"unknown direction {direction!r}")


def adjacent_correlation(image: ImageFrame, direction: str, gray_weights=None) -> float:
    """Pearson coefficient over all adjacent pixel pairs in one direction.

    RGB inputs collapse to gray first; pass gray_weights to override the
    default unweighted channel mean.
    """
    gray = image.to_gray_float(gray_weights)
    x, y = _adjacent_pairs(gray, direction)
    if x.size < 1:
        raise DimensionMismatch(f"image too small for {direction} pairs")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateVariance(f"zero variance in {direction} pair marginals")
    return float(np.dot(dx, dy) / math.sqrt(sxx * syy))


@dataclass(frozen=True)
class CorrelationReport:
    horizontal: float
    vertical: float
    diagonal: float

    def as_dict(self) -> dict[str, float]:
        return {
            "horizontal": self.horizontal,
            "vertical": self.vertical,
            "diagonal": self.diagonal,
        }


def correlation_report(image: ImageFrame) -> CorrelationReport:
    return CorrelationReport(
        horizontal=adjacent_correlation(image, "horizontal"),
        vertical=adjacent_correlation(image, "vertical"),
        diagonal=adjacent_correlation(image, "diagonal"),
    )


def psnr(a: ImageFrame, b: ImageFrame) -> float:
    """10 log10(255^2 / MSE) over all samples; math.inf for identical frames."""
    if a.data.shape != b.data.shape:
        raise DimensionMismatch(f"frame shapes differ: {a.data.shape} vs {b.data.shape}")
    diff = a.data.astype(np.float64) - b.data.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / mse)


def key_entropy(levels: int) -> float:
    """Per-pixel key entropy in bits for i.i.d.-uniform levels."""
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    return math.log2(levels)


@dataclass(frozen=True)
class RecoveryReport:
    """Batch recovery quality: per-pair PSNRs with a 1 dB histogram."""

    psnrs: tuple
    finite_mean: float
    finite_min: float
    finite_max: float
    infinite_count: int
    histogram: tuple  # ((bin_low_db, count), ...), finite entries only

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write("bin_low_db,count\n")
            for low, count in self.histogram:
                fh.write(f"{low},{count}\n")
            fh.write(f"inf,{self.infinite_count}\n")


def recovery_report(pairs: Sequence[tuple[ImageFrame, ImageFrame]]) -> RecoveryReport:
    """PSNR statistics over (original, decrypted) pairs.

    Identical pairs land in the overflow (infinite) bin; summary moments are
    computed over the finite entries.
    """
    if len(pairs) == 0:
        raise EmptyBatch("recovery report needs at least one image pair")
    values = [psnr(a, b) for a, b in pairs]
    finite = [v for v in values if math.isfinite(v)]
    infinite_count = len(values) - len(finite)
    if finite:
        lo_bin = math.floor(min(finite))
        hi_bin = math.floor(max(finite))
        counts = {b: 0 for b in range(int(lo_bin), int(hi_bin) + 1)}
        for v in finite:
            counts[int(math.floor(v))] += 1
        histogram = tuple(sorted(counts.items()))
        f_mean, f_min, f_max = (
            float(np.mean(finite)),
            float(min(finite)),
            float(max(finite)),
        )
    else:
        histogram = ()
        f_mean = f_min = f_max = math.inf
    return RecoveryReport(
        psnrs=tuple(values),
        finite_mean=f_mean,
        finite_min=f_min,
        finite_max=f_max,
        infinite_count=infinite_count,
        histogram=histogram,
    )
