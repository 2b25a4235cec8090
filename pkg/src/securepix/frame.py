"""8-bit image frames and binary netpbm (PGM P5 / PPM P6) I/O.

Header comment lines of the form `# securepix-<key>=<value>` carry pipeline
metadata (variation seed, config hash); other comments are ignored.  Only
maxval 255 is supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MalformedImage

_META_PREFIX = "securepix-"


@dataclass(frozen=True)
class ImageFrame:
    """uint8 pixel grid, shape (rows, cols) grayscale or (rows, cols, 3) RGB."""

    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.dtype != np.uint8:
            raise MalformedImage(f"frame data must be uint8, got {self.data.dtype}")
        if self.data.ndim == 3 and self.data.shape[2] != 3:
            raise MalformedImage(f"color frames need 3 channels, got {self.data.shape[2]}")
        if self.data.ndim not in (2, 3):
            raise MalformedImage(f"frame must be 2-D or 3-D, got ndim={self.data.ndim}")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return 1 if self.data.ndim == 2 else 3

    def to_gray_float(self, weights=None) -> np.ndarray:
        """Grayscale view as float64.

        RGB collapses by unweighted channel mean unless `weights` (three
        non-negative numbers, normalized here) says otherwise.
        """
        if self.data.ndim == 2:
            return self.data.astype(np.float64)
        if weights is None:
            return self.data.astype(np.float64).mean(axis=2)
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (3,) or w.sum() <= 0:
            raise MalformedImage(f"gray weights must be 3 non-negative values, got {weights}")
        return self.data.astype(np.float64) @ (w / w.sum())

    def same_shape(self, other: "ImageFrame") -> bool:
        return self.data.shape == other.data.shape


def _tokenize_header(blob: bytes, n_tokens: int):
    """Yield header tokens, skipping whitespace and comment lines; returns
    (tokens, offset_of_pixel_data, metadata)."""
    tokens: list[bytes] = []
    meta: dict[str, str] = {}
    i = 0
    while len(tokens) < n_tokens:
        if i >= len(blob):
            raise MalformedImage("truncated netpbm header")
        ch = blob[i : i + 1]
        if ch == b"#":
            j = blob.find(b"\n", i)
            if j < 0:
                raise MalformedImage("unterminated comment in netpbm header")
            comment = blob[i + 1 : j].decode("ascii", errors="replace").strip()
            if comment.startswith(_META_PREFIX) and "=" in comment:
                key, value = comment[len(_META_PREFIX):].split("=", 1)
                meta[key] = value
            i = j + 1
        elif ch.isspace():
            i += 1
        else:
            j = i
            while j < len(blob) and not blob[j : j + 1].isspace() and blob[j : j + 1] != b"#":
                j += 1
            tokens.append(blob[i:j])
            i = j
    # exactly one whitespace byte separates the maxval from the raster
    if i >= len(blob) or not blob[i : i + 1].isspace():
        raise MalformedImage("missing separator before pixel data")
    return tokens, i + 1, meta


def read_netpbm(path) -> tuple[ImageFrame, dict[str, str]]:
    """Read a binary PGM/PPM file; returns the frame and its metadata dict."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise MalformedImage(f"cannot read image file {path}: {exc}") from exc
    tokens, offset, meta = _tokenize_header(blob, 4)
    magic = tokens[0]
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise MalformedImage(f"unsupported netpbm magic {magic!r}")
    try:
        cols, rows, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise MalformedImage(f"bad netpbm header fields {tokens[1:]}") from exc
    if maxval != 255:
        raise MalformedImage(f"only maxval 255 supported, got {maxval}")
    if rows < 1 or cols < 1:
        raise MalformedImage(f"bad image dimensions {cols}x{rows}")
    need = rows * cols * channels
    raster = blob[offset : offset + need]
    if len(raster) != need:
        raise MalformedImage(f"raster truncated: need {need} bytes, have {len(raster)}")
    data = np.frombuffer(raster, dtype=np.uint8).copy()
    shape = (rows, cols) if channels == 1 else (rows, cols, 3)
    return ImageFrame(data=data.reshape(shape)), meta


def write_netpbm(path, frame: ImageFrame, metadata: dict[str, str] | None = None) -> None:
    """Write binary PGM (grayscale) or PPM (RGB), maxval 255.

    Metadata entries become `# securepix-<key>=<value>` comment lines, in
    sorted key order so files are byte-reproducible.
    """
    magic = b"P5" if frame.channels == 1 else b"P6"
    lines = [magic]
    for key in sorted(metadata or {}):
        lines.append(f"# {_META_PREFIX}{key}={metadata[key]}".encode("ascii"))
    lines.append(f"{frame.cols} {frame.rows}".encode("ascii"))
    lines.append(b"255")
    header = b"\n".join(lines) + b"\n"
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(frame.data.tobytes())


def _gaussian_blur(field: np.ndarray, sigma: float) -> np.ndarray:
    radius = int(math.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-0.5 * (x / sigma) ** 2)
    kernel /= kernel.sum()

    def smooth_1d(line: np.ndarray) -> np.ndarray:
        padded = np.pad(line, radius, mode="reflect")
        return np.convolve(padded, kernel, mode="same")[radius:-radius]

    out = np.apply_along_axis(smooth_1d, 0, field)
    return np.apply_along_axis(smooth_1d, 1, out)


def synthetic_natural(
    rows: int,
    cols: int,
    seed: int = 7,
    mean: float = 150.0,
    std: float = 18.0,
    smooth: float = 3.0,
) -> ImageFrame:
    """Deterministic natural-looking test scene.

    Low-pass filtered Gaussian noise rescaled to the requested tone
    statistics; with the default smoothing the adjacent-pixel correlations
    come out around 0.92-0.98, comparable to photographic content.
    """
    rng = np.random.default_rng(seed)
    field = _gaussian_blur(rng.standard_normal((rows, cols)), smooth)
    field = (field - field.mean()) / field.std()
    codes = np.clip(np.rint(mean + std * field), 0, 255).astype(np.uint8)
    return ImageFrame(data=codes)
