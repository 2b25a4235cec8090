"""End-to-end image codec: codes -> photodiode voltages -> encrypted currents
-> 8-bit codes, and the lookup-table inverse for authorized receivers.

Forward (encryption) path, per pixel and channel:

    code --affine--> delta_vpd --programmed pixel--> i_out --quantize--> code'

The affine map sends code 255 to delta_vpd = 0 and code 0 to the full usable
swing v_dd - v_tp, so brighter inputs always yield larger currents.
Quantization is linear against one shared full scale: the variation-free
top-level current at delta_vpd = 0 (computed by `fullscale_current` and used
identically by both directions).

The receiver knows only the key.  Decryption inverts each pixel's nominal
(variation-free) transfer curve by monotone binary search with linear
interpolation; per-pixel process variation is unknown to it and simply shows
up as recovery noise.  Inverse voltages clamp to [0, v_swing] so out-of-gamut
codes land on the nearest representable tone.

Key files (.spk) are plain ASCII:

    SECUREPIX-KEY 1
    <rows> <cols> <L> <pva_min> <pva_max>
    <rows lines of cols levels in 1..L>
    seed <u64>          (optional)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .array import ArrayConfig, KeyMatrix, DisturbReport, PixelArray, capture, program_array, pva_for_level
from .config import RunConfig
from .errors import (
    CodeOutOfRange,
    DimensionMismatch,
    LevelOutOfRange,
    MalformedKeyFile,
)
from .fefet import PolarizationState, switched_fraction
from .frame import ImageFrame
from .pixel import PixelParams, TransferLUT, nominal_transfer_curve, readout_current
from .variation import NOMINAL, VariationSpec, identity_field, sample_frame

INVERSE_LUT_POINTS = 1024

_KEY_MAGIC = "SECUREPIX-KEY"
_KEY_VERSION = 1


def code_to_voltage(code: int, params: PixelParams) -> float:
    """Affine, bijective map of an 8-bit code onto [0, v_swing].

    Orientation is fixed: code 0 -> v_swing (darkest pixel, largest drop),
    code 255 -> 0 (brightest pixel, no drop).
    """
    if not (0 <= code <= 255):
        raise CodeOutOfRange(f"code {code} outside [0, 255]")
    return (1.0 - code / 255.0) * params.v_swing


def voltage_to_code(delta_vpd: float, params: PixelParams) -> int:
    """Inverse of code_to_voltage, rounded half-up and clamped to [0, 255]."""
    raw = 255.0 * (1.0 - delta_vpd / params.v_swing)
    code = int(math.floor(raw + 0.5))
    return 0 if code < 0 else (255 if code > 255 else code)


def quantize_current(i: float, i_fullscale: float) -> int:
    """Saturating linear 8-bit quantizer, round half-up."""
    if i < 0:
        raise CodeOutOfRange(f"current must be >= 0, got {i}")
    scaled = 255.0 * min(1.0, i / i_fullscale)
    return int(math.floor(scaled + 0.5))


def level_fraction(level: int, run: RunConfig) -> float:
    """Variation-free switched-domain fraction a level programs."""
    cfg = ArrayConfig(
        rows=1,
        cols=1,
        levels=run.levels,
        pva_min=run.pva_min,
        pva_max=run.pva_max,
        half_select_kappa=run.half_select_kappa,
    )
    return switched_fraction(pva_for_level(level, cfg), run.pixel.fe)


def fullscale_current(run: RunConfig) -> float:
    """Shared quantizer full scale: nominal top-level current at delta = 0."""
    p_top = level_fraction(run.levels, run)
    return readout_current(0.0, PolarizationState(p_top), NOMINAL, run.pixel)


def nominal_level_curve(level: int, run: RunConfig, n_points: int = INVERSE_LUT_POINTS) -> TransferLUT:
    """Receiver-side stored transfer curve for one level."""
    if not (1 <= level <= run.levels):
        raise LevelOutOfRange(f"level {level} outside [1, {run.levels}]")
    return nominal_transfer_curve(level_fraction(level, run), run.pixel, n_points, level=level)


@dataclass(frozen=True)
class InverseLUT:
    """code -> estimated delta_vpd map for one level, clamped to [0, v_swing]."""

    level: int
    code_to_delta: np.ndarray


def _invert_monotone(lut: TransferLUT, target: float) -> float:
    """delta at which the non-increasing curve crosses `target`."""
    grid = lut.delta_vpd
    curve = lut.i_out
    idx = int(np.searchsorted(-curve, -target, side="left"))
    if idx <= 0:
        return float(grid[0])
    if idx >= len(grid):
        return float(grid[-1])
    c0, c1 = float(curve[idx - 1]), float(curve[idx])
    if c0 == c1:
        return float(grid[idx])
    t = (c0 - target) / (c0 - c1)
    return float(grid[idx - 1]) + t * float(grid[idx] - grid[idx - 1])


def build_inverse_lut(
    level: int, run: RunConfig, n_points: int = INVERSE_LUT_POINTS
) -> InverseLUT:
    """Compose the nominal level curve with the quantizer and invert it.

    Entry q holds the delta_vpd estimate for received code q.  A broken
    parameterization whose curve is not monotone raises NonMonotoneCurve
    (from the curve constructor) rather than producing garbage.
    """
    if n_points < 256:
        raise CodeOutOfRange(f"inverse LUT needs >= 256 points, got {n_points}")
    lut = nominal_level_curve(level, run, n_points)
    ifs = fullscale_current(run)
    v_swing = run.pixel.v_swing
    table = np.empty(256)
    for q in range(256):
        delta = _invert_monotone(lut, q * ifs / 255.0)
        table[q] = min(max(delta, 0.0), v_swing)
    return InverseLUT(level=level, code_to_delta=table)


# ---------------------------------------------------------------------------
# key files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KeyFile:
    """A key matrix plus the array parameters it was generated under."""

    rows: int
    cols: int
    levels: int
    pva_min: float
    pva_max: float
    matrix: KeyMatrix
    seed: Optional[int] = None

    def array_config(self, half_select_kappa: float) -> ArrayConfig:
        return ArrayConfig(
            rows=self.rows,
            cols=self.cols,
            levels=self.levels,
            pva_min=self.pva_min,
            pva_max=self.pva_max,
            half_select_kappa=half_select_kappa,
        )

    def key_space_bits(self) -> float:
        """Total key entropy for i.i.d.-uniform levels: rows*cols*log2(L)."""
        return self.rows * self.cols * math.log2(self.levels)


def serialize_key(key: KeyFile) -> str:
    lines = [
        f"{_KEY_MAGIC} {_KEY_VERSION}",
        f"{key.rows} {key.cols} {key.levels} {key.pva_min!r} {key.pva_max!r}",
    ]
    for r in range(key.rows):
        lines.append(" ".join(str(int(v)) for v in key.matrix.levels[r]))
    if key.seed is not None:
        lines.append(f"seed {key.seed}")
    return "\n".join(lines) + "\n"


def parse_key(text: str, source: str = "<key>") -> KeyFile:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise MalformedKeyFile(f"{source}: too short to be a key file")
    magic = lines[0].split()
    if len(magic) != 2 or magic[0] != _KEY_MAGIC or magic[1] != str(_KEY_VERSION):
        raise MalformedKeyFile(f"{source}: bad magic line {lines[0]!r}")
    fields = lines[1].split()
    if len(fields) != 5:
        raise MalformedKeyFile(f"{source}: header needs 5 fields, got {lines[1]!r}")
    try:
        rows, cols, levels = int(fields[0]), int(fields[1]), int(fields[2])
        pva_min, pva_max = float(fields[3]), float(fields[4])
    except ValueError as exc:
        raise MalformedKeyFile(f"{source}: non-numeric header field in {lines[1]!r}") from exc
    if rows < 1 or cols < 1 or levels < 2 or not (pva_min < pva_max):
        raise MalformedKeyFile(f"{source}: implausible header {lines[1]!r}")

    body = lines[2:]
    seed: Optional[int] = None
    if body and body[-1].startswith("seed"):
        parts = body[-1].split()
        if len(parts) != 2:
            raise MalformedKeyFile(f"{source}: bad seed line {body[-1]!r}")
        try:
            seed = int(parts[1])
        except ValueError as exc:
            raise MalformedKeyFile(f"{source}: bad seed value {parts[1]!r}") from exc
        body = body[:-1]
    if len(body) != rows:
        raise MalformedKeyFile(f"{source}: expected {rows} matrix rows, got {len(body)}")
    grid = np.empty((rows, cols), dtype=np.int64)
    for r, line in enumerate(body):
        values = line.split()
        if len(values) != cols:
            raise MalformedKeyFile(
                f"{source}: row {r} has {len(values)} entries, expected {cols}"
            )
        for c, v in enumerate(values):
            try:
                lvl = int(v)
            except ValueError as exc:
                raise MalformedKeyFile(f"{source}: non-integer level {v!r}") from exc
            if not (1 <= lvl <= levels):
                raise MalformedKeyFile(
                    f"{source}: level {lvl} at ({r}, {c}) outside [1, {levels}]"
                )
            grid[r, c] = lvl
    return KeyFile(
        rows=rows,
        cols=cols,
        levels=levels,
        pva_min=pva_min,
        pva_max=pva_max,
        matrix=KeyMatrix(levels=grid),
        seed=seed,
    )


def write_key(path, key: KeyFile) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(serialize_key(key))


def read_key(path) -> KeyFile:
    try:
        with open(path, "r", encoding="ascii") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedKeyFile(f"cannot read key file {path}: {exc}") from exc
    return parse_key(text, source=str(path))


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EncryptResult:
    frame: ImageFrame
    metadata: dict
    disturb_report: DisturbReport


def _pipeline_config(key: KeyFile, run: RunConfig) -> RunConfig:
    """The key's level map wins over the run config (the key was generated
    under it); only kappa and device physics come from the run config."""
    return replace(run, levels=key.levels, pva_min=key.pva_min, pva_max=key.pva_max)


def _variation_summary(spec: VariationSpec) -> str:
    return (
        f"enabled={spec.enabled},rel_sigma={spec.thickness_rel_sigma!r},"
        f"vth_sigma={spec.vth_sigma!r},clamp={spec.clamp_at!r}"
    )


def encrypt(
    image: ImageFrame,
    key: KeyFile,
    run: RunConfig,
    variation_seed: int = 0,
) -> EncryptResult:
    """Per-pixel analog encryption of an 8-bit frame.

    RGB frames are processed channel by channel with the same key.  The
    result carries the variation seed, a variation summary, and the config
    hash as metadata; given (image, key, variation_seed) the output is fully
    deterministic.
    """
    if (image.rows, image.cols) != (key.rows, key.cols):
        raise DimensionMismatch(
            f"image is {image.rows}x{image.cols}, key is {key.rows}x{key.cols}"
        )
    run = _pipeline_config(key, run)
    arr_cfg = key.array_config(run.half_select_kappa)
    if run.variation.enabled:
        variations = sample_frame(variation_seed, key.rows, key.cols, run.variation)
    else:
        variations = identity_field(key.rows, key.cols)
    array = PixelArray.build(arr_cfg, run.pixel, variations)
    array, report = program_array(array, key.matrix)

    ifs = fullscale_current(run)
    volt_map = np.array([code_to_voltage(c, run.pixel) for c in range(256)])

    def encrypt_plane(plane: np.ndarray) -> np.ndarray:
        currents = capture(array, volt_map[plane])
        out = np.empty_like(plane)
        for r in range(key.rows):
            for c in range(key.cols):
                out[r, c] = quantize_current(float(currents[r, c]), ifs)
        return out

    if image.channels == 1:
        encrypted = encrypt_plane(image.data)
    else:
        encrypted = np.stack(
            [encrypt_plane(image.data[:, :, ch]) for ch in range(3)], axis=2
        )
    metadata = {
        "seed": str(variation_seed),
        "config": run.config_hash(),
        "variation": _variation_summary(run.variation),
    }
    return EncryptResult(
        frame=ImageFrame(data=encrypted), metadata=metadata, disturb_report=report
    )


def decrypt(encrypted: ImageFrame, key: KeyFile, run: RunConfig) -> ImageFrame:
    """Pixel-wise inverse mapping through the nominal per-level lookup tables.

    Uses only the key; per-pixel variation data never reaches the receiver.
    """
    if (encrypted.rows, encrypted.cols) != (key.rows, key.cols):
        raise DimensionMismatch(
            f"image is {encrypted.rows}x{encrypted.cols}, key is {key.rows}x{key.cols}"
        )
    run = _pipeline_config(key, run)
    inverses = {
        int(level): build_inverse_lut(int(level), run)
        for level in np.unique(key.matrix.levels)
    }

    def decrypt_plane(plane: np.ndarray) -> np.ndarray:
        out = np.empty_like(plane)
        for r in range(key.rows):
            for c in range(key.cols):
                inv = inverses[int(key.matrix.levels[r, c])]
                delta_hat = float(inv.code_to_delta[int(plane[r, c])])
                out[r, c] = voltage_to_code(delta_hat, run.pixel)
        return out

    if encrypted.channels == 1:
        data = decrypt_plane(encrypted.data)
    else:
        data = np.stack(
            [decrypt_plane(encrypted.data[:, :, ch]) for ch in range(3)], axis=2
        )
    return ImageFrame(data=data)
