"""2D pixel array: shared row/column control lines, row-wise key programming,
full-frame encrypted capture.

Column lines carry the programming gate voltage, so all pixels in a column
see the same amplitude while a row is being written.  The selected row has
its select and discharge lines asserted, grounding the FeFET sources so the
full amplitude programs them (after a baseline reset per device).  Every
other row keeps those lines off; its FeFET sources float high, and the
device sees only the half-select fraction kappa of the column voltage.  The
configuration invariant kappa * pva_max < pva_min guarantees that disturb
amplitude is below the weakest programming level, so previously written rows
keep their states (the ratchet model makes the residual change exactly zero
for a programmed device of the same pixel).

Programming walks rows top to bottom.  Capture is a pure, per-pixel map and
must be independent of evaluation order; the readout gate drive is applied
as a disturb at v_dd and is checked to leave every stored state unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import fefet
from .errors import (
    AmplitudeOutOfRange,
    ConfigError,
    DimensionMismatch,
    DisturbDuringReadout,
    LevelOutOfRange,
    OutOfRange,
    RowOutOfRange,
)
from .fefet import PolarizationState, ProgrammingPulse
from .pixel import PixelParams, readout_current
from .variation import SplitMix64, VariationField, identity_field


@dataclass(frozen=True)
class ArrayConfig:
    """Array geometry plus the level-to-voltage map and half-select fraction."""

    rows: int
    cols: int
    levels: int = 16
    pva_min: float = 1.3
    pva_max: float = 2.8
    half_select_kappa: float = 0.4

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ConfigError(f"array must be at least 1x1, got {self.rows}x{self.cols}")
        if self.levels < 2:
            raise ConfigError(f"need at least 2 levels, got {self.levels}")
        if not (self.pva_min < self.pva_max):
            raise ConfigError(
                f"need pva_min < pva_max, got {self.pva_min} >= {self.pva_max}"
            )
        if not (0.0 <= self.half_select_kappa < 1.0):
            raise ConfigError(f"kappa must be in [0, 1), got {self.half_select_kappa}")
        if self.half_select_kappa * self.pva_max >= self.pva_min:
            raise ConfigError(
                "no half-select protection margin: "
                f"kappa*pva_max = {self.half_select_kappa * self.pva_max} >= "
                f"pva_min = {self.pva_min}"
            )


def pva_for_level(level: int, config: ArrayConfig) -> float:
    """Linear level-to-amplitude map over [pva_min, pva_max]."""
    if not (1 <= level <= config.levels):
        raise LevelOutOfRange(f"level {level} outside [1, {config.levels}]")
    if config.levels == 1:
        return config.pva_max
    step = (config.pva_max - config.pva_min) / (config.levels - 1)
    return config.pva_min + (level - 1) * step


@dataclass(frozen=True)
class KeyMatrix:
    """Per-pixel programming level in {1..L}; this grid is the symmetric key."""

    levels: np.ndarray

    def __post_init__(self) -> None:
        if self.levels.ndim != 2:
            raise ConfigError("key matrix must be 2-D")

    @property
    def shape(self) -> tuple[int, int]:
        return self.levels.shape

    def validate(self, config: ArrayConfig) -> None:
        if self.levels.shape != (config.rows, config.cols):
            raise DimensionMismatch(
                f"key is {self.levels.shape}, array is {(config.rows, config.cols)}"
            )
        lo, hi = int(self.levels.min()), int(self.levels.max())
        if lo < 1 or hi > config.levels:
            raise LevelOutOfRange(
                f"key levels span [{lo}, {hi}], allowed [1, {config.levels}]"
            )


def random_key(config: ArrayConfig, seed: int) -> KeyMatrix:
    """I.i.d. uniform levels from a splitmix64 stream, row-major order."""
    stream = SplitMix64(seed)
    flat = np.empty(config.rows * config.cols, dtype=np.int64)
    for i in range(flat.size):
        flat[i] = 1 + int(stream.next_unit_half() * config.levels)
    return KeyMatrix(levels=flat.reshape(config.rows, config.cols))


@dataclass(frozen=True)
class ControlSignals:
    """Row/column line states: per-row reset/select/discharge, per-column gate."""

    rst: np.ndarray
    sl: np.ndarray
    dis: np.ndarray
    v_g: np.ndarray

    def assert_single_row_programming(self, row: int) -> None:
        for name, line in (("sl", self.sl), ("dis", self.dis)):
            active = np.flatnonzero(line)
            if active.tolist() != [row]:
                raise ConfigError(f"{name} lines must select exactly row {row}")

    def assert_imaging(self) -> None:
        if np.any(self.dis):
            raise ConfigError("discharge lines must stay off during imaging")


def programming_signals(config: ArrayConfig, row: int, pva_vector: np.ndarray) -> ControlSignals:
    sl = np.zeros(config.rows, dtype=bool)
    dis = np.zeros(config.rows, dtype=bool)
    sl[row] = True
    dis[row] = True
    return ControlSignals(
        rst=np.zeros(config.rows, dtype=bool), sl=sl, dis=dis, v_g=np.asarray(pva_vector, dtype=float)
    )


def imaging_signals(config: ArrayConfig, readout_drive: float) -> ControlSignals:
    return ControlSignals(
        rst=np.zeros(config.rows, dtype=bool),
        sl=np.ones(config.rows, dtype=bool),
        dis=np.zeros(config.rows, dtype=bool),
        v_g=np.full(config.cols, readout_drive),
    )


@dataclass(frozen=True)
class DisturbReport:
    """Audit of half-select disturbance: worst |dp| seen by unselected pixels."""

    max_delta_p: float = 0.0
    per_row_max: tuple = ()

    def merged(self, other: "DisturbReport") -> "DisturbReport":
        return DisturbReport(
            max_delta_p=max(self.max_delta_p, other.max_delta_p),
            per_row_max=self.per_row_max + other.per_row_max,
        )


@dataclass(frozen=True)
class PixelArray:
    """Array state: polarization and photodiode grids plus per-pixel variation."""

    config: ArrayConfig
    params: PixelParams
    variations: VariationField
    p: np.ndarray
    v_pd: np.ndarray

    @classmethod
    def build(
        cls,
        config: ArrayConfig,
        params: PixelParams,
        variations: Optional[VariationField] = None,
    ) -> "PixelArray":
        if variations is None:
            variations = identity_field(config.rows, config.cols)
        if variations.shape != (config.rows, config.cols):
            raise DimensionMismatch(
                f"variation field is {variations.shape}, array is "
                f"{(config.rows, config.cols)}"
            )
        return cls(
            config=config,
            params=params,
            variations=variations,
            p=np.zeros((config.rows, config.cols)),
            v_pd=np.full((config.rows, config.cols), params.v_dd),
        )


def program_row(
    array: PixelArray, row: int, pva_vector: np.ndarray
) -> tuple[PixelArray, DisturbReport]:
    """Write one row: reset-then-program selected devices at full amplitude,
    half-select disturb everywhere else.  Returns the updated array and the
    worst unselected |dp|."""
    cfg = array.config
    if not (0 <= row < cfg.rows):
        raise RowOutOfRange(f"row {row} outside [0, {cfg.rows})")
    pva = np.asarray(pva_vector, dtype=float)
    if pva.shape != (cfg.cols,):
        raise DimensionMismatch(f"pva vector has shape {pva.shape}, need ({cfg.cols},)")
    for c, amp in enumerate(pva):
        if not (cfg.pva_min <= amp <= cfg.pva_max):
            raise AmplitudeOutOfRange(
                f"column {c}: amplitude {amp} outside [{cfg.pva_min}, {cfg.pva_max}]"
            )

    signals = programming_signals(cfg, row, pva)
    signals.assert_single_row_programming(row)

    fe = array.params.fe
    p_new = array.p.copy()
    max_dp = 0.0
    for r in range(cfg.rows):
        selected = bool(signals.sl[r] and signals.dis[r])
        for c in range(cfg.cols):
            tf = float(array.variations.thickness_factor[r, c])
            if selected:
                state = fefet.reset_state(fe)
                pulse = ProgrammingPulse(amplitude=float(signals.v_g[c]))
                state = fefet.apply_program_pulse(state, pulse, fe, tf)
                p_new[r, c] = state.p
            else:
                # floating source: the device sees only a fraction of V_G
                v_eff = cfg.half_select_kappa * float(signals.v_g[c])
                before = PolarizationState(float(array.p[r, c]))
                after = fefet.apply_disturb(before, v_eff, fe, tf)
                p_new[r, c] = after.p
                dp = abs(after.p - before.p)
                if dp > max_dp:
                    max_dp = dp
    updated = PixelArray(
        config=cfg,
        params=array.params,
        variations=array.variations,
        p=p_new,
        v_pd=array.v_pd.copy(),
    )
    return updated, DisturbReport(max_delta_p=max_dp, per_row_max=(max_dp,))


def program_array(array: PixelArray, key: KeyMatrix) -> tuple[PixelArray, DisturbReport]:
    """Row-by-row programming, top to bottom, with the key's level per column."""
    cfg = array.config
    key.validate(cfg)
    report = DisturbReport()
    current = array
    for r in range(cfg.rows):
        pva_vector = np.array(
            [pva_for_level(int(key.levels[r, c]), cfg) for c in range(cfg.cols)]
        )
        current, row_report = program_row(current, r, pva_vector)
        report = report.merged(row_report)
    return current, report


def capture(array: PixelArray, voltage_frame: np.ndarray) -> np.ndarray:
    """Read one frame of photodiode drops into output currents.

    Pure per-pixel map (order-independent).  The readout gate drive (v_dd on
    the FeFET gate) is modeled as a disturb and must be a no-op on every
    stored state; a violation raises instead of silently corrupting the key.
    """
    cfg = array.config
    frame = np.asarray(voltage_frame, dtype=float)
    if frame.shape != (cfg.rows, cfg.cols):
        raise DimensionMismatch(
            f"voltage frame is {frame.shape}, array is {(cfg.rows, cfg.cols)}"
        )
    signals = imaging_signals(cfg, array.params.v_dd)
    signals.assert_imaging()

    fe = array.params.fe
    currents = np.empty((cfg.rows, cfg.cols))
    for r in range(cfg.rows):
        for c in range(cfg.cols):
            delta = float(frame[r, c])
            if not (0.0 <= delta <= array.params.v_dd):
                raise OutOfRange(
                    f"pixel ({r}, {c}): delta_vpd={delta} outside [0, {array.params.v_dd}]"
                )
            state = PolarizationState(float(array.p[r, c]))
            tf = float(array.variations.thickness_factor[r, c])
            disturbed = fefet.apply_disturb(state, float(signals.v_g[c]), fe, tf)
            if disturbed.p != state.p:
                raise DisturbDuringReadout(
                    f"pixel ({r}, {c}): readout drive would move p from "
                    f"{state.p} to {disturbed.p}"
                )
            currents[r, c] = readout_current(
                delta, state, array.variations.at(r, c), array.params
            )
    return currents
