"""Single-pixel behavioral model: reset, light integration, encrypted readout.

The pixel is a 3T front end (PMOS reset, so the photodiode node reaches the
full rail) feeding a readout branch in which a square-law sense transistor
X_P sits in series with the FeFET acting as a polarization-programmed linear
conductance G.  During readout the output current I solves

    I = (beta_p / 2) * max(0, (V_PD - I / G) - (v_tp + dvth_p))^2

i.e. the source of X_P rides at I / G.  The equation has a unique physical
root, obtained here in closed form from the stable quadratic formulation;
currents are zero exactly when the gate overdrive is non-positive.  Sweeping
the photodiode drop produces one non-increasing transfer curve per programmed
level, and curves for different levels never cross: that monotone, ordered,
invertible family is what the codec relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import fefet
from .errors import (
    ConfigError,
    NegativeDuration,
    NegativePhotocurrent,
    NonMonotoneCurve,
    OutOfRange,
)
from .fefet import FeDeviceParams, PolarizationState
from .variation import NOMINAL, VariationSample


@dataclass(frozen=True)
class PixelParams:
    """Circuit constants.  v_dd 1.0 V rail, c_pd photodiode capacitance,
    v_tp / beta_p the sense-transistor threshold and transconductance."""

    v_dd: float = 1.0
    c_pd: float = 1.0e-14
    i_dark: float = 0.0
    v_tp: float = 0.3
    beta_p: float = 2.0e-4
    fe: FeDeviceParams = field(default_factory=FeDeviceParams)

    def __post_init__(self) -> None:
        if self.v_dd <= 0:
            raise ConfigError(f"v_dd must be positive, got {self.v_dd}")
        if self.c_pd <= 0:
            raise ConfigError(f"c_pd must be positive, got {self.c_pd}")
        if not (0 < self.v_tp < self.v_dd):
            raise ConfigError(f"v_tp must lie in (0, v_dd), got {self.v_tp}")

    @property
    def v_swing(self) -> float:
        """Usable photodiode swing: drops beyond v_dd - v_tp read as zero."""
        return self.v_dd - self.v_tp


@dataclass(frozen=True)
class PixelState:
    """Live pixel state: photodiode node voltage plus the stored FeFET state."""

    v_pd: float
    fe_state: PolarizationState = field(default_factory=PolarizationState)


def reset(state: PixelState, params: PixelParams) -> PixelState:
    """PMOS reset charges the photodiode node to the full rail.

    The stored polarization is untouched; imaging never reprograms the key.
    """
    return PixelState(v_pd=params.v_dd, fe_state=state.fe_state)


def integrate(state: PixelState, i_pd: float, t: float, params: PixelParams) -> PixelState:
    """Light integration: dV_PD/dt = -(I_PD + I_dark) / C_PD, clamped at ground."""
    if i_pd < 0:
        raise NegativePhotocurrent(f"photocurrent must be >= 0, got {i_pd}")
    if t < 0:
        raise NegativeDuration(f"integration time must be >= 0, got {t}")
    drop = (i_pd + params.i_dark) * t / params.c_pd
    return PixelState(v_pd=max(0.0, state.v_pd - drop), fe_state=state.fe_state)


def readout_current(
    delta_vpd: float,
    fe_state: PolarizationState,
    var: VariationSample,
    params: PixelParams,
) -> float:
    """Output current for a photodiode drop delta_vpd = v_dd - V_PD.

    Closed-form root of the series-stack equation; see the module docstring.
    Strictly decreasing in delta_vpd while the overdrive is positive, zero
    afterwards, and strictly increasing in the programmed fraction p.
    """
    if not (0.0 <= delta_vpd <= params.v_dd):
        raise OutOfRange(f"delta_vpd={delta_vpd} outside [0, {params.v_dd}]")
    v_pd = params.v_dd - delta_vpd
    vov = v_pd - (params.v_tp + var.dvth_p)
    if vov <= 0.0:
        return 0.0
    g = fefet.conductance(fe_state, params.fe, var.dvth_fe)
    k = 0.5 * params.beta_p
    # I = k (vov - I/g)^2 -> (k/g^2) I^2 - (2 k vov / g + 1) I + k vov^2 = 0.
    # The physical (smaller) root, written without cancellation:
    t = 2.0 * k * vov / g
    return 2.0 * k * vov * vov / ((1.0 + t) + math.sqrt(1.0 + 2.0 * t))


@dataclass(frozen=True)
class TransferLUT:
    """Sampled transfer curve of one programmed level.

    delta_vpd is a strictly increasing uniform grid; i_out is non-increasing.
    """

    delta_vpd: np.ndarray
    i_out: np.ndarray
    level: Optional[int] = None

    def __post_init__(self) -> None:
        if len(self.delta_vpd) < 2 or len(self.delta_vpd) != len(self.i_out):
            raise ConfigError("transfer LUT needs >= 2 aligned samples")
        if not np.all(np.diff(self.delta_vpd) > 0):
            raise NonMonotoneCurve("LUT grid must be strictly increasing")
        if np.any(np.diff(self.i_out) > 0):
            raise NonMonotoneCurve("LUT ordinates must be non-increasing")

    def write_csv(self, path) -> None:
        """CSV export: header delta_vpd,i_out; SI units, full double precision."""
        with open(path, "w", encoding="ascii") as fh:
            fh.write("delta_vpd,i_out\n")
            for d, i in zip(self.delta_vpd, self.i_out):
                fh.write(f"{float(d)!r},{float(i)!r}\n")


def transfer_curve(
    level_p: float,
    var: VariationSample,
    params: PixelParams,
    n_points: int = 1024,
    level: Optional[int] = None,
) -> TransferLUT:
    """Sample the readout current over delta_vpd in [0, v_dd]."""
    if n_points < 2:
        raise ConfigError(f"n_points must be >= 2, got {n_points}")
    state = PolarizationState(level_p)
    grid = np.linspace(0.0, params.v_dd, n_points)
    currents = np.array([readout_current(float(d), state, var, params) for d in grid])
    return TransferLUT(delta_vpd=grid, i_out=currents, level=level)


def nominal_transfer_curve(
    level_p: float, params: PixelParams, n_points: int = 1024, level: Optional[int] = None
) -> TransferLUT:
    """Variation-free transfer curve, as stored at the receiver."""
    return transfer_curve(level_p, NOMINAL, params, n_points, level)
