"""Behavioral multidomain FeFET model.

The ferroelectric gate stack is treated as a large ensemble of independently
switching nanoscale domains whose coercive voltages follow a normal
distribution N(mu_c, sigma_c^2).  A positive gate pulse switches every domain
whose coercive voltage lies below the effective pulse amplitude, so after a
baseline reset the retained switched-domain fraction equals the coercive CDF
evaluated at the amplitude:

    p = Phi((amplitude - mu_c * thickness_factor) / sigma_c)

`p` in [0, 1] is the non-volatile state variable and acts as a surrogate for
remnant polarization.  Update semantics are a ratchet: positive pulses can
only switch additional domains (p never decreases), and only the large
negative reset pulse restores the fully unswitched baseline p = 0.  Repeated
sub-threshold disturbs are therefore idempotent; domain-accumulation effects
are deliberately not modeled.

Film thickness enters as a multiplicative scaling of the mean coercive
voltage (the field across a thicker film is lower for the same gate voltage).
Channel conductance interpolates linearly between g_min (p = 0) and g_max
(p = 1); a threshold-voltage shift of the FeFET perturbs conductance through
a first-order linearization around a 0.7 V overdrive and is floored at
g_min / 100 so the readout stack always sees a positive load.

All operations are pure functions over immutable value types and are safe to
evaluate for many device instances in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, NonPositiveThickness

# Overdrive used to linearize the conductance sensitivity to FeFET Vth shifts.
CONDUCTANCE_OVERDRIVE_V = 0.7

# Conductance floor, as a fraction of g_min.
CONDUCTANCE_FLOOR_FRACTION = 0.01


def normal_cdf(z: float) -> float:
    """Standard normal CDF via erfc (accurate in both tails)."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


@dataclass(frozen=True)
class FeDeviceParams:
    """Device parameters of the multidomain FeFET.

    mu_c / sigma_c describe the coercive-voltage distribution of the domain
    ensemble (volts).  g_min / g_max bound the channel conductance (siemens).
    v_reset is the magnitude of the negative baseline-reset pulse and must
    exceed the whole coercive distribution (mu_c + 4 sigma_c).
    """

    mu_c: float = 2.05
    sigma_c: float = 0.35
    g_min: float = 8.0e-8
    g_max: float = 2.1e-7
    v_reset: float = 3.5

    def __post_init__(self) -> None:
        if self.sigma_c <= 0:
            raise ConfigError(f"sigma_c must be positive, got {self.sigma_c}")
        if not (self.g_max > self.g_min > 0):
            raise ConfigError(
                f"need g_max > g_min > 0, got g_min={self.g_min}, g_max={self.g_max}"
            )
        if self.v_reset < self.mu_c + 4.0 * self.sigma_c:
            raise ConfigError(
                f"v_reset={self.v_reset} does not cover the coercive distribution "
                f"(needs >= {self.mu_c + 4.0 * self.sigma_c})"
            )


@dataclass(frozen=True)
class PolarizationState:
    """Switched-domain fraction p in [0, 1]; non-volatile between operations."""

    p: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.p <= 1.0):
            raise ConfigError(f"polarization fraction out of [0, 1]: {self.p}")


@dataclass(frozen=True)
class ProgrammingPulse:
    """Positive gate programming pulse.

    amplitude is the programming voltage amplitude in volts; the protocol
    applies the baseline reset first and records that in preceded_by_reset.
    """

    amplitude: float
    preceded_by_reset: bool = True

    def __post_init__(self) -> None:
        if self.amplitude <= 0:
            raise ConfigError(f"pulse amplitude must be positive, got {self.amplitude}")


def reset_state(params: FeDeviceParams) -> PolarizationState:
    """Negative baseline pulse: drives every domain to the unswitched branch."""
    return PolarizationState(0.0)


def switched_fraction(
    amplitude: float, params: FeDeviceParams, thickness_factor: float = 1.0
) -> float:
    """Fraction of domains a pulse of `amplitude` switches from baseline.

    thickness_factor rescales the mean coercive voltage (thicker film, higher
    effective coercive voltage).  Amplitudes <= 0 switch nothing.
    """
    if thickness_factor <= 0:
        raise NonPositiveThickness(f"thickness_factor must be > 0, got {thickness_factor}")
    if amplitude <= 0.0:
        return 0.0
    z = (amplitude - params.mu_c * thickness_factor) / params.sigma_c
    return normal_cdf(z)


def apply_program_pulse(
    state: PolarizationState,
    pulse: ProgrammingPulse,
    params: FeDeviceParams,
    thickness_factor: float = 1.0,
) -> PolarizationState:
    """Ratchet update: already-switched domains stay switched."""
    target = switched_fraction(pulse.amplitude, params, thickness_factor)
    return PolarizationState(max(state.p, target))


def apply_disturb(
    state: PolarizationState,
    v_effective: float,
    params: FeDeviceParams,
    thickness_factor: float = 1.0,
) -> PolarizationState:
    """Unintended partial pulse seen by an unselected device.

    Same ratchet update as a programming pulse at the reduced effective
    amplitude; v_effective <= 0 is no pulse at all and leaves the state
    untouched.  Repeated identical disturbs are idempotent.
    """
    if v_effective <= 0.0:
        return state
    target = switched_fraction(v_effective, params, thickness_factor)
    if target <= state.p:
        return state
    return PolarizationState(target)


def conductance(
    state: PolarizationState, params: FeDeviceParams, dvth_fe: float = 0.0
) -> float:
    """Channel conductance for a stored state, in siemens.

    Linear in p between g_min and g_max; a threshold shift dvth_fe perturbs
    the result by the first-order factor (1 - dvth_fe / 0.7 V), floored at
    g_min / 100 so the result is always positive.
    """
    g = params.g_min + state.p * (params.g_max - params.g_min)
    g *= 1.0 - dvth_fe / CONDUCTANCE_OVERDRIVE_V
    floor = params.g_min * CONDUCTANCE_FLOOR_FRACTION
    return g if g > floor else floor
