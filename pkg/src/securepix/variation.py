"""Deterministic per-pixel process-variation sampling.

Sampling is counter-based: the draw for pixel (row, col) under a given seed
depends only on (seed, row, col), never on call order or shared generator
state.  Frames can therefore be filled in any order or in parallel and a
single pixel's sample can be re-derived in isolation.

Bit-exact recipe (stable contract; cross-language reproducible):

1. substream key   k0 = (seed XOR ((row << 32) | col)) mod 2^64
2. substream words w1..w4 are successive splitmix64 outputs starting from k0:
       s_i = (s_{i-1} + 0x9E3779B97F4A7C15) mod 2^64        (s_0 = k0)
       w_i = mix(s_i)
   where mix(z):  z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;
                  z ^= z >> 27;  z *= 0x94D049BB133111EB;
                  z ^= z >> 31          (all arithmetic mod 2^64)
3. uniforms from a word w:
       u_open = ((w >> 11) + 1) * 2^-53   in (0, 1]   (safe for log)
       u_half = (w >> 11) * 2^-53         in [0, 1)
4. Box-Muller on word pairs:
       r  = sqrt(-2 ln u_open(w_odd));  t = 2 pi u_half(w_even)
       z0 = r cos t;  z1 = r sin t
5. standard-normal draws (thickness, dvth_p, dvth_fe) = (z0 of (w1,w2),
   z1 of (w1,w2), z0 of (w3,w4)); each is clamped to +-clamp_at before
   scaling by its sigma.  thickness_factor = 1 + thickness_rel_sigma * draw.

The same splitmix64 stream (without the coordinate mixing) also backs key
generation so that every random artifact in the package is reproducible from
an explicit 64-bit seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_TWO_NEG53 = 2.0 ** -53


def mix64(z: int) -> int:
    """splitmix64 finalizer: avalanche a 64-bit value."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Minimal splitmix64 stream; state advances by the golden gamma."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_word(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return mix64(self._state)

    def next_unit_open(self) -> float:
        """Uniform in (0, 1]."""
        return ((self.next_word() >> 11) + 1) * _TWO_NEG53

    def next_unit_half(self) -> float:
        """Uniform in [0, 1)."""
        return (self.next_word() >> 11) * _TWO_NEG53

    def next_normal_pair(self) -> tuple[float, float]:
        """Box-Muller transform of two stream words."""
        r = math.sqrt(-2.0 * math.log(self.next_unit_open()))
        t = 2.0 * math.pi * self.next_unit_half()
        return r * math.cos(t), r * math.sin(t)


def substream_key(seed: int, row: int, col: int) -> int:
    """Per-pixel substream key: mix the coordinates into the seed."""
    return (seed ^ (((row & 0xFFFFFFFF) << 32) | (col & 0xFFFFFFFF))) & _MASK64


@dataclass(frozen=True)
class VariationSample:
    """Per-pixel process perturbations.

    thickness_factor scales the FeFET coercive voltage during programming;
    dvth_p shifts the sense transistor threshold; dvth_fe shifts the FeFET
    threshold (entering through conductance).  Both shifts are bounded by
    clamp_at * vth_sigma (0.15 V at defaults).
    """

    thickness_factor: float = 1.0
    dvth_p: float = 0.0
    dvth_fe: float = 0.0


NOMINAL = VariationSample()


@dataclass(frozen=True)
class VariationSpec:
    """Monte Carlo setup: 4 nm nominal FeCap thickness with a relative sigma
    of 3% (3 sigma = +-9%) and 50 mV threshold sigma (3 sigma = +-150 mV),
    hard-clamped at clamp_at sigmas."""

    thickness_nominal: float = 4.0e-9
    thickness_rel_sigma: float = 0.03
    vth_sigma: float = 0.05
    clamp_at: float = 3.0
    enabled: bool = True

    def __post_init__(self) -> None:
        if self.thickness_rel_sigma < 0 or self.vth_sigma < 0:
            raise ConfigError("variation sigmas must be >= 0")
        if self.clamp_at <= 0:
            raise ConfigError(f"clamp_at must be > 0, got {self.clamp_at}")


def _clamp(value: float, bound: float) -> float:
    return -bound if value < -bound else (bound if value > bound else value)


def sample_pixel(seed: int, row: int, col: int, spec: VariationSpec) -> VariationSample:
    """Draw the variation sample of pixel (row, col) for a seed.

    Returns the identity sample when the spec is disabled.  See the module
    docstring for the bit-exact derivation.
    """
    if not spec.enabled:
        return NOMINAL
    stream = SplitMix64(substream_key(seed, row, col))
    z0a, z1a = stream.next_normal_pair()
    z0b, _ = stream.next_normal_pair()
    c = spec.clamp_at
    return VariationSample(
        thickness_factor=1.0 + spec.thickness_rel_sigma * _clamp(z0a, c),
        dvth_p=spec.vth_sigma * _clamp(z1a, c),
        dvth_fe=spec.vth_sigma * _clamp(z0b, c),
    )


@dataclass(frozen=True)
class VariationField:
    """rows x cols grid of variation samples, stored as parallel arrays."""

    thickness_factor: np.ndarray
    dvth_p: np.ndarray
    dvth_fe: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.thickness_factor.shape

    def at(self, row: int, col: int) -> VariationSample:
        return VariationSample(
            thickness_factor=float(self.thickness_factor[row, col]),
            dvth_p=float(self.dvth_p[row, col]),
            dvth_fe=float(self.dvth_fe[row, col]),
        )


def identity_field(rows: int, cols: int) -> VariationField:
    return VariationField(
        thickness_factor=np.ones((rows, cols)),
        dvth_p=np.zeros((rows, cols)),
        dvth_fe=np.zeros((rows, cols)),
    )


def sample_frame(seed: int, rows: int, cols: int, spec: VariationSpec) -> VariationField:
    """Grid where entry (r, c) = sample_pixel(seed, r, c, spec)."""
    if rows < 1 or cols < 1:
        raise ConfigError(f"frame dimensions must be >= 1, got {rows}x{cols}")
    if not spec.enabled:
        return identity_field(rows, cols)
    tf = np.empty((rows, cols))
    dvp = np.empty((rows, cols))
    dvf = np.empty((rows, cols))
    for r in range(rows):
        for c in range(cols):
            s = sample_pixel(seed, r, c, spec)
            tf[r, c] = s.thickness_factor
            dvp[r, c] = s.dvth_p
            dvf[r, c] = s.dvth_fe
    return VariationField(tf, dvp, dvf)
