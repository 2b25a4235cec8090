"""Independent oracles shared by the test modules.

Everything here deliberately avoids the implementation paths it checks:
the readout root comes from bisection instead of the closed form, array
programming is replayed pulse by pulse on isolated devices, and Pearson /
PSNR are written out longhand.
"""

from __future__ import annotations

import math

import numpy as np

from securepix.array import pva_for_level
from securepix.fefet import PolarizationState, ProgrammingPulse
from securepix import fefet


def bisect_readout_current(delta_vpd, fe_state, var, params, iters=200):
    """Unique root of I = k*max(0, vov - I/G)^2 - found by pure bisection."""
    v_pd = params.v_dd - delta_vpd
    vov = v_pd - (params.v_tp + var.dvth_p)
    if vov <= 0.0:
        return 0.0
    g = fefet.conductance(fe_state, params.fe, var.dvth_fe)
    k = 0.5 * params.beta_p

    def f(i):
        vgs = vov - i / g
        return k * max(0.0, vgs) ** 2 - i

    lo, hi = 0.0, k * params.v_dd * params.v_dd * 1.01
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def replay_program_array(config, params, variations, key_levels):
    """Brute-force protocol replay on isolated single devices.

    For every pixel, walk the whole row-by-row schedule and apply, in order,
    exactly the pulses that pixel would see: half-select disturbs while other
    rows are written, then reset + full-amplitude program when its own row is
    selected, then more disturbs.  Returns the final p grid.
    """
    rows, cols = key_levels.shape
    p = np.zeros((rows, cols))
    for r in range(rows):
        for c in range(cols):
            state = PolarizationState(0.0)
            tf = float(variations.thickness_factor[r, c])
            for prog_row in range(rows):
                amplitude = pva_for_level(int(key_levels[prog_row, c]), config)
                if prog_row == r:
                    state = fefet.reset_state(params.fe)
                    state = fefet.apply_program_pulse(
                        state, ProgrammingPulse(amplitude=amplitude), params.fe, tf
                    )
                else:
                    state = fefet.apply_disturb(
                        state, config.half_select_kappa * amplitude, params.fe, tf
                    )
            p[r, c] = state.p
    return p


def pearson_longhand(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    mx, my = x.mean(), y.mean()
    num = float(np.sum((x - mx) * (y - my)))
    den = math.sqrt(float(np.sum((x - mx) ** 2)) * float(np.sum((y - my) ** 2)))
    return num / den


def psnr_longhand(a, b):
    diff = a.astype(np.float64) - b.astype(np.float64)
    mse = float((diff * diff).sum()) / diff.size
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 * 255.0 / mse)


def rel_diff(a, b, floor=1e-300):
    scale = max(abs(a), abs(b), floor)
    return abs(a - b) / scale
