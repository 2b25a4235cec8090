import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from securepix.errors import (
    ConfigError,
    NegativeDuration,
    NegativePhotocurrent,
    NonMonotoneCurve,
    OutOfRange,
)
from securepix.fefet import PolarizationState
from securepix.pixel import (
    PixelParams,
    PixelState,
    TransferLUT,
    integrate,
    nominal_transfer_curve,
    readout_current,
    reset,
    transfer_curve,
)
from securepix.variation import NOMINAL, VariationSample

from helpers import bisect_readout_current, rel_diff


def test_reset_charges_to_rail(pixel_params):
    state = PixelState(v_pd=0.2, fe_state=PolarizationState(0.7))
    after = reset(state, pixel_params)
    assert after.v_pd == pixel_params.v_dd
    assert after.fe_state.p == 0.7


def test_reset_idempotent(pixel_params):
    state = PixelState(v_pd=pixel_params.v_dd)
    assert reset(state, pixel_params).v_pd == pixel_params.v_dd


def test_integrate_no_light_no_drop(pixel_params):
    state = PixelState(v_pd=0.8)
    assert integrate(state, 0.0, 1.0, pixel_params).v_pd == 0.8


def test_integrate_drop_arithmetic(pixel_params):
    # 5 pA for 1 ms into 10 fF drops half the rail
    state = PixelState(v_pd=1.0)
    after = integrate(state, 5e-12, 1e-3, pixel_params)
    assert after.v_pd == pytest.approx(0.5, rel=1e-12)


def test_integrate_clamps_at_ground(pixel_params):
    state = PixelState(v_pd=1.0)
    assert integrate(state, 50e-12, 1e-3, pixel_params).v_pd == 0.0


def test_integrate_rejects_bad_inputs(pixel_params):
    state = PixelState(v_pd=1.0)
    with pytest.raises(NegativePhotocurrent):
        integrate(state, -1e-12, 1.0, pixel_params)
    with pytest.raises(NegativeDuration):
        integrate(state, 1e-12, -1.0, pixel_params)


@settings(max_examples=100, deadline=None)
@given(
    i_pd=st.floats(min_value=0, max_value=1e-12),
    t1=st.floats(min_value=0, max_value=1e-3),
    t2=st.floats(min_value=0, max_value=1e-3),
)
def test_integrate_additive_in_time(i_pd, t1, t2):
    params = PixelParams()
    state = PixelState(v_pd=1.0)
    stepwise = integrate(integrate(state, i_pd, t1, params), i_pd, t2, params)
    joint = integrate(state, i_pd, t1 + t2, params)
    if joint.v_pd > 0.0:  # additivity only holds absent clamping
        assert math.isclose(stepwise.v_pd, joint.v_pd, rel_tol=1e-12, abs_tol=1e-15)


def test_fully_dark_pixel_reads_zero(pixel_params):
    i = readout_current(pixel_params.v_dd, PolarizationState(1.0), NOMINAL, pixel_params)
    assert i == 0.0


def test_current_rises_with_polarization(pixel_params):
    lo = readout_current(0.2, PolarizationState(0.0), NOMINAL, pixel_params)
    hi = readout_current(0.2, PolarizationState(1.0), NOMINAL, pixel_params)
    assert hi > lo > 0.0


def test_closed_form_matches_bisection_at_fullscale(pixel_params):
    closed = readout_current(0.0, PolarizationState(1.0), NOMINAL, pixel_params)
    oracle = bisect_readout_current(0.0, PolarizationState(1.0), NOMINAL, pixel_params)
    assert rel_diff(closed, oracle) < 1e-12


def test_zero_exactly_when_overdrive_nonpositive(pixel_params):
    """I = 0 if and only if the gate overdrive (in the same float arithmetic)
    is non-positive, across the whole delta range."""
    for delta in np.linspace(0.0, 1.0, 4001):
        vov = (pixel_params.v_dd - float(delta)) - pixel_params.v_tp
        i = readout_current(float(delta), PolarizationState(1.0), NOMINAL, pixel_params)
        assert (i == 0.0) == (vov <= 0.0)
    # a threshold shift moves the cutoff with it
    shifted = VariationSample(dvth_p=-0.05)
    assert readout_current(0.72, PolarizationState(1.0), shifted, pixel_params) > 0.0
    assert readout_current(0.72, PolarizationState(1.0), NOMINAL, pixel_params) == 0.0


def test_out_of_range_delta_rejected(pixel_params):
    with pytest.raises(OutOfRange):
        readout_current(-0.01, PolarizationState(0.5), NOMINAL, pixel_params)
    with pytest.raises(OutOfRange):
        readout_current(1.01, PolarizationState(0.5), NOMINAL, pixel_params)


@settings(max_examples=150, deadline=None)
@given(
    delta=st.floats(min_value=0.0, max_value=1.0),
    p=st.floats(min_value=0.0, max_value=1.0),
    dvth_p=st.floats(min_value=-0.15, max_value=0.15),
    dvth_fe=st.floats(min_value=-0.15, max_value=0.15),
    tf=st.floats(min_value=0.91, max_value=1.09),
)
def test_solver_cross_check_property(delta, p, dvth_p, dvth_fe, tf):
    params = PixelParams()
    var = VariationSample(thickness_factor=tf, dvth_p=dvth_p, dvth_fe=dvth_fe)
    closed = readout_current(delta, PolarizationState(p), var, params)
    oracle = bisect_readout_current(delta, PolarizationState(p), var, params)
    if closed == 0.0:
        assert oracle == 0.0
    else:
        assert rel_diff(closed, oracle) < 1e-12
    assert 0.0 <= closed <= 0.5 * params.beta_p * params.v_dd ** 2


@settings(max_examples=100, deadline=None)
@given(
    d1=st.floats(min_value=0.0, max_value=1.0),
    d2=st.floats(min_value=0.0, max_value=1.0),
    p1=st.floats(min_value=0.0, max_value=1.0),
    p2=st.floats(min_value=0.0, max_value=1.0),
)
def test_monotonicity_properties(d1, d2, p1, p2):
    params = PixelParams()
    lo_d, hi_d = sorted((d1, d2))
    lo_p, hi_p = sorted((p1, p2))
    assert readout_current(lo_d, PolarizationState(lo_p), NOMINAL, params) >= readout_current(
        hi_d, PolarizationState(lo_p), NOMINAL, params
    )
    assert readout_current(lo_d, PolarizationState(hi_p), NOMINAL, params) >= readout_current(
        lo_d, PolarizationState(lo_p), NOMINAL, params
    )


def test_transfer_curve_endpoints(pixel_params):
    lut = transfer_curve(0.5, NOMINAL, pixel_params, n_points=2)
    assert lut.i_out[1] == 0.0
    assert lut.i_out[0] > 0.0
    with pytest.raises(ConfigError):
        transfer_curve(0.5, NOMINAL, pixel_params, n_points=1)


def test_transfer_curve_non_increasing(pixel_params):
    lut = transfer_curve(0.73, NOMINAL, pixel_params, n_points=257)
    assert np.all(np.diff(lut.i_out) <= 0)


def test_sixteen_nominal_curves_never_cross(pixel_params):
    fracs = np.linspace(0.0161, 0.9839, 16)
    grid_curves = [
        nominal_transfer_curve(float(p), pixel_params, n_points=512).i_out for p in fracs
    ]
    deltas = np.linspace(0, 1, 512)
    active = deltas < pixel_params.v_swing
    for lo, hi in zip(grid_curves, grid_curves[1:]):
        assert np.all(hi[active] > lo[active])


def test_lut_validation_rejects_garbage():
    with pytest.raises(NonMonotoneCurve):
        TransferLUT(delta_vpd=np.array([0.0, 1.0, 0.5]), i_out=np.array([3.0, 2.0, 1.0]))
    with pytest.raises(NonMonotoneCurve):
        TransferLUT(delta_vpd=np.array([0.0, 0.5, 1.0]), i_out=np.array([1.0, 2.0, 0.0]))


def test_lut_csv_round_trips_exactly(tmp_path, pixel_params):
    lut = nominal_transfer_curve(0.4, pixel_params, n_points=64, level=3)
    path = tmp_path / "curve.csv"
    lut.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "delta_vpd,i_out"
    assert len(lines) == 65
    for line, d, i in zip(lines[1:], lut.delta_vpd, lut.i_out):
        ds, istr = line.split(",")
        assert float(ds) == d  # repr round-trip is exact
        assert float(istr) == i


def test_param_validation():
    with pytest.raises(ConfigError):
        PixelParams(v_tp=1.5)
    with pytest.raises(ConfigError):
        PixelParams(c_pd=0.0)
