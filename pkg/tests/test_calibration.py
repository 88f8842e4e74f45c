import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reachcoach.calibration import CalibrationConfig, run_calibration
from reachcoach.errors import ValidationError
from reachcoach.exercises import Side, get_exercise, target_set
from reachcoach.simulated_user import SimulatedUser

from oracles import calibration_start

KICK = get_exercise("seated_forward_kick")


def user_with(reach, **kw):
    return SimulatedUser(true_reach={(KICK.id, "right"): reach, (KICK.id, "left"): reach}, **kw)


@pytest.mark.parametrize("reach,max_reached,start", [(0.6, 0.6, 0.5), (1.0, 1.0, 0.9), (0.0, 0.0, 0.0),
                                                     (0.05, 0.0, 0.0), (0.65, 0.6, 0.5)])
def test_sweep_examples(reach, max_reached, start):
    res = run_calibration(KICK, user_with(reach).body, Side.RIGHT, user_with(reach))
    assert res.max_reached_fraction == max_reached
    assert res.f_diff_start == start


def test_sweep_probes_targets_in_order_and_stops_at_first_miss():
    user = user_with(0.3)
    res = run_calibration(KICK, user.body, Side.LEFT, user)
    assert [s.fraction for s in res.samples] == [0.0, 0.1, 0.2, 0.3, 0.4]
    assert [s.touched for s in res.samples] == [True] * 4 + [False]
    assert res.samples[-1].time_to_touch is None
    for s in res.samples:
        np.testing.assert_allclose(s.target, target_set(KICK, user.body, s.fraction, Side.LEFT).x_target)
    assert res.elapsed > 0


def test_slow_touch_counts_as_miss():
    user = user_with(1.0, touch_latency=10.0)
    res = run_calibration(KICK, user.body, Side.RIGHT, user, CalibrationConfig(dwell_timeout=3.0))
    assert res.max_reached_fraction == 0.0
    assert len(res.samples) == 1


def test_config_validation():
    with pytest.raises(ValidationError):
        CalibrationConfig(step=0.0)
    with pytest.raises(ValidationError):
        CalibrationConfig(safety_margin=-0.1)
    assert CalibrationConfig(step=0.25).fractions() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert CalibrationConfig(step=0.15).fractions()[-2:] == [0.9, 1.0]
    with pytest.raises(ValidationError):
        CalibrationConfig(step=0.3)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1))
def test_monotone_in_reach(a, b):
    lo, hi = sorted((a, b))
    r_lo = run_calibration(KICK, user_with(lo).body, Side.RIGHT, user_with(lo))
    r_hi = run_calibration(KICK, user_with(hi).body, Side.RIGHT, user_with(hi))
    assert r_lo.f_diff_start <= r_hi.f_diff_start
    assert r_hi.f_diff_start <= r_hi.max_reached_fraction
    assert r_lo.f_diff_start == calibration_start(lo)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1))
def test_side_order_irrelevant(right, left):
    user = SimulatedUser(true_reach={(KICK.id, "right"): right, (KICK.id, "left"): left})
    a = [run_calibration(KICK, user.body, s, user).f_diff_start for s in (Side.RIGHT, Side.LEFT)]
    b = [run_calibration(KICK, user.body, s, user).f_diff_start for s in (Side.LEFT, Side.RIGHT)][::-1]
    assert a == b == [calibration_start(right), calibration_start(left)]
