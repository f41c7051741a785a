import math

import pytest
from hypothesis import assume, given, strategies as st

from hrcsim.human import (DEMANDS, FatigueState, ForgettingParams, apply_workload, can_start,
                          recover, recover_value, remember_probability, should_resume,
                          time_to_recover)

frac = st.floats(0.0, 1.0)
mins = st.floats(0.0, 500.0)


def test_remember_probability_examples():
    p = ForgettingParams()
    assert remember_probability(0, p) == 1.0
    assert abs(remember_probability(100, p) - math.exp(-1)) < 1e-9
    assert abs(remember_probability(3800, p) - math.exp(-38)) < 1e-9
    assert remember_probability(3800, p) < 4e-17
    with pytest.raises(ValueError):
        remember_probability(-1, p)


def test_workload_examples():
    s = apply_workload(FatigueState(), 0.40, 0.5)
    assert abs(s.f_cem - math.exp(-0.2)) < 1e-9
    assert abs(s.f_cem - 0.8187) < 1e-4
    assert apply_workload(s, 0.0, 7.0).f_cem == s.f_cem
    two = apply_workload(apply_workload(FatigueState(), 0.4, 0.5), 0.1, 1.0)
    assert abs(two.f_cem - math.exp(-0.3)) < 1e-9
    with pytest.raises(ValueError):
        apply_workload(FatigueState(0.5, resting=True), 0.4, 1.0)


def test_recovery_examples():
    assert abs(recover(FatigueState(0.5), 2).f_cem - 0.60) < 1e-9
    assert abs(recover(FatigueState(0.89), 1).f_cem - 0.9024) < 1e-9
    assert recover(FatigueState(1.0), 50).f_cem == 1.0


def test_start_and_resume_thresholds():
    assert not can_start(FatigueState(0.39), 0.40)
    assert not should_resume(FatigueState(0.49), 0.40)
    assert should_resume(FatigueState(0.50), 0.40)
    assert can_start(FatigueState(0.0), 0.0)
    assert DEMANDS == {"extra-mortar-removing": 0.10, "grabbing": 0.40, "dropping": 0.40,
                       "adding": 0.40}


@given(frac, st.floats(0, 1), st.floats(0, 60))
def test_workload_never_raises_strength(f, demand, d):
    s = apply_workload(FatigueState(f), demand, d)
    assert 0.0 <= s.f_cem <= f


@given(frac, mins)
def test_recovery_never_lowers_strength(f, dt):
    assert f <= recover_value(f, dt) <= 1.0


@given(frac, mins, mins)
def test_recovery_is_additive(f, a, b):
    assert abs(recover_value(f, a + b) - recover_value(recover_value(f, a), b)) <= 1e-12


@given(st.floats(0.0, 0.99), st.floats(0.01, 1.0))
def test_time_to_recover_inverts_recovery(f, target):
    assume(target > f)
    t = time_to_recover(f, target)
    assert abs(recover_value(f, t) - target) <= 1e-9


@given(st.floats(0.001, 0.1), st.floats(0, 5000), st.floats(0, 5000))
def test_remember_probability_decreases(b, x, y):
    assume(abs(x - y) > 1e-6)
    p = ForgettingParams(1.0, b)
    lo, hi = sorted((x, y))
    assert remember_probability(hi, p) <= remember_probability(lo, p)
    assert remember_probability(0.0, p) == 1.0


@given(st.sampled_from(sorted(set(DEMANDS.values()))), frac)
def test_resting_worker_is_below_resume_threshold_until_margin(demand, f):
    # a worker that could not start cannot resume at the same strength
    if not can_start(FatigueState(f), demand):
        assert not should_resume(FatigueState(f), demand)
        need = time_to_recover(f, demand + 0.10)
        assert should_resume(recover(FatigueState(f), need), demand)
