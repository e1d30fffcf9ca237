import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from estimators import point
from estimators.constants import beta0, blee_known_scale, bound_multiplier, c0, known_scale_shift, rate_sum
from model.domain import BleeVariant, SufficientStats
from model.errors import DegenerateInputError

NS = (5, 5)

positive = st.floats(min_value=1e-3, max_value=50.0, allow_nan=False, allow_infinity=False)
location = st.floats(min_value=-20.0, max_value=20.0, allow_nan=False, allow_infinity=False)
p_values = st.sampled_from([-4.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0])


def stats2(x1, x2, t1, t2):
    return SufficientStats(x_min=[x1, x2], t=[t1, t2], shape=(4, 4))


def test_mle_and_rmle():
    x = np.array([[0.3, 0.1, 0.7], [0.2, 0.4, 0.5]])
    np.testing.assert_array_equal(point.mle(2, x), [0.1, 0.4])
    np.testing.assert_array_equal(point.rmle(1, x), [0.1, 0.2])
    np.testing.assert_array_equal(point.rmle(3, x), [0.7, 0.5])


def test_rmle_improved_shift():
    shift = known_scale_shift(rate_sum(NS, (1.0, 1.5)), 1.0, -1.0)
    assert shift == pytest.approx(-0.113329, abs=1e-6)
    value = point.rmle_improved(1, [0.4, 0.2], NS, (1.0, 1.5), -1.0)
    assert value == pytest.approx(0.2 + shift)


def test_baee_affine():
    assert point.baee_affine(1.0, 2.0, -0.25) == pytest.approx(0.5)


def test_improved_ordered_scale_first_target_is_clipped_into_bounds():
    # a near-zero W_2 puts the lower bound just under d, which is above c when p > 0
    d = bound_multiplier(5, 10, 1.0)
    c = c0(5, 1.0)
    value = point.improved_ordered_scale(1, stats2(0.0, 0.0, 1.0, 1e-9), NS, 1.0)
    assert value == pytest.approx(np.clip(c, d * (1 + 1e-9), d))


def test_improved_ordered_scale_second_target_caps_at_upper_bound():
    d = bound_multiplier(5, 10, 1.0)
    c = c0(5, 1.0)
    stats = stats2(0.0, 0.5, 3.0, 1.0)
    value = point.improved_ordered_scale(2, stats, NS, 1.0)
    assert value == pytest.approx(0.5 + min(c, d * (1 + 3.0)) * 1.0)


def test_improved_ordered_scale_rejects_zero_spacing():
    with pytest.raises(DegenerateInputError):
        point.improved_ordered_scale(1, stats2(0.0, 0.0, 0.0, 1.0), NS, 1.0)


def test_improved_known_scale_reference_inputs():
    sigmas = (1.0, 1.5)
    g = known_scale_shift(rate_sum(NS, sigmas), 1.0, 1.0)
    alpha = blee_known_scale(5, 1.0, 1.0)
    # x_2 well above x_1: the clip g is inactive only if alpha < g
    value = point.improved_known_scale(1, [0.0, 5.0], NS, sigmas, 1.0)
    assert value == pytest.approx(min(alpha, g))
    # x_2 below x_1 drags the estimate down
    value = point.improved_known_scale(1, [0.0, -1.0], NS, sigmas, 1.0)
    assert value == pytest.approx(min(alpha, g - 1.0))


def test_improved_known_scale_last_target_is_clipped_between_bounds():
    sigmas = (1.0, 1.5)
    g = known_scale_shift(rate_sum(NS, sigmas), 1.5, 1.0)
    alpha = blee_known_scale(5, 1.5, 1.0, BleeVariant.LOSS_CONSISTENT)
    value = point.improved_known_scale(2, [0.0, 0.3], NS, sigmas, 1.0, BleeVariant.LOSS_CONSISTENT)
    assert value == pytest.approx(0.3 + np.clip(alpha, g - 0.3, g))


def test_improved_equal_scale_reference_inputs():
    beta = beta0(5, 10, 2, 1.0)
    value = point.improved_equal_scale(1, [0.0, 0.05], 4.0, NS, 1.0)
    assert value == pytest.approx(min(beta * 4.0, 0.0))
    value = point.improved_equal_scale(1, [0.0, -0.05], 4.0, NS, 1.0)
    assert value == pytest.approx(min(beta * 4.0, -0.05))
    value = point.improved_equal_scale(2, [0.0, 0.3], 4.0, NS, -1.0)
    assert value == pytest.approx(0.3 + min(beta0(5, 10, 2, -1.0) * 4.0, 0.0))


def test_improved_unequal_scale_last_target_never_moves_up():
    stats = stats2(0.0, 0.3, 1.0, 2.0)
    value = point.improved_unequal_scale(2, stats, NS, -1.0)
    assert value == pytest.approx(0.3 + min(c0(5, -1.0) * 2.0, 0.0))


def test_estimators_are_vectorised_over_replications():
    stats = SufficientStats(x_min=np.zeros((3, 4, 2)), t=np.ones((3, 4, 2)), shape=(4, 4))
    assert point.improved_ordered_scale(1, stats, NS, 1.0).shape == (3, 4)
    assert point.improved_unequal_scale(1, stats, NS, 1.0).shape == (3, 4)
    assert point.improved_known_scale(2, stats.x_min, NS, (1.0, 1.5), 1.0).shape == (3, 4)


@settings(max_examples=200, deadline=None)
@given(x1=location, gap=location, t1=positive, t2=positive, p=p_values)
def test_ordered_scale_multiplier_stays_within_bounds(x1, gap, t1, t2, p):
    stats = stats2(x1, x1 + gap, t1, t2)
    d = bound_multiplier(5, 10, p)
    mult_1 = (point.improved_ordered_scale(1, stats, NS, p) - x1) / t1
    lower = d * (1 + t2 / t1)
    assert min(lower, d) - 1e-9 <= mult_1 <= max(lower, d) + 1e-9
    mult_2 = (point.improved_ordered_scale(2, stats, NS, p) - (x1 + gap)) / t2
    assert mult_2 <= c0(5, p) + 1e-9


@settings(max_examples=200, deadline=None)
@given(x1=location, gap=location, t1=positive, t2=positive, p=p_values)
def test_location_improvements_never_exceed_their_baseline(x1, gap, t1, t2, p):
    x = [x1, x1 + gap]
    baee = x1 + c0(5, p) * t1
    assert point.improved_unequal_scale(1, stats2(x1, x1 + gap, t1, t2), NS, p) <= baee + 1e-12
    pooled = x1 + beta0(5, 10, 2, p) * (t1 + t2)
    assert point.improved_equal_scale(1, x, t1 + t2, NS, p) <= pooled + 1e-12
    blee = x1 + blee_known_scale(5, 1.0, p, BleeVariant.LOSS_CONSISTENT)
    assert point.improved_known_scale(1, x, NS, (1.0, 1.0), p, BleeVariant.LOSS_CONSISTENT) <= blee + 1e-12


@settings(max_examples=100, deadline=None)
@given(x1=location, gap=location, t1=positive, t2=positive, shift=location, p=p_values)
def test_common_location_shift_moves_every_estimate(x1, gap, t1, t2, shift, p):
    base = stats2(x1, x1 + gap, t1, t2)
    moved = stats2(x1 + shift, x1 + gap + shift, t1, t2)
    for i in (1, 2):
        before = point.improved_unequal_scale(i, base, NS, p)
        after = point.improved_unequal_scale(i, moved, NS, p)
        assert after == pytest.approx(before + shift, abs=1e-9)
