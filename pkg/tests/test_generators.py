import numpy as np
import pytest

from model.domain import LossSpec, Population, Scenario, ScenarioKind, SchemeConfig, SchemeKind
from model.errors import PreconditionError
from oracle.goodness_of_fit import gamma_distribution, ks_one_sample_passes, ks_two_sample_passes
from sampling.generators import (
    draw_block_stats,
    draw_iid,
    draw_progressive,
    draw_raw_stats,
    draw_records,
    draw_stats_direct,
    draw_type2,
    exponential_inverse,
    reduce_iid,
    reduce_progressive,
    reduce_type2,
)
from sampling.streams import make_stream

ALPHA = 0.001
POP = Population(mu=2.0, sigma=1.5, n=6)


def test_reduce_iid_matches_definition():
    x_min, t, shape = reduce_iid(np.array([1.0, 1.5, 3.0]))
    assert x_min == 1.0
    assert t == pytest.approx(2.5)
    assert shape == 2


def test_reduce_iid_needs_two_observations():
    with pytest.raises(PreconditionError):
        reduce_iid(np.array([1.0]))


def test_draw_iid_is_sorted_and_above_location():
    raw = draw_iid(POP, make_stream(1))
    assert raw.scheme is SchemeKind.IID
    assert raw.values.size == POP.n
    assert np.all(np.diff(raw.values) >= 0)
    assert raw.values[0] > POP.mu


def test_type2_reduction_adds_the_censored_tail():
    x_min, t, shape = reduce_type2(np.array([0.0, 1.0, 2.0]), n=5, m=3)
    assert x_min == 0.0
    assert t == pytest.approx(1.0 + 2.0 + 2 * 2.0)
    assert shape == 2


def test_type2_rejects_bad_m():
    with pytest.raises(PreconditionError):
        draw_type2(POP, 1, make_stream(1))
    with pytest.raises(PreconditionError):
        reduce_type2(np.array([0.0, 1.0]), n=5, m=3)


def test_reductions_coincide_on_a_complete_sample():
    raw = draw_iid(POP, make_stream(3))
    expected = reduce_iid(raw)
    for x_min, t, shape in (reduce_type2(raw, POP.n, POP.n), reduce_progressive(raw, (0,) * POP.n)):
        assert x_min == expected[0]
        assert t == pytest.approx(expected[1], rel=1e-14)
        assert shape == expected[2]


def test_progressive_reduction_weights_by_removals():
    x_min, t, shape = reduce_progressive(np.array([1.0, 2.0, 4.0]), (2, 0, 1))
    assert x_min == 1.0
    assert t == pytest.approx(1 * 1.0 + 2 * 3.0)
    assert shape == 2


def test_progressive_rejects_inconsistent_removals():
    with pytest.raises(PreconditionError):
        draw_progressive(POP, (1, 1), make_stream(1))
    with pytest.raises(PreconditionError):
        reduce_progressive(np.array([1.0, 2.0]), (0, 0, 0))


def test_records_need_two_values():
    with pytest.raises(PreconditionError):
        draw_records(POP, 1, make_stream(1))


def test_location_shift_leaves_spacing_statistic_unchanged():
    moved = Population(mu=POP.mu + 10.0, sigma=POP.sigma, n=POP.n)
    for draw in (lambda pop, rng: draw_records(pop, 4, rng),
                 lambda pop, rng: draw_progressive(pop, (0, 3, 0), rng)):
        x0, t0, _ = draw(POP, make_stream(11))
        x1, t1, _ = draw(moved, make_stream(11))
        assert t0 == t1
        assert x1 == pytest.approx(x0 + 10.0, rel=1e-12)


def _raw_t(pop, scheme, draws, seed):
    rng = make_stream(seed)
    return np.array([draw_raw_stats(pop, scheme, 1, rng)[1] for _ in range(draws)])


@pytest.mark.parametrize("scheme, shape", [
    (SchemeConfig.iid(), 5),
    (SchemeConfig.type2((3, 3)), 2),
    (SchemeConfig.progressive(((1, 0, 2), (1, 0, 2))), 2),
    (SchemeConfig.record_values((4, 4)), 3),
])
def test_raw_spacing_statistic_is_gamma(scheme, shape):
    samples = _raw_t(POP, scheme, 4000, seed=shape + 100)
    assert ks_one_sample_passes(samples, gamma_distribution(shape, POP.sigma), ALPHA)


def test_raw_minimum_is_shifted_exponential():
    rng = make_stream(5)
    x_mins = np.array([draw_raw_stats(POP, SchemeConfig.type2((4, 4)), 1, rng)[0] for _ in range(4000)])
    assert ks_one_sample_passes(x_mins - POP.mu, gamma_distribution(1, POP.sigma / POP.n), ALPHA)


def test_direct_path_matches_raw_path():
    raw = _raw_t(POP, SchemeConfig.iid(), 4000, seed=21)
    _, direct = draw_stats_direct(POP, POP.n - 1, make_stream(22), size=4000)
    assert ks_two_sample_passes(raw, direct, ALPHA)


def test_direct_path_scalar_and_vector_forms():
    x_min, t = draw_stats_direct(POP, 3, make_stream(1))
    assert isinstance(x_min, float) and x_min > POP.mu and t > 0
    xs, ts = draw_stats_direct(POP, 3, make_stream(1), rate_count=1, size=10)
    assert xs.shape == ts.shape == (10,)


def test_block_stats_shapes_follow_the_scheme():
    pops = (Population(0.0, 1.0, 5), Population(0.0, 2.0, 7))
    scenario = Scenario(ScenarioKind.ORDERED_SCALE, pops)
    stats = draw_block_stats(scenario, SchemeConfig.type2((3, 4)), make_stream(9), 64)
    assert stats.x_min.shape == stats.t.shape == (64, 2)
    assert stats.shape == (2, 3)
    assert np.all(stats.t > 0)
    assert np.all(stats.x_min > 0)


def test_exponential_inverse_is_the_quantile_function():
    assert exponential_inverse(0.5, 1.0, 2.0) == pytest.approx(1.0 + 2.0 * np.log(2.0))


def test_direct_statistics_have_the_exponential_and_gamma_means():
    x_min, t = draw_stats_direct(POP, POP.n - 1, make_stream(21), size=20_000)
    x_se = np.std(x_min, ddof=1) / np.sqrt(x_min.size)
    t_se = np.std(t, ddof=1) / np.sqrt(t.size)
    assert abs(np.mean(x_min) - (POP.mu + POP.sigma / POP.n)) < 3 * x_se
    assert abs(np.mean(t) - (POP.n - 1) * POP.sigma) < 3 * t_se


def test_direct_minimum_uses_the_rate_count():
    x_min, _ = draw_stats_direct(POP, 2, make_stream(22), rate_count=1, size=20_000)
    se = np.std(x_min, ddof=1) / np.sqrt(x_min.size)
    assert abs(np.mean(x_min) - (POP.mu + POP.sigma)) < 3 * se


@pytest.mark.parametrize("draw", [
    lambda pop, rng: draw_iid(pop, rng),
    lambda pop, rng: draw_type2(pop, 4, rng),
])
def test_raw_paths_are_location_scale_equivariant(draw):
    unit = draw(Population(mu=0.0, sigma=1.0, n=6), make_stream(23)).values
    moved = draw(Population(mu=-3.0, sigma=2.5, n=6), make_stream(23)).values
    np.testing.assert_allclose(moved, -3.0 + 2.5 * unit, rtol=1e-12, atol=1e-12)
