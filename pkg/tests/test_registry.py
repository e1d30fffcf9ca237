import numpy as np
import pytest

from estimators.constants import beta0, c0
from estimators.registry import build_estimator, check_compatible, is_compatible, natural_baseline
from model.domain import (
    BleeVariant,
    EstimatorId,
    EstimatorTag,
    LossSpec,
    ScenarioKind,
    SchemeConfig,
    SufficientStats,
)
from model.errors import EstimatorMismatchError

from conftest import make_point


def test_mle_is_compatible_with_every_scenario():
    for kind in ScenarioKind:
        assert is_compatible(EstimatorId(EstimatorTag.MLE), kind)


@pytest.mark.parametrize("tag, kind", [
    (EstimatorTag.BLEE, ScenarioKind.ORDERED_SCALE),
    (EstimatorTag.RMLE, ScenarioKind.ORDERED_SCALE),
    (EstimatorTag.BAEE, ScenarioKind.LOC_KNOWN_SCALE),
    (EstimatorTag.IMPROVED_ORDERED_SCALE, ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE),
    (EstimatorTag.RMLE_IMPROVED, ScenarioKind.LOC_UNEQUAL_UNKNOWN_SCALE),
])
def test_incompatible_pairs_are_rejected(tag, kind):
    with pytest.raises(EstimatorMismatchError):
        check_compatible(EstimatorId(tag), kind)


def test_natural_baselines_keep_the_variant():
    assert natural_baseline(EstimatorId(EstimatorTag.IMPROVED_ORDERED_SCALE)) == EstimatorId(EstimatorTag.BAEE)
    assert natural_baseline(EstimatorId(EstimatorTag.RMLE_IMPROVED)) == EstimatorId(EstimatorTag.RMLE)
    improved = EstimatorId(EstimatorTag.IMPROVED_KNOWN_SCALE, BleeVariant.LOSS_CONSISTENT)
    assert natural_baseline(improved) == EstimatorId(EstimatorTag.BLEE, BleeVariant.LOSS_CONSISTENT)
    assert natural_baseline(EstimatorId(EstimatorTag.BAEE)) == EstimatorId(EstimatorTag.MLE)


def test_baee_uses_scheme_shape():
    point = make_point(ScenarioKind.ORDERED_SCALE, scheme=SchemeConfig.type2((3, 3)))
    stats = SufficientStats(x_min=[0.1, 0.2], t=[2.0, 1.0], shape=(2, 2))
    value = build_estimator(EstimatorId(EstimatorTag.BAEE), point.scenario, point.scheme, point.loss)(stats)
    assert value == pytest.approx(0.1 + c0(5, 1.0, 2) * 2.0)


def test_baee_pools_spacings_when_scales_are_equal():
    point = make_point(ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE, mus=(0.0, 0.1), target=2)
    stats = SufficientStats(x_min=[0.1, 0.2], t=[2.0, 1.0], shape=(4, 4))
    value = build_estimator(EstimatorId(EstimatorTag.BAEE), point.scenario, point.scheme, point.loss)(stats)
    assert value == pytest.approx(0.2 + beta0(5, 10, 2, 1.0) * 3.0)


def test_blee_variant_flows_into_the_shift(known_point):
    stats = SufficientStats(x_min=np.zeros((4, 2)), t=np.ones((4, 2)), shape=(4, 4))
    scenario = known_point.scenario.with_target(2)
    printed = build_estimator(EstimatorId(EstimatorTag.BLEE), scenario, known_point.scheme, known_point.loss)
    consistent = build_estimator(EstimatorId(EstimatorTag.BLEE, BleeVariant.LOSS_CONSISTENT), scenario,
                                 known_point.scheme, known_point.loss)
    np.testing.assert_allclose(printed(stats), -0.356675, atol=1e-6)
    np.testing.assert_allclose(consistent(stats), -0.334715, atol=1e-6)


def test_build_estimator_checks_compatibility(ordered_point):
    with pytest.raises(EstimatorMismatchError):
        build_estimator(EstimatorId(EstimatorTag.BLEE), ordered_point.scenario, ordered_point.scheme,
                        LossSpec(1.0))
