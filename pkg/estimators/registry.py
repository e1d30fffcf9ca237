"""
Dispatch from EstimatorId to a vectorised estimator for one scenario.
"""

import logging
from typing import Callable, Dict, FrozenSet

import numpy as np

from estimators import point
from estimators.constants import EstimatorConstants
from model.domain import (
    EstimatorId,
    EstimatorTag,
    LossSpec,
    Scenario,
    ScenarioKind,
    SchemeConfig,
    SufficientStats,
)
from model.errors import EstimatorMismatchError

logger = logging.getLogger(__name__)

EstimatorFn = Callable[[SufficientStats], np.ndarray]

_LOCATION_KINDS = frozenset({
    ScenarioKind.LOC_KNOWN_SCALE,
    ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE,
    ScenarioKind.LOC_UNEQUAL_UNKNOWN_SCALE,
})

COMPATIBLE_KINDS: Dict[EstimatorTag, FrozenSet[ScenarioKind]] = {
    EstimatorTag.MLE: frozenset(ScenarioKind),
    EstimatorTag.RMLE: _LOCATION_KINDS,
    EstimatorTag.BAEE: frozenset({
        ScenarioKind.ORDERED_SCALE,
        ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE,
        ScenarioKind.LOC_UNEQUAL_UNKNOWN_SCALE,
    }),
    EstimatorTag.BLEE: frozenset({ScenarioKind.LOC_KNOWN_SCALE}),
    EstimatorTag.IMPROVED_ORDERED_SCALE: frozenset({ScenarioKind.ORDERED_SCALE}),
    EstimatorTag.IMPROVED_KNOWN_SCALE: frozenset({ScenarioKind.LOC_KNOWN_SCALE}),
    EstimatorTag.IMPROVED_EQUAL_SCALE: frozenset({ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE}),
    EstimatorTag.IMPROVED_UNEQUAL_SCALE: frozenset({ScenarioKind.LOC_UNEQUAL_UNKNOWN_SCALE}),
    EstimatorTag.RMLE_IMPROVED: frozenset({ScenarioKind.LOC_KNOWN_SCALE}),
}

# Equivariant estimator each improvement is measured against
NATURAL_BASELINE: Dict[EstimatorTag, EstimatorTag] = {
    EstimatorTag.BAEE: EstimatorTag.MLE,
    EstimatorTag.BLEE: EstimatorTag.MLE,
    EstimatorTag.RMLE: EstimatorTag.MLE,
    EstimatorTag.IMPROVED_ORDERED_SCALE: EstimatorTag.BAEE,
    EstimatorTag.IMPROVED_KNOWN_SCALE: EstimatorTag.BLEE,
    EstimatorTag.IMPROVED_EQUAL_SCALE: EstimatorTag.BAEE,
    EstimatorTag.IMPROVED_UNEQUAL_SCALE: EstimatorTag.BAEE,
    EstimatorTag.RMLE_IMPROVED: EstimatorTag.RMLE,
}


def is_compatible(estimator: EstimatorId, kind: ScenarioKind) -> bool:
    return ScenarioKind(kind) in COMPATIBLE_KINDS[estimator.tag]


def check_compatible(estimator: EstimatorId, kind: ScenarioKind):
    if not is_compatible(estimator, kind):
        raise EstimatorMismatchError(f"estimator {estimator.label} is not defined for the {ScenarioKind(kind).value} scenario")


def natural_baseline(estimator: EstimatorId) -> EstimatorId:
    base_tag = NATURAL_BASELINE.get(estimator.tag, EstimatorTag.MLE)
    return EstimatorId(base_tag, estimator.variant)


def build_estimator(estimator: EstimatorId, scenario: Scenario, scheme: SchemeConfig, loss: LossSpec) -> EstimatorFn:
    """Return stats -> estimates of mu_i for the scenario's target index; constants are fixed up front."""
    check_compatible(estimator, scenario.kind)

    i = scenario.target_index
    p = loss.p
    pops = scenario.populations
    rates = scheme.rate_counts(pops)
    shapes = scheme.shapes(pops)
    sigmas = tuple(pop.sigma for pop in pops)
    tag = estimator.tag
    logger.debug(f"Building {estimator.label} for target {i} ({scenario.kind.value})")

    if tag is EstimatorTag.MLE:
        return lambda stats: point.mle(i, stats.x_min)

    if tag is EstimatorTag.RMLE:
        return lambda stats: point.rmle(i, stats.x_min)

    if tag is EstimatorTag.BAEE:
        if scenario.kind is ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE:
            mult = EstimatorConstants.for_target(scenario, scheme, loss).beta0
            return lambda stats: point.baee_affine(stats.x_min[..., i - 1], stats.pooled_t, mult)
        mult = EstimatorConstants.for_target(scenario, scheme, loss).c0
        return lambda stats: point.baee_affine(stats.x_min[..., i - 1], stats.t[..., i - 1], mult)

    if tag is EstimatorTag.BLEE:
        alpha = EstimatorConstants.for_target(scenario, scheme, loss, estimator.variant).alpha0
        return lambda stats: stats.x_min[..., i - 1] + alpha

    if tag is EstimatorTag.IMPROVED_ORDERED_SCALE:
        return lambda stats: point.improved_ordered_scale(i, stats, rates, p)

    if tag is EstimatorTag.IMPROVED_KNOWN_SCALE:
        return lambda stats: point.improved_known_scale(i, stats.x_min, rates, sigmas, p, estimator.variant)

    if tag is EstimatorTag.IMPROVED_EQUAL_SCALE:
        pooled_shape = sum(shapes)
        return lambda stats: point.improved_equal_scale(i, stats.x_min, stats.pooled_t, rates, p, pooled_shape)

    if tag is EstimatorTag.IMPROVED_UNEQUAL_SCALE:
        return lambda stats: point.improved_unequal_scale(i, stats, rates, p)

    return lambda stats: point.rmle_improved(i, stats.x_min, rates, sigmas, p)
