"""
Monte-Carlo-free risk of two-population estimators by tensor-product quadrature.

The sufficient statistics are written in four independent standard coordinates

    x_min_j = mu_j + (sigma_j / nu_j) e_j,   e_j ~ Exp(1)
    t_j     = sigma_j g_j,                   g_j ~ Gamma(m_j, 1)

and only the coordinates an estimator actually reads are integrated. Smooth
directions use generalized Gauss-Laguerre rules. When the estimator has a min
or clip kink, one coordinate is integrated innermost and split into panels at
the kink locations: Gauss-Legendre on the finite panels and a shifted Laguerre
rule on the unbounded last one.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats
from scipy.special import gammaln, roots_genlaguerre, roots_legendre, xlogy

from estimators.constants import (
    beta0,
    blee_known_scale,
    bound_multiplier,
    c0,
    known_scale_shift,
    rate_sum,
)
from estimators.registry import build_estimator
from model.domain import BleeVariant, EstimatorId, EstimatorTag, ScenarioKind, SufficientStats
from model.errors import PreconditionError
from risk.engine import GridPoint, linex_loss

logger = logging.getLogger(__name__)

CHUNK = 2048

Values = Dict[int, np.ndarray]


def _e(j: int) -> int:
    return j - 1


def _g(j: int) -> int:
    return 1 + j


@dataclass
class _Plan:
    outer: Tuple[int, ...]
    inner: Optional[int] = None
    breakpoints: Optional[Callable[[Values], List[np.ndarray]]] = None


def _laguerre(nodes: int, shape: float) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and probability weights for the Gamma(shape, 1) density."""
    x, w = roots_genlaguerre(nodes, shape - 1)
    return x, w * np.exp(-gammaln(shape))


def _plan(estimator: EstimatorId, point: GridPoint) -> _Plan:
    scenario = point.scenario
    pops = scenario.populations
    rates = point.scheme.rate_counts(pops)
    shapes = point.scheme.shapes(pops)
    p = point.loss.p
    i = scenario.target_index
    j = 3 - i
    mu, sigma = scenario.mus, scenario.sigmas
    tag = estimator.tag

    def y_to_e(y_breaks: Sequence[Callable[[Values], np.ndarray]]):
        """Breakpoints in Y_j = x_j - x_i mapped to the e_j coordinate."""
        def convert(vals: Values) -> List[np.ndarray]:
            base = (mu[i - 1] - mu[j - 1]) + sigma[i - 1] / rates[i - 1] * vals[_e(i)]
            return [(yb(vals) + base) * rates[j - 1] / sigma[j - 1] for yb in y_breaks]
        return convert

    def const(value: float):
        return lambda vals: np.full_like(vals[_e(i)], value)

    if tag is EstimatorTag.IMPROVED_ORDERED_SCALE:
        c = c0(rates[i - 1], p, shapes[i - 1])
        d = bound_multiplier(rates[i - 1], sum(shapes) + 2, p)
        w_star = c / d - 1.0
        return _Plan(outer=(_e(i), _g(i)), inner=_g(j),
                     breakpoints=lambda vals: [w_star * sigma[i - 1] * vals[_g(i)] / sigma[j - 1]])

    if tag is EstimatorTag.IMPROVED_KNOWN_SCALE:
        q = rate_sum(rates, sigma)
        g = known_scale_shift(q, sigma[i - 1], p)
        alpha = blee_known_scale(rates[i - 1], sigma[i - 1], p, estimator.variant)
        return _Plan(outer=(_e(i),), inner=_e(j), breakpoints=y_to_e([const(0.0), const(alpha - g)]))

    if tag in (EstimatorTag.RMLE, EstimatorTag.RMLE_IMPROVED):
        if i == 2:
            return _Plan(outer=(_e(2),))
        return _Plan(outer=(_e(1),), inner=_e(2), breakpoints=y_to_e([const(0.0)]))

    if tag is EstimatorTag.IMPROVED_EQUAL_SCALE:
        if i == 2:
            return _Plan(outer=(_e(2), _g(1), _g(2)))
        beta = beta0(rates[0], sum(shapes) + 2, 2, p)
        pooled = lambda vals: beta * (sigma[0] * vals[_g(1)] + sigma[1] * vals[_g(2)])
        return _Plan(outer=(_e(1), _g(1), _g(2)), inner=_e(2), breakpoints=y_to_e([const(0.0), pooled]))

    if tag is EstimatorTag.IMPROVED_UNEQUAL_SCALE:
        if i == 2:
            return _Plan(outer=(_e(2), _g(2)))
        kappa = c0(rates[0], p, shapes[0])
        shift = lambda vals: kappa * sigma[0] * vals[_g(1)]
        return _Plan(outer=(_e(1), _g(1)), inner=_e(2), breakpoints=y_to_e([const(0.0), shift]))

    if tag is EstimatorTag.BAEE:
        if scenario.kind is ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE:
            return _Plan(outer=(_e(i), _g(1), _g(2)))
        return _Plan(outer=(_e(i), _g(i)))

    # MLE and BLEE read x_min_i only
    return _Plan(outer=(_e(i),))


def _inner_rule(breaks: np.ndarray, shape: float, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Panelled rule for a Gamma(shape, 1) coordinate; breaks is (P, B), returns (P, Q) nodes and weights."""
    breaks = np.sort(np.maximum(breaks, 0.0), axis=-1)
    edges = np.concatenate([np.zeros((breaks.shape[0], 1)), breaks], axis=-1)

    leg_x, leg_w = roots_legendre(nodes)
    lag_x, lag_w = roots_genlaguerre(nodes, 0.0)
    density = stats.gamma(a=shape)

    xs, ws = [], []
    for b in range(edges.shape[1] - 1):
        lo, hi = edges[:, b:b + 1], edges[:, b + 1:b + 2]
        half = (hi - lo) / 2
        s = lo + half * (leg_x + 1.0)
        xs.append(s)
        ws.append(half * leg_w * density.pdf(s))

    # [last break, inf): s = b + y with the e^{-y} factor carried by the Laguerre weights
    last = edges[:, -1:]
    s = last + lag_x
    xs.append(s)
    ws.append(lag_w * np.exp(xlogy(shape - 1, s) - last - gammaln(shape)))

    return np.concatenate(xs, axis=-1), np.concatenate(ws, axis=-1)


def brute_force_risk(estimator: EstimatorId, point: GridPoint, quadrature_nodes: int = 32) -> float:
    """Risk of the target-index estimator at a k = 2 grid point, without simulation."""
    scenario = point.scenario
    if scenario.k != 2:
        raise PreconditionError(f"quadrature risk supports k = 2 only (got k={scenario.k})")
    point.validate(estimator.variant or BleeVariant.PAPER_PRINTED).raise_if_failed()

    fn = build_estimator(estimator, scenario, point.scheme, point.loss)
    plan = _plan(estimator, point)
    shapes = point.scheme.shapes(scenario.populations)
    rates = np.asarray(point.scheme.rate_counts(scenario.populations), dtype=float)
    coord_shape = {0: 1.0, 1: 1.0, 2: float(shapes[0]), 3: float(shapes[1])}
    target = scenario.target

    # outer tensor grid
    rules = [_laguerre(quadrature_nodes, coord_shape[c]) for c in plan.outer]
    grid_x = np.array(list(product(*[r[0] for r in rules])))
    grid_w = np.prod(np.array(list(product(*[r[1] for r in rules]))), axis=-1)

    total = 0.0
    for start in range(0, grid_w.size, CHUNK):
        block_x = grid_x[start:start + CHUNK]
        block_w = grid_w[start:start + CHUNK]
        vals: Values = {c: block_x[:, n] for n, c in enumerate(plan.outer)}

        if plan.inner is None:
            inner_x = np.zeros((block_w.size, 1))
            inner_w = np.ones((block_w.size, 1))
        else:
            breaks = np.stack(plan.breakpoints(vals), axis=-1)
            inner_x, inner_w = _inner_rule(breaks, coord_shape[plan.inner], quadrature_nodes)
            vals[plan.inner] = inner_x

        width = inner_x.shape[1]
        coords = [np.broadcast_to(vals[c][:, None] if vals[c].ndim == 1 else vals[c], (block_w.size, width))
                  if c in vals else np.ones((block_w.size, width)) for c in range(4)]

        x_min = np.stack([scenario.mus[j] + scenario.sigmas[j] / rates[j] * coords[j] for j in range(2)], axis=-1)
        t = np.stack([scenario.sigmas[j] * coords[2 + j] for j in range(2)], axis=-1)
        stats_block = SufficientStats(x_min=x_min, t=t, shape=shapes)

        loss = linex_loss(fn(stats_block), target.mu, target.sigma, point.loss.p)
        total += float(np.sum(block_w * np.sum(inner_w * loss, axis=-1)))

    logger.debug(f"Quadrature risk for {estimator.label} at {point.key}: {total:.10g}")
    return total
