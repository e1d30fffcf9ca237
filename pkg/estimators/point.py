"""
Point estimators of a location parameter mu_i under order restrictions.

All estimators are pure functions of the sufficient statistics. Array inputs
may carry any number of leading replication axes; the population axis is
always last. Indices i are 1-based.
"""

from typing import Optional, Sequence

import numpy as np

from estimators.constants import (
    bound_multiplier,
    beta0,
    blee_known_scale,
    c0,
    known_scale_shift,
    rate_sum,
)
from model.domain import BleeVariant, SufficientStats
from model.errors import DegenerateInputError


def _min_with_zero(y: np.ndarray) -> np.ndarray:
    """min(0, y_1, ..., y_r) along the last axis; an empty set gives 0."""
    if y.shape[-1] == 0:
        return np.zeros(y.shape[:-1])
    return np.minimum(np.min(y, axis=-1), 0.0)


def _suffix(values: np.ndarray, i: int) -> np.ndarray:
    """Entries i+1..k (1-based) of the last axis."""
    return values[..., i:]


def mle(i: int, x_mins) -> np.ndarray:
    return np.asarray(x_mins, dtype=float)[..., i - 1]


def rmle(i: int, x_mins) -> np.ndarray:
    """Restricted MLE under mu_1 <= ... <= mu_k: min(x_min_i, ..., x_min_k)."""
    return np.min(np.asarray(x_mins, dtype=float)[..., i - 1:], axis=-1)


def rmle_improved(i: int, x_mins, ns: Sequence[float], sigmas: Sequence[float], p: float) -> np.ndarray:
    q = rate_sum(ns, sigmas)
    return rmle(i, x_mins) + known_scale_shift(q, sigmas[i - 1], p)


def baee_affine(x_min_i, t_i, mult: float) -> np.ndarray:
    """Affine equivariant estimator X_(1) + c T."""
    return np.asarray(x_min_i, dtype=float) + mult * np.asarray(t_i, dtype=float)


def improved_ordered_scale(i: int, stats: SufficientStats, ns: Sequence[float], p: float) -> np.ndarray:
    """
    Clipped BAEE for ordered scales sigma_1 <= ... <= sigma_k.

    The BAEE multiplier c0 is clipped to [l_1, u_1] for i = 1 and capped at u_i
    for i >= 2, where the bounds are the factor d times 1 plus the ratios
    W_j = t_j / t_i of the populations on the other side of the ordering.
    """
    t_i = stats.t[..., i - 1]
    if np.any(t_i <= 0):
        raise DegenerateInputError(f"spacing statistic t_{i} is zero; ratios t_j / t_{i} are undefined")

    shapes = stats.shape
    nu_i = ns[i - 1]
    c = c0(nu_i, p, shapes[i - 1])
    d = bound_multiplier(nu_i, sum(shapes) + stats.k, p)
    ratios = stats.ratios(i)

    if i == 1:
        lower = d * (1.0 + np.sum(ratios[..., 1:], axis=-1))
        mult = np.clip(c, lower, d)
    else:
        upper = d * (1.0 + np.sum(ratios[..., :i - 1], axis=-1))
        mult = np.minimum(c, upper)

    return stats.x_min[..., i - 1] + mult * t_i


def improved_known_scale(i: int, x_mins, ns: Sequence[float], sigmas: Sequence[float], p: float,
                         variant: BleeVariant = BleeVariant.PAPER_PRINTED) -> np.ndarray:
    x_mins = np.asarray(x_mins, dtype=float)
    k = x_mins.shape[-1]
    x_i = x_mins[..., i - 1]
    y = x_mins - x_mins[..., i - 1:i]

    q = rate_sum(ns, sigmas)
    g = known_scale_shift(q, sigmas[i - 1], p)
    alpha = blee_known_scale(ns[i - 1], sigmas[i - 1], p, variant)

    if i < k:
        gamma = g + _min_with_zero(_suffix(y, i))
        return x_i + np.minimum(alpha, gamma)

    nu = g + _min_with_zero(y[..., :k - 1])
    return x_i + np.clip(alpha, nu, g)


def improved_equal_scale(i: int, x_mins, t_pooled, ns: Sequence[float], p: float,
                         pooled_shape: Optional[int] = None) -> np.ndarray:
    """Clipped pooled-T BAEE when all scales are equal and unknown."""
    x_mins = np.asarray(x_mins, dtype=float)
    k = x_mins.shape[-1]
    total = sum(ns) if pooled_shape is None else pooled_shape + k
    shift = beta0(ns[i - 1], total, k, p) * np.asarray(t_pooled, dtype=float)

    y = x_mins - x_mins[..., i - 1:i]
    bound = _min_with_zero(_suffix(y, i)) if i < k else 0.0
    return x_mins[..., i - 1] + np.minimum(shift, bound)


def improved_unequal_scale(i: int, stats: SufficientStats, ns: Sequence[float], p: float) -> np.ndarray:
    k = stats.k
    shift = c0(ns[i - 1], p, stats.shape[i - 1]) * stats.t[..., i - 1]

    bound = _min_with_zero(_suffix(stats.differences(i), i)) if i < k else 0.0
    return stats.x_min[..., i - 1] + np.minimum(shift, bound)
