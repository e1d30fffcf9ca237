"""
Sample generation under each life-testing scheme.

Two paths produce sufficient statistics (x_min, t, shape):
- the raw path draws observations (complete, Type-II censored, progressively
  censored or record values) and reduces them;
- the direct path draws x_min and t from their exact distributions and is what
  the Monte Carlo engine uses.

Every variate comes from inversion of open-interval uniforms, so shifting or
scaling the population with a shared stream moves the output accordingly.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaincinv

from model.domain import Population, Scenario, SchemeConfig, SchemeKind, SufficientStats
from model.errors import PreconditionError
from sampling.streams import uniform_open

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RawSample:
    """Ascending observations of one population under one scheme."""

    values: np.ndarray
    scheme: SchemeKind
    n: int


def exponential_inverse(u, mu: float = 0.0, sigma: float = 1.0):
    """Inverse CDF of the two-parameter exponential: mu - sigma*ln(1-u)."""
    return mu - sigma * np.log1p(-np.asarray(u, dtype=float))


def gamma_inverse(u, shape, sigma: float = 1.0):
    """Inverse CDF of Gamma(shape, scale=sigma)."""
    return sigma * gammaincinv(shape, np.asarray(u, dtype=float))


# ---------------------------------------------------------------------------
# Raw paths
# ---------------------------------------------------------------------------

def draw_iid(pop: Population, rng: np.random.Generator) -> RawSample:
    u = np.sort(uniform_open(rng, pop.n))
    return RawSample(values=exponential_inverse(u, pop.mu, pop.sigma), scheme=SchemeKind.IID, n=pop.n)


def reduce_iid(raw) -> Tuple[float, float, int]:
    values = np.asarray(getattr(raw, 'values', raw), dtype=float)
    if values.size < 2:
        raise PreconditionError(f"complete-sample reduction needs at least 2 observations (got {values.size})")

    x_min = values[0]
    return float(x_min), float(np.sum(values - x_min)), values.size - 1


def _unit_spacings(rng: np.random.Generator, at_risk: np.ndarray) -> np.ndarray:
    """Offsets X_j - mu for unit scale, given the number of units at risk before each failure."""
    return np.cumsum(exponential_inverse(uniform_open(rng, at_risk.size)) / at_risk)


def draw_type2(pop: Population, m: int, rng: np.random.Generator) -> RawSample:
    """First m order statistics out of n via exponential spacings."""
    if not 2 <= m <= pop.n:
        raise PreconditionError(f"type-II censoring needs 2 <= m <= n (m={m}, n={pop.n})")

    at_risk = pop.n - np.arange(m, dtype=float)
    offsets = pop.sigma * _unit_spacings(rng, at_risk)
    return RawSample(values=pop.mu + offsets, scheme=SchemeKind.TYPE_II, n=pop.n)


def reduce_type2(raw_prefix, n: int, m: int) -> Tuple[float, float, int]:
    values = np.asarray(getattr(raw_prefix, 'values', raw_prefix), dtype=float)
    if not 2 <= m <= n:
        raise PreconditionError(f"type-II reduction needs 2 <= m <= n (m={m}, n={n})")
    if values.size < m:
        raise PreconditionError(f"type-II reduction needs {m} order statistics (got {values.size})")

    x_min = values[0]
    spacings = values[:m] - x_min
    t = np.sum(spacings) + (n - m) * spacings[-1]
    return float(x_min), float(t), m - 1


def _check_removals(removals: Sequence[int], n: int):
    if len(removals) < 2 or any(s < 0 for s in removals) or len(removals) + sum(removals) != n:
        raise PreconditionError(
            f"invalid progressive removal vector {list(removals)} for n={n}: "
            "need m >= 2, S_j >= 0 and m + sum(S) = n"
        )


def reduce_progressive(values, removals: Sequence[int]) -> Tuple[float, float, int]:
    """t = sum_j (S_j + 1)(X_j - X_1) over the m observed failures."""
    values = np.asarray(getattr(values, 'values', values), dtype=float)
    weights = np.asarray(removals, dtype=float) + 1.0
    if values.size != weights.size or values.size < 2:
        raise PreconditionError(
            f"progressive reduction needs one removal count per failure ({values.size} vs {weights.size})"
        )

    x_min = values[0]
    return float(x_min), float(np.sum(weights * (values - x_min))), values.size - 1


def draw_progressive(pop: Population, removals: Sequence[int], rng: np.random.Generator) -> Tuple[float, float, int]:
    _check_removals(removals, pop.n)

    removals = np.asarray(removals, dtype=int)
    # units still on test before failure j: n - (j - 1) - sum of earlier removals
    at_risk = pop.n - np.arange(removals.size) - np.concatenate(([0], np.cumsum(removals)[:-1]))
    offsets = pop.sigma * _unit_spacings(rng, at_risk.astype(float))

    _, t, shape = reduce_progressive(offsets, removals)
    return float(pop.mu + offsets[0]), t, shape


def draw_records(pop: Population, r: int, rng: np.random.Generator) -> Tuple[float, float, int]:
    """First r upper record values; increments after the first record are i.i.d. Exp(sigma)."""
    if r < 2:
        raise PreconditionError(f"record scheme needs r >= 2 (got {r})")

    u = uniform_open(rng, r)
    x_min = exponential_inverse(u[0], pop.mu, pop.sigma)
    t = np.sum(exponential_inverse(u[1:], 0.0, pop.sigma))
    return float(x_min), float(t), r - 1


def draw_raw_stats(pop: Population, scheme: SchemeConfig, index: int,
                   rng: np.random.Generator) -> Tuple[float, float, int]:
    """Raw-path sufficient statistics for population `index` (1-based) under any scheme."""
    kind = scheme.scheme
    if kind is SchemeKind.TYPE_II:
        m = scheme.m[index - 1]
        return reduce_type2(draw_type2(pop, m, rng), pop.n, m)
    if kind is SchemeKind.PROGRESSIVE_II:
        return draw_progressive(pop, scheme.removals[index - 1], rng)
    if kind is SchemeKind.RECORDS:
        return draw_records(pop, scheme.records[index - 1], rng)
    return reduce_iid(draw_iid(pop, rng))


# ---------------------------------------------------------------------------
# Direct path
# ---------------------------------------------------------------------------

def draw_stats_direct(pop: Population, shape: int, rng: np.random.Generator,
                      rate_count: Optional[int] = None, size: Optional[int] = None):
    """x_min ~ mu + Exp(sigma / rate_count) and independent t ~ Gamma(shape, sigma)."""
    if shape < 1:
        raise PreconditionError(f"gamma shape must be at least 1 (got {shape})")

    rate_count = pop.n if rate_count is None else rate_count
    u = uniform_open(rng, 2 if size is None else (size, 2))
    x_min = exponential_inverse(u[..., 0], pop.mu, pop.sigma / rate_count)
    t = gamma_inverse(u[..., 1], shape, pop.sigma)

    if size is None:
        return float(x_min), float(t)
    return x_min, t


def stats_from_uniforms(scenario: Scenario, scheme: SchemeConfig, uniforms: np.ndarray) -> SufficientStats:
    """Map a (reps, k, 2) uniform block to per-replication sufficient statistics."""
    pops = scenario.populations
    sigmas = scenario.sigmas
    rates = np.asarray(scheme.rate_counts(pops), dtype=float)
    shapes = scheme.shapes(pops)

    x_min = exponential_inverse(uniforms[..., 0], scenario.mus, sigmas / rates)
    t = gamma_inverse(uniforms[..., 1], np.asarray(shapes, dtype=float), sigmas)
    return SufficientStats(x_min=x_min, t=t, shape=shapes)


def draw_block_stats(scenario: Scenario, scheme: SchemeConfig, rng: np.random.Generator,
                     block_len: int) -> SufficientStats:
    """Direct-path statistics for one block of replications, replication-major."""
    uniforms = uniform_open(rng, (block_len, scenario.k, 2))
    logger.debug(f"Drew {block_len} replications for k={scenario.k}")
    return stats_from_uniforms(scenario, scheme, uniforms)
