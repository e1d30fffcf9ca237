"""
Closed-form constants of the equivariant estimators under Linex loss.

Every constant is written for a population whose minimum has rate count nu
(X_(1) - mu ~ Exp(sigma / nu)) and whose spacing statistic has Gamma shape m.
For complete samples nu = n_i and m = n_i - 1; callers working with censored
or record data pass the scheme's values instead.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from model.domain import BleeVariant, LossSpec, Scenario, ScenarioKind, SchemeConfig
from model.errors import PreconditionError

MIN_ABS_P = 1e-10


def _require_p(p: float):
    if not math.isfinite(p) or abs(p) < MIN_ABS_P:
        raise PreconditionError(f"Linex shape p must be nonzero (got {p})")


def _require_rate(nu: float, p: float):
    if not nu > p:
        raise PreconditionError(f"constant requires n_i > p (n_i={nu}, p={p})")


def _power_multiplier(nu: float, p: float, exponent_base: float) -> float:
    """(1/p)(1 - (nu/(nu-p))^(1/exponent_base)), evaluated without cancellation."""
    return -math.expm1(math.log1p(p / (nu - p)) / exponent_base) / p


def c0(n_i: float, p: float, shape: Optional[int] = None) -> float:
    """BAEE multiplier of X_(1) + c T_i; also the unequal-scale kappa_0."""
    _require_p(p)
    _require_rate(n_i, p)
    m = n_i - 1 if shape is None else shape
    if m < 1:
        raise PreconditionError(f"gamma shape must be at least 1 (got {m})")
    return _power_multiplier(n_i, p, m + 1)


# kappa_0 of the unequal-scale case is the same constant
kappa0 = c0


def beta0(n_i: float, n: int, k: int, p: float) -> float:
    """
    BAEE multiplier of X_(1) + beta T for a common unknown scale and pooled T.

    n is the total number of observations, so the pooled shape is n - k.
    """
    _require_p(p)
    _require_rate(n_i, p)
    if n - k < 1:
        raise PreconditionError(f"pooled statistic needs n - k >= 1 (n={n}, k={k})")
    return _power_multiplier(n_i, p, n - k + 1)


def bound_multiplier(n_i: float, n: int, p: float) -> float:
    """Factor d of the ordered-scale clipping bounds; n is the total number of observations."""
    _require_p(p)
    _require_rate(n_i, p)
    return _power_multiplier(n_i, p, n + 1)


def blee_known_scale(n_i: float, sigma_i: float, p: float,
                     variant: BleeVariant = BleeVariant.PAPER_PRINTED) -> float:
    """Shift alpha of the best location equivariant estimator X_(1) + alpha."""
    _require_p(p)
    variant = BleeVariant(variant)

    if variant is BleeVariant.PAPER_PRINTED:
        if not n_i > p * sigma_i:
            raise PreconditionError(f"printed BLEE shift requires n_i > p*sigma_i (n_i={n_i}, p*sigma_i={p * sigma_i})")
        return math.log1p(-p * sigma_i / n_i) / p

    _require_rate(n_i, p)
    return sigma_i * math.log1p(-p / n_i) / p


def rate_sum(ns: Sequence[float], sigmas: Sequence[float]) -> float:
    """q = sum_j n_j / sigma_j, the rate of min_j X_j(1) under known scales."""
    return float(np.sum(np.asarray(ns, dtype=float) / np.asarray(sigmas, dtype=float)))


def known_scale_shift(q: float, sigma_i: float, p: float) -> float:
    """g_i = (sigma_i/p) ln((q sigma_i - p)/(q sigma_i)), shared by the known-scale improvements."""
    _require_p(p)
    if not q * sigma_i > p:
        raise PreconditionError(f"known-scale bound requires q*sigma_i > p (q={q}, sigma_i={sigma_i}, p={p})")
    return sigma_i * math.log1p(-p / (q * sigma_i)) / p


@dataclass(frozen=True)
class EstimatorConstants:
    """Constants available for one target population; None where the scenario has no use for them."""

    c0: Optional[float] = None
    alpha0: Optional[float] = None
    beta0: Optional[float] = None
    bound_multiplier: Optional[float] = None
    rate_sum: Optional[float] = None

    @classmethod
    def for_target(cls, scenario: Scenario, scheme: SchemeConfig, loss: LossSpec,
                   variant: BleeVariant = BleeVariant.PAPER_PRINTED) -> 'EstimatorConstants':
        pops = scenario.populations
        i = scenario.target_index
        rates = scheme.rate_counts(pops)
        shapes = scheme.shapes(pops)
        nu_i, m_i, sigma_i = rates[i - 1], shapes[i - 1], pops[i - 1].sigma
        total = sum(shapes) + scenario.k
        p = loss.p

        if scenario.kind is ScenarioKind.ORDERED_SCALE:
            return cls(c0=c0(nu_i, p, m_i), bound_multiplier=bound_multiplier(nu_i, total, p))
        if scenario.kind is ScenarioKind.LOC_KNOWN_SCALE:
            return cls(alpha0=blee_known_scale(nu_i, sigma_i, p, variant),
                       rate_sum=rate_sum(rates, scenario.sigmas))
        if scenario.kind is ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE:
            return cls(beta0=beta0(nu_i, total, scenario.k, p))
        return cls(c0=c0(nu_i, p, m_i))
