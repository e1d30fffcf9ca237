"""
Kolmogorov-Smirnov checks for the distribution of generated statistics.
"""

import logging
from typing import Callable, Union

import numpy as np
from scipy import stats

from model.errors import PreconditionError

logger = logging.getLogger(__name__)

MIN_SAMPLES = 100

CdfSpec = Union[Callable[[np.ndarray], np.ndarray], 'stats.rv_continuous']


def gamma_distribution(shape: float, sigma: float = 1.0):
    """Frozen Gamma(shape, scale=sigma); shape 1 is the exponential."""
    return stats.gamma(a=shape, scale=sigma)


def _as_cdf(cdf: CdfSpec) -> Callable[[np.ndarray], np.ndarray]:
    return cdf.cdf if hasattr(cdf, 'cdf') else cdf


def ks_statistic(samples, cdf: CdfSpec) -> float:
    """One-sample KS statistic sup |F_n - F| against a CDF or frozen distribution."""
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise PreconditionError("KS statistic needs at least one sample")
    if samples.size < MIN_SAMPLES:
        logger.warning(f"⚠️  KS statistic on only {samples.size} samples")

    return float(stats.kstest(samples, _as_cdf(cdf)).statistic)


def ks_critical_value(n: int, alpha: float = 0.01) -> float:
    """Exact one-sample KS critical value at level alpha for n samples."""
    return float(stats.kstwo.ppf(1.0 - alpha, n))


def ks_one_sample_passes(samples, cdf: CdfSpec, alpha: float = 0.01) -> bool:
    samples = np.asarray(samples, dtype=float).ravel()
    return ks_statistic(samples, cdf) < ks_critical_value(samples.size, alpha)


def ks_two_sample_passes(first, second, alpha: float = 0.01) -> bool:
    """Two-sample KS equality-in-distribution check at level alpha."""
    first = np.asarray(first, dtype=float).ravel()
    second = np.asarray(second, dtype=float).ravel()
    if first.size == 0 or second.size == 0:
        raise PreconditionError("two-sample KS test needs non-empty samples")

    return bool(stats.ks_2samp(first, second).pvalue > alpha)
