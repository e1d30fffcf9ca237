"""
Risk engine: Linex loss, closed-form risks of affine and shift estimators,
Monte Carlo risk with common random numbers, and percentage risk improvement.
"""

import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

# Add parent directory to path for config import
sys.path.append(str(Path(__file__).parent.parent))
from config import SIMULATION_CONFIG
from estimators.registry import build_estimator, check_compatible
from model.domain import (
    BleeVariant,
    EstimatorId,
    LossSpec,
    PriResult,
    RiskEstimate,
    Scenario,
    SchemeConfig,
    ValidationReport,
)
from model.errors import PreconditionError
from model.validation import validate
from sampling.generators import draw_block_stats
from sampling.streams import block_stream, iter_blocks

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridPoint:
    """One cell of a risk table: scenario, scheme and loss."""

    scenario: Scenario
    scheme: SchemeConfig
    loss: LossSpec

    @property
    def sigma_ratio(self) -> float:
        sigmas = self.scenario.sigmas
        return float(sigmas[0] / sigmas[1])

    @property
    def mu_gap(self) -> float:
        mus = self.scenario.mus
        return float(mus[1] - mus[0])

    @property
    def key(self) -> str:
        ns = ','.join(str(pop.n) for pop in self.scenario.populations)
        sigmas = ','.join(f"{pop.sigma:g}" for pop in self.scenario.populations)
        mus = ','.join(f"{pop.mu:g}" for pop in self.scenario.populations)
        return (f"{self.scenario.kind.value} i={self.scenario.target_index} n=({ns}) "
                f"sigma=({sigmas}) mu=({mus}) p={self.loss.p:g} scheme={self.scheme.scheme.value}")

    def with_target(self, target_index: int) -> 'GridPoint':
        return GridPoint(self.scenario.with_target(target_index), self.scheme, self.loss)

    def validate(self, variant: BleeVariant = BleeVariant.PAPER_PRINTED) -> ValidationReport:
        return validate(self.scenario, self.scheme, self.loss, variant)


def linex_loss(delta, mu, sigma, p: float):
    """e^{pt} - pt - 1 with t = (delta - mu) / sigma."""
    if abs(p) < 1e-10:
        raise PreconditionError(f"Linex shape p must be nonzero (got {p})")
    if np.any(np.asarray(sigma) <= 0):
        raise PreconditionError(f"scale must be positive (got {sigma})")

    pt = p * (np.asarray(delta, dtype=float) - mu) / sigma
    # expm1(x) >= x; the clamp only absorbs last-bit rounding
    return np.maximum(np.expm1(pt) - pt, 0.0)


def analytic_affine_risk(c: float, n_i: float, m: int, p: float) -> float:
    """Exact risk of X_(1) + c T with T ~ Gamma(m, sigma); free of (mu, sigma)."""
    if not n_i > p:
        raise PreconditionError(f"affine risk requires n_i > p (n_i={n_i}, p={p})")
    if m < 1:
        raise PreconditionError(f"gamma shape must be at least 1 (got {m})")
    if not c * p < 1:
        raise PreconditionError(f"moment generating function diverges for c*p >= 1 (c={c}, p={p})")

    log_mgf = math.log1p(p / (n_i - p)) - m * math.log1p(-p * c)
    return math.expm1(log_mgf) - p / n_i - p * c * m


def analytic_shift_risk(alpha: float, n_i: float, sigma_i: float, p: float) -> float:
    """Exact risk of X_(1) + alpha under the sigma-scaled Linex loss."""
    if not n_i > p:
        raise PreconditionError(f"shift risk requires n_i > p (n_i={n_i}, p={p})")

    z = p * alpha / sigma_i
    return math.expm1(z + math.log1p(p / (n_i - p))) - z - p / n_i


def _validation_variant(estimators: Sequence[EstimatorId]) -> BleeVariant:
    variants = {est.variant for est in estimators if est.variant is not None}
    if variants and variants == {BleeVariant.LOSS_CONSISTENT}:
        return BleeVariant.LOSS_CONSISTENT
    return BleeVariant.PAPER_PRINTED


def worker_count(threads: Optional[int], n_blocks: int) -> int:
    """Requested threads (CPU count by default), capped by ORDEXP_THREADS and the block count."""
    workers = threads or os.cpu_count() or 1
    cap = SIMULATION_CONFIG['threads']
    if cap:
        workers = min(workers, cap)
    return max(1, min(workers, n_blocks))


def simulate_losses(estimators: Sequence[EstimatorId], point: GridPoint, reps: int, seed: int,
                    threads: Optional[int] = None, block_size: Optional[int] = None) -> Dict[EstimatorId, np.ndarray]:
    """
    Per-replication losses of every estimator on common random numbers.

    Replication r always sees the same sufficient statistics for a given seed,
    so the returned arrays are identical for any thread count.
    """
    if reps < 2:
        raise PreconditionError(f"Monte Carlo risk needs at least 2 replications (got {reps})")

    point.validate(_validation_variant(estimators)).raise_if_failed()
    for est in estimators:
        check_compatible(est, point.scenario.kind)

    scenario = point.scenario
    target = scenario.target
    fns = {est: build_estimator(est, scenario, point.scheme, point.loss) for est in estimators}
    blocks = list(iter_blocks(reps, block_size or SIMULATION_CONFIG['block_size']))

    def run_block(block_spec: Tuple[int, int, int]) -> Dict[EstimatorId, np.ndarray]:
        block, _, block_len = block_spec
        stats = draw_block_stats(scenario, point.scheme, block_stream(seed, block), block_len)
        return {est: linex_loss(fn(stats), target.mu, target.sigma, point.loss.p) for est, fn in fns.items()}

    workers = worker_count(threads, len(blocks))

    start_time = datetime.now()
    if workers == 1:
        results = [run_block(spec) for spec in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run_block, blocks))

    losses = {est: np.concatenate([res[est] for res in results]) for est in estimators}
    duration = datetime.now() - start_time
    logger.info(f"📊 {point.key}: {reps} reps x {len(estimators)} estimators in {duration}")
    return losses


def summarize(estimator: EstimatorId, losses: np.ndarray, seed: int) -> RiskEstimate:
    reps = losses.size
    mean = float(np.sum(losses) / reps)
    se = float(np.std(losses, ddof=1) / math.sqrt(reps))
    return RiskEstimate(estimator=estimator, mean_loss=mean, std_error=se, reps=reps, seed=seed)


def mc_risk(estimator: EstimatorId, point: GridPoint, reps: int, seed: int,
            threads: Optional[int] = None) -> RiskEstimate:
    losses = simulate_losses([estimator], point, reps, seed, threads=threads)
    return summarize(estimator, losses[estimator], seed)


def mc_risks(estimators: Sequence[EstimatorId], point: GridPoint, reps: int, seed: int,
             threads: Optional[int] = None) -> Tuple[Dict[EstimatorId, RiskEstimate], Dict[EstimatorId, np.ndarray]]:
    """Risk estimates of several estimators on shared samples, plus the raw losses."""
    losses = simulate_losses(estimators, point, reps, seed, threads=threads)
    return {est: summarize(est, arr, seed) for est, arr in losses.items()}, losses


def pri(baseline: RiskEstimate, candidate: RiskEstimate) -> PriResult:
    """Percentage risk improvement of candidate over baseline."""
    if not baseline.mean_loss > 0:
        raise PreconditionError(f"baseline risk must be positive (got {baseline.mean_loss})")

    improvement = 100.0 * (baseline.mean_loss - candidate.mean_loss) / baseline.mean_loss
    return PriResult(
        baseline=baseline.estimator,
        candidate=candidate.estimator,
        pri_percent=improvement,
        baseline_risk=baseline.mean_loss,
        candidate_risk=candidate.mean_loss,
    )


def paired_difference_se(base_losses: np.ndarray, cand_losses: np.ndarray) -> float:
    """Standard error of the mean per-replication loss difference."""
    diff = np.asarray(cand_losses, dtype=float) - np.asarray(base_losses, dtype=float)
    if diff.size < 2:
        raise PreconditionError("paired standard error needs at least 2 replications")
    return float(np.std(diff, ddof=1) / math.sqrt(diff.size))
