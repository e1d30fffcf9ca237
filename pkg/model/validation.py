"""
Centralised validation of scenarios, life-testing schemes and losses.

validate() never raises: it collects every violated constraint into a
ValidationReport so callers can list all problems at once.
"""

import math
from typing import List

from model.domain import (
    BleeVariant,
    LossSpec,
    Scenario,
    ScenarioKind,
    SchemeConfig,
    SchemeKind,
    ValidationReport,
)

MIN_ABS_P = 1e-10


def _check_loss(loss: LossSpec, violations: List[str]):
    if not math.isfinite(loss.p) or abs(loss.p) < MIN_ABS_P:
        violations.append(f"p != 0 violated: |p| must be at least {MIN_ABS_P:g} (got p={loss.p})")
    if loss.q != 1.0:
        violations.append(f"q = 1 violated (got q={loss.q})")


def _check_populations(scenario: Scenario, violations: List[str]):
    if scenario.k < 2:
        violations.append(f"k >= 2 violated (got k={scenario.k})")
    if not 1 <= scenario.target_index <= max(scenario.k, 1):
        violations.append(f"target index must lie in 1..{scenario.k} (got {scenario.target_index})")

    for i, pop in enumerate(scenario.populations, start=1):
        if not math.isfinite(pop.mu):
            violations.append(f"mu_{i} must be finite (got {pop.mu})")
        if not (math.isfinite(pop.sigma) and pop.sigma > 0):
            violations.append(f"sigma_{i} > 0 violated (got {pop.sigma})")
        if int(pop.n) != pop.n or pop.n < 2:
            violations.append(f"n_{i} >= 2 violated (got {pop.n})")


def _check_ordering(scenario: Scenario, violations: List[str]):
    sigmas = [pop.sigma for pop in scenario.populations]
    mus = [pop.mu for pop in scenario.populations]

    if scenario.kind is ScenarioKind.ORDERED_SCALE:
        if any(a > b for a, b in zip(sigmas, sigmas[1:])):
            violations.append(f"sigma_1 <= ... <= sigma_k violated (got {sigmas})")
    else:
        if any(a > b for a, b in zip(mus, mus[1:])):
            violations.append(f"mu_1 <= ... <= mu_k violated (got {mus})")

    if scenario.kind is ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE and len(set(sigmas)) > 1:
        violations.append(f"equal scales required for the equal-scale case (got {sigmas})")


def _check_scheme(scenario: Scenario, scheme: SchemeConfig, violations: List[str]):
    k = scenario.k

    if scheme.scheme is SchemeKind.TYPE_II:
        if scheme.m is None or len(scheme.m) != k:
            violations.append(f"type-II scheme needs one m per population (k={k})")
            return
        for i, (m, pop) in enumerate(zip(scheme.m, scenario.populations), start=1):
            if not 2 <= m <= pop.n:
                violations.append(f"2 <= m_{i} <= n_{i} violated (m={m}, n={pop.n})")

    elif scheme.scheme is SchemeKind.PROGRESSIVE_II:
        if scheme.removals is None or len(scheme.removals) != k:
            violations.append(f"progressive scheme needs one removal vector per population (k={k})")
            return
        for i, (row, pop) in enumerate(zip(scheme.removals, scenario.populations), start=1):
            if len(row) < 2:
                violations.append(f"m_{i} >= 2 violated for progressive censoring (got {len(row)})")
            if any(s < 0 for s in row):
                violations.append(f"S_{i}j >= 0 violated (got {list(row)})")
            if len(row) + sum(row) != pop.n:
                violations.append(
                    f"m_{i} + sum(S_{i}j) = n_{i} violated ({len(row)} + {sum(row)} != {pop.n})"
                )

    elif scheme.scheme is SchemeKind.RECORDS:
        if scheme.records is None or len(scheme.records) != k:
            violations.append(f"record scheme needs one record count per population (k={k})")
            return
        for i, r in enumerate(scheme.records, start=1):
            if r < 2:
                violations.append(f"r_{i} >= 2 violated (got {r})")


def _check_constants(scenario: Scenario, scheme: SchemeConfig, loss: LossSpec,
                     variant: BleeVariant, violations: List[str]):
    p = loss.p
    pops = scenario.populations
    rates = scheme.rate_counts(pops)

    for i, nu in enumerate(rates, start=1):
        if not nu > p:
            violations.append(f"n_{i} > p violated (rate count {nu}, p={p})")

    if scenario.kind is ScenarioKind.LOC_KNOWN_SCALE:
        q = sum(nu / pop.sigma for nu, pop in zip(rates, pops))
        for i, (nu, pop) in enumerate(zip(rates, pops), start=1):
            if not q * pop.sigma > p:
                violations.append(f"q*sigma_{i} > p violated (q={q:.6g}, sigma_{i}={pop.sigma}, p={p})")
            if variant is BleeVariant.PAPER_PRINTED and not nu > p * pop.sigma:
                violations.append(f"n_{i} > p*sigma_{i} violated (n={nu}, p*sigma={p * pop.sigma:.6g})")

    if scenario.kind is ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE:
        if not sum(rates) > p:
            violations.append(f"n > p violated (n={sum(rates)}, p={p})")
        if sum(scheme.shapes(pops)) < 1:
            violations.append("n - k >= 1 violated for the pooled spacing statistic")


def validate(scenario: Scenario, scheme: SchemeConfig, loss: LossSpec,
             variant: BleeVariant = BleeVariant.PAPER_PRINTED) -> ValidationReport:
    """Check every invariant of the inputs and every constant the scenario's estimators need."""
    violations: List[str] = []

    _check_loss(loss, violations)
    _check_populations(scenario, violations)
    _check_ordering(scenario, violations)
    _check_scheme(scenario, scheme, violations)

    # constants are only meaningful once the structural checks pass
    if not violations:
        _check_constants(scenario, scheme, loss, BleeVariant(variant), violations)

    return ValidationReport(passed=not violations, violations=tuple(violations))
