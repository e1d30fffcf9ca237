import pytest

from model.domain import (
    BleeVariant,
    LossSpec,
    Population,
    Scenario,
    ScenarioKind,
    SchemeConfig,
)
from model.validation import validate


def scenario(kind=ScenarioKind.ORDERED_SCALE, ns=(5, 5), sigmas=(1.0, 1.0), mus=(0.0, 0.0), target=1):
    pops = tuple(Population(mu, s, n) for mu, s, n in zip(mus, sigmas, ns))
    return Scenario(kind, pops, target)


def test_valid_ordered_scale_scenario_passes():
    report = validate(scenario(sigmas=(0.5, 1.0)), SchemeConfig.iid(), LossSpec(1.0))
    assert report.passed
    assert report.violations == ()


def test_validate_never_raises_and_lists_every_violation():
    bad = scenario(ns=(1, 5), sigmas=(-1.0, 1.0), target=3)
    report = validate(bad, SchemeConfig.iid(), LossSpec(0.0))
    assert not report.passed
    text = " | ".join(report.violations)
    assert "p != 0" in text
    assert "sigma_1 > 0" in text
    assert "n_1 >= 2" in text
    assert "target index" in text


def test_rate_count_must_exceed_p():
    report = validate(scenario(), SchemeConfig.iid(), LossSpec(5.0))
    assert not report.passed
    assert any("n_1 > p" in v for v in report.violations)


def test_records_use_unit_rate_count():
    report = validate(scenario(), SchemeConfig.record_values((3, 3)), LossSpec(1.0))
    assert any("rate count 1" in v for v in report.violations)
    assert validate(scenario(), SchemeConfig.record_values((3, 3)), LossSpec(0.5)).passed


@pytest.mark.parametrize("kind, sigmas, mus", [
    (ScenarioKind.ORDERED_SCALE, (1.0, 0.5), (0.0, 0.0)),
    (ScenarioKind.LOC_KNOWN_SCALE, (1.0, 1.5), (0.4, 0.0)),
    (ScenarioKind.LOC_UNEQUAL_UNKNOWN_SCALE, (1.0, 1.5), (0.4, 0.0)),
])
def test_order_restriction_is_enforced(kind, sigmas, mus):
    report = validate(scenario(kind, sigmas=sigmas, mus=mus), SchemeConfig.iid(), LossSpec(1.0))
    assert not report.passed
    assert any("<= ..." in v for v in report.violations)


def test_equal_scale_case_requires_equal_sigmas():
    report = validate(scenario(ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE, sigmas=(1.0, 2.0), mus=(0.0, 0.1)),
                      SchemeConfig.iid(), LossSpec(1.0))
    assert any("equal scales" in v for v in report.violations)


def test_known_scale_printed_variant_needs_n_above_p_sigma():
    case = scenario(ScenarioKind.LOC_KNOWN_SCALE, ns=(5, 5), sigmas=(1.0, 4.0), mus=(0.0, 0.1))
    printed = validate(case, SchemeConfig.iid(), LossSpec(2.0), BleeVariant.PAPER_PRINTED)
    assert any("n_2 > p*sigma_2" in v for v in printed.violations)
    consistent = validate(case, SchemeConfig.iid(), LossSpec(2.0), BleeVariant.LOSS_CONSISTENT)
    assert consistent.passed


@pytest.mark.parametrize("scheme, fragment", [
    (SchemeConfig.type2((1, 3)), "2 <= m_1 <= n_1"),
    (SchemeConfig.type2((3, 6)), "2 <= m_2 <= n_2"),
    (SchemeConfig.type2((3,)), "one m per population"),
    (SchemeConfig.progressive(((0, 3), (1, 1, 1))), "m_2 + sum(S_2j) = n_2"),
    (SchemeConfig.progressive(((5,), (0, 0, 0, 0, 0))), "m_1 >= 2"),
    (SchemeConfig.progressive(((-1, 4), (0, 0, 0, 0, 0))), "S_1j >= 0"),
    (SchemeConfig.record_values((1, 3)), "r_1 >= 2"),
])
def test_scheme_invariants(scheme, fragment):
    report = validate(scenario(), scheme, LossSpec(0.5))
    assert not report.passed
    assert any(fragment in v for v in report.violations)


def test_constants_are_not_checked_when_structure_is_broken():
    report = validate(scenario(ns=(5, 5), sigmas=(2.0, 1.0)), SchemeConfig.iid(), LossSpec(5.0))
    assert not any("n_1 > p" in v for v in report.violations)


def test_known_scale_rate_sum_bound_is_reported_per_population():
    case = scenario(ScenarioKind.LOC_KNOWN_SCALE, ns=(5, 5), sigmas=(1.0, 1.5))
    report = validate(case, SchemeConfig.iid(), LossSpec(9.0), BleeVariant.LOSS_CONSISTENT)
    assert not report.passed
    assert any(v.startswith("q*sigma_1 > p violated (q=8.33333") for v in report.violations)
    assert not any("q*sigma_2" in v for v in report.violations)
    assert any("n_1 > p" in v for v in report.violations)
    assert any("n_2 > p" in v for v in report.violations)


def test_known_scale_rate_sum_bound_holds_whenever_rates_exceed_p():
    case = scenario(ScenarioKind.LOC_KNOWN_SCALE, ns=(5, 5), sigmas=(1.0, 1.5))
    report = validate(case, SchemeConfig.iid(), LossSpec(4.0), BleeVariant.LOSS_CONSISTENT)
    assert report.passed, report.violations
