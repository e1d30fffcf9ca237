"""
Domain types for order-restricted estimation of exponential location parameters.

All types are immutable value objects. Constructors do not validate; validation
is centralised in model.validation.validate so that estimators can assume their
preconditions.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np


class ScenarioKind(str, Enum):
    """Which order restriction is imposed and what is known about the scales."""

    ORDERED_SCALE = 'ordered-scale'
    LOC_KNOWN_SCALE = 'known-scale'
    LOC_EQUAL_UNKNOWN_SCALE = 'equal-scale'
    LOC_UNEQUAL_UNKNOWN_SCALE = 'unequal-scale'

    @property
    def location_ordered(self) -> bool:
        return self is not ScenarioKind.ORDERED_SCALE


class SchemeKind(str, Enum):
    """Life-testing scheme that produced the data."""

    IID = 'iid'
    TYPE_II = 'type2'
    PROGRESSIVE_II = 'progressive'
    RECORDS = 'records'


class EstimatorTag(str, Enum):
    MLE = 'mle'
    RMLE = 'rmle'
    BAEE = 'baee'
    BLEE = 'blee'
    IMPROVED_ORDERED_SCALE = 'improved-ordered-scale'
    IMPROVED_KNOWN_SCALE = 'improved-known-scale'
    IMPROVED_EQUAL_SCALE = 'improved-equal-scale'
    IMPROVED_UNEQUAL_SCALE = 'improved-unequal-scale'
    RMLE_IMPROVED = 'rmle-improved'


class BleeVariant(str, Enum):
    """Which shift constant the known-scale location family uses."""

    PAPER_PRINTED = 'paper-printed'
    LOSS_CONSISTENT = 'loss-consistent'


VARIANT_TAGS = frozenset({EstimatorTag.BLEE, EstimatorTag.IMPROVED_KNOWN_SCALE})


@dataclass(frozen=True)
class EstimatorId:
    tag: EstimatorTag
    variant: Optional[BleeVariant] = None

    def __post_init__(self):
        tag = EstimatorTag(self.tag)
        object.__setattr__(self, 'tag', tag)
        if tag in VARIANT_TAGS:
            variant = BleeVariant(self.variant) if self.variant else BleeVariant.PAPER_PRINTED
        else:
            # variant flag only means something for the known-scale family
            variant = None
        object.__setattr__(self, 'variant', variant)

    @property
    def label(self) -> str:
        if self.variant is None:
            return self.tag.value
        return f"{self.tag.value}:{self.variant.value}"

    @classmethod
    def parse(cls, text: str) -> 'EstimatorId':
        """Parse 'tag' or 'tag:variant', e.g. 'blee:loss-consistent'."""
        tag, _, variant = text.strip().lower().partition(':')
        return cls(EstimatorTag(tag), BleeVariant(variant) if variant else None)

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class LossSpec:
    """Linex loss q[e^{pt} - pt - 1]; q is fixed at 1."""

    p: float
    q: float = 1.0


@dataclass(frozen=True)
class Population:
    mu: float
    sigma: float
    n: int


@dataclass(frozen=True)
class Scenario:
    kind: ScenarioKind
    populations: Tuple[Population, ...]
    target_index: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'kind', ScenarioKind(self.kind))
        object.__setattr__(self, 'populations', tuple(self.populations))

    @property
    def k(self) -> int:
        return len(self.populations)

    @property
    def mus(self) -> np.ndarray:
        return np.array([pop.mu for pop in self.populations], dtype=float)

    @property
    def sigmas(self) -> np.ndarray:
        return np.array([pop.sigma for pop in self.populations], dtype=float)

    @property
    def ns(self) -> np.ndarray:
        return np.array([pop.n for pop in self.populations], dtype=int)

    @property
    def target(self) -> Population:
        return self.populations[self.target_index - 1]

    def with_target(self, target_index: int) -> 'Scenario':
        return replace(self, target_index=target_index)

    def shifted(self, shift: float) -> 'Scenario':
        """Same scenario with every location moved by a common shift."""
        pops = tuple(replace(pop, mu=pop.mu + shift) for pop in self.populations)
        return replace(self, populations=pops)


@dataclass(frozen=True)
class SchemeConfig:
    scheme: SchemeKind = SchemeKind.IID
    m: Optional[Tuple[int, ...]] = None
    removals: Optional[Tuple[Tuple[int, ...], ...]] = None
    records: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 'scheme', SchemeKind(self.scheme))
        if self.m is not None:
            object.__setattr__(self, 'm', tuple(int(v) for v in self.m))
        if self.removals is not None:
            object.__setattr__(self, 'removals', tuple(tuple(int(s) for s in row) for row in self.removals))
        if self.records is not None:
            object.__setattr__(self, 'records', tuple(int(v) for v in self.records))

    @classmethod
    def iid(cls) -> 'SchemeConfig':
        return cls(SchemeKind.IID)

    @classmethod
    def type2(cls, m: Sequence[int]) -> 'SchemeConfig':
        return cls(SchemeKind.TYPE_II, m=tuple(m))

    @classmethod
    def progressive(cls, removals: Sequence[Sequence[int]]) -> 'SchemeConfig':
        return cls(SchemeKind.PROGRESSIVE_II, removals=tuple(tuple(row) for row in removals))

    @classmethod
    def record_values(cls, r: Sequence[int]) -> 'SchemeConfig':
        return cls(SchemeKind.RECORDS, records=tuple(r))

    def observed(self, populations: Sequence[Population]) -> Tuple[int, ...]:
        """Number of observed failures (or records) per population."""
        if self.scheme is SchemeKind.TYPE_II:
            return tuple(self.m)
        if self.scheme is SchemeKind.PROGRESSIVE_II:
            return tuple(len(row) for row in self.removals)
        if self.scheme is SchemeKind.RECORDS:
            return tuple(self.records)
        return tuple(pop.n for pop in populations)

    def shapes(self, populations: Sequence[Population]) -> Tuple[int, ...]:
        """Gamma shape of each t_i: n_i - 1, m_i - 1 or r_i - 1."""
        return tuple(count - 1 for count in self.observed(populations))

    def rate_counts(self, populations: Sequence[Population]) -> Tuple[int, ...]:
        """Rate multiplier of each minimum: X_(1) - mu ~ Exp(sigma / rate_count)."""
        if self.scheme is SchemeKind.RECORDS:
            return tuple(1 for _ in populations)
        return tuple(pop.n for pop in populations)


@dataclass(frozen=True, eq=False)
class SufficientStats:
    """Per-population (X_(1), T) pairs; arrays are (k,) or (reps, k)."""

    x_min: np.ndarray
    t: np.ndarray
    shape: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'x_min', np.asarray(self.x_min, dtype=float))
        object.__setattr__(self, 't', np.asarray(self.t, dtype=float))
        object.__setattr__(self, 'shape', tuple(int(s) for s in self.shape))

    @property
    def k(self) -> int:
        return self.x_min.shape[-1]

    @property
    def pooled_t(self) -> np.ndarray:
        return self.t.sum(axis=-1)

    @property
    def pooled_shape(self) -> int:
        return sum(self.shape)

    def ratios(self, i: int) -> np.ndarray:
        """W_j = t_j / t_i for every j (the i-th entry is 1)."""
        return self.t / self.t[..., i - 1:i]

    def differences(self, i: int) -> np.ndarray:
        """Y_j = x_min_j - x_min_i for every j (the i-th entry is 0)."""
        return self.x_min - self.x_min[..., i - 1:i]


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violations: Tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self):
        return self.passed

    def raise_if_failed(self):
        if not self.passed:
            from model.errors import ValidationError
            raise ValidationError(self)


@dataclass(frozen=True)
class RiskEstimate:
    estimator: EstimatorId
    mean_loss: float
    std_error: float
    reps: int
    seed: int


@dataclass(frozen=True)
class PriResult:
    baseline: EstimatorId
    candidate: EstimatorId
    pri_percent: float
    baseline_risk: float
    candidate_risk: float
