"""
Run configuration: flat key=value files merged with command-line flags.

Precedence is flag > file > environment default (config.py).
"""

import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from dotenv import dotenv_values

# Add parent directory to path for config import
sys.path.append(str(Path(__file__).parent.parent))
from config import OUTPUT_CONFIG, SIMULATION_CONFIG, TOOL_VERSION
from model.domain import (
    BleeVariant,
    EstimatorId,
    LossSpec,
    Population,
    Scenario,
    ScenarioKind,
    SchemeConfig,
    SchemeKind,
)
from model.errors import ValidationError

logger = logging.getLogger(__name__)

CONFIG_KEYS = ('scenario', 'scheme', 'k', 'n', 'mu', 'sigma', 'm', 'removals', 'records',
               'p', 'reps', 'seed', 'tables', 'out_dir', 'target', 'estimator', 'variant', 'baseline')


def _reject(message: str):
    raise ValidationError.from_message(message)


def parse_float_list(text: Optional[str], name: str) -> Optional[List[float]]:
    if text is None or str(text).strip() == '':
        return None
    try:
        return [float(item) for item in str(text).split(',') if item.strip()]
    except ValueError:
        _reject(f"{name} must be a comma-separated list of numbers (got '{text}')")


def parse_int_list(text: Optional[str], name: str) -> Optional[List[int]]:
    values = parse_float_list(text, name)
    if values is None:
        return None
    if any(v != int(v) for v in values):
        _reject(f"{name} must contain integers (got '{text}')")
    return [int(v) for v in values]


def parse_p_values(text: Optional[str]) -> Optional[List[float]]:
    """Linex p list; p = 0 is rejected here rather than at evaluation time."""
    values = parse_float_list(text, 'p')
    if values is not None and any(abs(p) < 1e-10 for p in values):
        _reject("p != 0 violated: the Linex loss needs a nonzero shape parameter")
    return values


def parse_removals(text: Optional[str]) -> Optional[List[List[int]]]:
    """'0,2;1,0,1' -> [[0, 2], [1, 0, 1]]."""
    if text is None or str(text).strip() == '':
        return None
    return [parse_int_list(chunk, 'removals') or [] for chunk in str(text).split(';')]


def parse_size_pairs(text: Optional[str]) -> Optional[List[Tuple[int, int]]]:
    """'5,5;5,7' -> [(5, 5), (5, 7)]."""
    if text is None or str(text).strip() == '':
        return None
    pairs = []
    for chunk in str(text).split(';'):
        sizes = parse_int_list(chunk, 'sizes') or []
        if len(sizes) != 2:
            _reject(f"sample-size pairs must have two entries (got '{chunk}')")
        pairs.append((sizes[0], sizes[1]))
    return pairs


@dataclass
class RunConfig:
    scenario: str = ScenarioKind.ORDERED_SCALE.value
    scheme: str = SchemeKind.IID.value
    k: Optional[int] = None
    n: Optional[List[int]] = None
    mu: Optional[List[float]] = None
    sigma: Optional[List[float]] = None
    m: Optional[List[int]] = None
    removals: Optional[List[List[int]]] = None
    records: Optional[List[int]] = None
    p: Optional[List[float]] = None
    reps: int = SIMULATION_CONFIG['reps']
    seed: int = SIMULATION_CONFIG['seed']
    tables: Optional[List[int]] = None
    out_dir: str = OUTPUT_CONFIG['out_dir']
    target: int = 1
    estimator: List[str] = field(default_factory=lambda: ['mle'])
    variant: str = BleeVariant.PAPER_PRINTED.value
    baseline: Optional[str] = None

    def config_hash(self) -> str:
        """sha256 of the canonical JSON form, output directory excluded."""
        payload = {key: value for key, value in asdict(self).items() if key != 'out_dir'}
        payload['tool_version'] = TOOL_VERSION
        canonical = json.dumps(payload, sort_keys=True, separators=(',', ':'), default=str)
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

    def to_dict(self) -> Dict:
        return asdict(self)

    # -- domain objects --------------------------------------------------

    def build_scenario(self) -> Scenario:
        k = self.k or len(self.n or [])
        ns = self.n or []
        if k < 1 or len(ns) != k:
            _reject(f"n must list one sample size per population (k={k}, n={ns})")

        mus = self.mu or [0.0] * k
        sigmas = self.sigma or [1.0] * k
        if len(mus) != k or len(sigmas) != k:
            _reject(f"mu and sigma must have k={k} entries (mu={mus}, sigma={sigmas})")

        try:
            kind = ScenarioKind(self.scenario)
        except ValueError:
            _reject(f"unknown scenario '{self.scenario}'; choose from {[s.value for s in ScenarioKind]}")

        pops = tuple(Population(mu=mu, sigma=sigma, n=n) for mu, sigma, n in zip(mus, sigmas, ns))
        return Scenario(kind, pops, self.target)

    def build_scheme(self) -> SchemeConfig:
        try:
            kind = SchemeKind(self.scheme)
        except ValueError:
            _reject(f"unknown scheme '{self.scheme}'; choose from {[s.value for s in SchemeKind]}")

        if kind is SchemeKind.TYPE_II:
            if not self.m:
                _reject("type2 scheme needs --m")
            return SchemeConfig.type2(self.m)
        if kind is SchemeKind.PROGRESSIVE_II:
            if not self.removals:
                _reject("progressive scheme needs --removals")
            return SchemeConfig.progressive(self.removals)
        if kind is SchemeKind.RECORDS:
            if not self.records:
                _reject("records scheme needs --records")
            return SchemeConfig.record_values(self.records)
        return SchemeConfig.iid()

    def build_losses(self) -> List[LossSpec]:
        if not self.p:
            _reject("at least one p value is required")
        return [LossSpec(p) for p in self.p]

    def build_estimators(self) -> List[EstimatorId]:
        ids = []
        for text in self.estimator:
            try:
                est = EstimatorId.parse(text)
            except ValueError:
                _reject(f"unknown estimator '{text}'")
            if est.variant is not None and ':' not in text:
                est = EstimatorId(est.tag, BleeVariant(self.variant))
            ids.append(est)
        return ids


_PARSERS = {
    'k': lambda v: int(v),
    'n': lambda v: parse_int_list(v, 'n'),
    'mu': lambda v: parse_float_list(v, 'mu'),
    'sigma': lambda v: parse_float_list(v, 'sigma'),
    'm': lambda v: parse_int_list(v, 'm'),
    'removals': parse_removals,
    'records': lambda v: parse_int_list(v, 'records'),
    'p': parse_p_values,
    'reps': lambda v: int(v),
    'seed': lambda v: int(v),
    'tables': lambda v: parse_int_list(v, 'tables'),
    'target': lambda v: int(v),
    'estimator': lambda v: [item.strip() for item in str(v).split(',') if item.strip()],
}


def _parse_value(key: str, value):
    if value is None or isinstance(value, (list, int, float)) and not isinstance(value, bool):
        return value
    parser = _PARSERS.get(key)
    try:
        return parser(value) if parser else str(value).strip()
    except ValidationError:
        raise
    except ValueError as e:
        _reject(f"invalid value for {key}: '{value}' ({e})")


def load_run_config(path: Optional[str]) -> Dict[str, object]:
    """Parse a flat key=value run file into typed values; unknown keys are ignored with a warning."""
    if not path:
        return {}

    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"run configuration file not found: {file_path}")

    raw = dotenv_values(file_path)
    values = {}
    for key, value in raw.items():
        key = key.strip().lower()
        if key not in CONFIG_KEYS:
            logger.warning(f"⚠️  Ignoring unknown configuration key '{key}' in {file_path}")
            continue
        values[key] = _parse_value(key, value)

    logger.info(f"✅ Loaded {len(values)} settings from {file_path}")
    return values


def resolve_config(file_values: Dict[str, object], flag_values: Dict[str, object]) -> RunConfig:
    """Flags override file keys, which override environment defaults."""
    merged = dict(file_values)
    for key, value in flag_values.items():
        if key in CONFIG_KEYS and value is not None:
            merged[key] = _parse_value(key, value)
    return RunConfig(**{key: value for key, value in merged.items() if value is not None})
