"""
Result persistence: full-precision CSV, 2-decimal display CSV and run manifest.
"""

import csv
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

# Add parent directory to path for config import
sys.path.append(str(Path(__file__).parent.parent))
from config import OUTPUT_CONFIG, TOOL_VERSION
from model.errors import ResultsIOError

logger = logging.getLogger(__name__)

RESULT_COLUMNS_TAIL = ['p', 'target', 'estimator', 'baseline', 'risk', 'se', 'baseline_risk',
                       'pri', 'reference', 'deviation']
DISPLAY_COLUMNS = ('risk', 'se', 'baseline_risk', 'pri', 'reference', 'deviation')


def round_half_up(value, decimals: int = 2) -> str:
    """Round half away from zero on the shortest repr of a float."""
    if value is None:
        return ''
    value = float(value)
    if math.isnan(value):
        return ''
    if math.isinf(value):
        return str(value)
    quantum = Decimal(1).scaleb(-decimals)
    return str(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def result_columns(k: int) -> List[str]:
    """table_id, n1..nk, sigma1..sigmak, mu1..muk, then the per-estimator fields."""
    return (['table_id']
            + [f"n{j}" for j in range(1, k + 1)]
            + [f"sigma{j}" for j in range(1, k + 1)]
            + [f"mu{j}" for j in range(1, k + 1)]
            + RESULT_COLUMNS_TAIL)


@dataclass
class RunManifest:
    config_hash: str
    seed: int
    reps: int
    tool_version: str = TOOL_VERSION
    outputs: Dict[str, Dict[str, str]] = field(default_factory=dict)
    duration_seconds: float = 0.0
    config: Dict = field(default_factory=dict)
    variant_outcomes: List[Dict] = field(default_factory=list)
    duplicate_flags: List[Dict] = field(default_factory=list)
    failed_cells: int = 0


class ResultsWriter:
    """Writes result tables and the run manifest under one output directory."""

    def __init__(self, out_dir: Optional[str] = None):
        self.out_dir = Path(out_dir or OUTPUT_CONFIG['out_dir'])

    def _ensure_dir(self):
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ResultsIOError(f"cannot create output directory {self.out_dir}: {e}") from e

    def write_results(self, name: str, df: pd.DataFrame) -> Tuple[Path, Path]:
        """Write <name>.csv at full precision and <name>_display.csv rounded to 2 decimals."""
        self._ensure_dir()
        main_path = self.out_dir / f"{name}.csv"
        display_path = self.out_dir / f"{name}_display.csv"

        display = df.copy()
        decimals = OUTPUT_CONFIG['display_decimals']
        for column in DISPLAY_COLUMNS:
            if column in display.columns:
                display[column] = display[column].map(lambda v: round_half_up(v, decimals))

        try:
            df.to_csv(main_path, index=False, float_format='%.17g', lineterminator='\r\n',
                      quoting=csv.QUOTE_MINIMAL)
            display.to_csv(display_path, index=False, lineterminator='\r\n', quoting=csv.QUOTE_MINIMAL)
        except OSError as e:
            raise ResultsIOError(f"cannot write results for {name}: {e}") from e

        logger.info(f"✅ Wrote {len(df)} rows to {main_path}")
        return main_path, display_path

    def write_json(self, name: str, payload) -> Path:
        self._ensure_dir()
        path = self.out_dir / name
        try:
            with open(path, 'w') as f:
                json.dump(payload, f, indent=2, default=str)
        except OSError as e:
            raise ResultsIOError(f"cannot write {path}: {e}") from e
        return path

    def write_manifest(self, manifest: RunManifest) -> Path:
        path = self.write_json(OUTPUT_CONFIG['manifest_name'], asdict(manifest))
        logger.info(f"✅ Saved run manifest to {path}")
        return path


def load_manifest(path: str) -> Dict:
    """Read a manifest written by ResultsWriter.write_manifest."""
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except OSError as e:
        raise ResultsIOError(f"cannot read manifest {path}: {e}") from e


def rows_to_frame(rows: Sequence[Dict], k: int = 2) -> pd.DataFrame:
    """Result rows in column order; missing reference values become NaN (empty in the CSV)."""
    df = pd.DataFrame(list(rows), columns=result_columns(k))
    for column in ('reference', 'deviation'):
        df[column] = pd.to_numeric(df[column], errors='coerce')
    return df
