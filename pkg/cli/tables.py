"""
Built-in catalogue of the published risk-improvement tables.

Each table fixes a scenario kind, a candidate/baseline pair, the target
populations, the Linex p columns, the sample-size pairs and the row axis
(scale ratios, location gaps or paired settings). A handful of published
cells per table are kept as reference values.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from model.domain import (
    EstimatorTag,
    LossSpec,
    Population,
    Scenario,
    ScenarioKind,
    SchemeConfig,
)
from model.errors import UnknownTableError
from risk.engine import GridPoint

Pair = Tuple[float, float]

SCALE_RATIOS = (0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95)
LOCATION_GAPS = (0.1, 0.2, 0.4, 0.6, 0.9, 1.2, 1.4)
KNOWN_SCALE_PAIRS = ((1.0, 1.5), (3.0, 2.0))

SMALL_SAMPLES = ((5, 5), (5, 7), (7, 6), (8, 10), (15, 12))
LARGE_SAMPLES = ((8, 8), (9, 10), (12, 8), (14, 15), (16, 13))

P_MODERATE = (-1.0, -0.5, 0.5, 1.0)
P_STRONG = (-4.0, -2.0, 2.0, 4.0)
P_WIDE = (-2.5, -2.0, 2.0, 2.5)
P_FULL = (-4.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0)


@dataclass(frozen=True)
class TableRow:
    """One row setting: locations and scales of the two populations."""

    mus: Pair
    sigmas: Pair


@dataclass(frozen=True)
class ReferenceCell:
    ns: Tuple[int, int]
    row: TableRow
    p: float
    target: int
    pri: float


@dataclass(frozen=True)
class TableCell:
    ns: Tuple[int, int]
    row: TableRow
    p: float
    target: int

    def grid_point(self, kind: ScenarioKind, scheme: Optional[SchemeConfig] = None) -> GridPoint:
        pops = tuple(Population(mu=mu, sigma=sigma, n=n)
                     for mu, sigma, n in zip(self.row.mus, self.row.sigmas, self.ns))
        return GridPoint(Scenario(kind, pops, self.target), scheme or SchemeConfig.iid(), LossSpec(self.p))


@dataclass(frozen=True)
class TableSpec:
    table_id: int
    title: str
    kind: ScenarioKind
    candidate: EstimatorTag
    baseline: EstimatorTag
    targets: Tuple[int, ...]
    p_values: Tuple[float, ...]
    sample_sizes: Tuple[Tuple[int, int], ...]
    rows: Tuple[TableRow, ...]
    references: Tuple[ReferenceCell, ...] = field(default_factory=tuple)

    @property
    def uses_variant(self) -> bool:
        return self.candidate is EstimatorTag.IMPROVED_KNOWN_SCALE

    def cells(self, p_values: Optional[Sequence[float]] = None,
              sample_sizes: Optional[Sequence[Tuple[int, int]]] = None) -> Iterator[TableCell]:
        for ns in sample_sizes or self.sample_sizes:
            for row in self.rows:
                for p in p_values or self.p_values:
                    for target in self.targets:
                        yield TableCell(tuple(ns), row, float(p), target)

    def reference_for(self, cell: TableCell) -> Optional[float]:
        for ref in self.references:
            if (ref.ns == cell.ns and ref.row == cell.row and ref.p == cell.p
                    and ref.target == cell.target):
                return ref.pri
        return None

    def suspected_duplicates(self) -> List[Dict]:
        """Reference cells whose value repeats the neighbouring p column verbatim."""
        flags = []
        groups: Dict[Tuple, List[ReferenceCell]] = {}
        for ref in self.references:
            groups.setdefault((ref.ns, ref.row, ref.target), []).append(ref)

        for (ns, row, target), refs in groups.items():
            order = {p: n for n, p in enumerate(self.p_values)}
            refs = sorted(refs, key=lambda ref: order.get(ref.p, len(order)))
            for left, right in zip(refs, refs[1:]):
                adjacent = order.get(right.p, -1) - order.get(left.p, -9) == 1
                if adjacent and left.pri == right.pri:
                    flags.append({
                        'table_id': self.table_id,
                        'ns': list(ns),
                        'mus': list(row.mus),
                        'sigmas': list(row.sigmas),
                        'target': target,
                        'p_columns': [left.p, right.p],
                        'pri': left.pri,
                    })
        return flags


# ---------------------------------------------------------------------------
# Row axes
# ---------------------------------------------------------------------------

def _ratio_rows() -> Tuple[TableRow, ...]:
    return tuple(TableRow((0.0, 0.0), (r, 1.0)) for r in SCALE_RATIOS)


def _gap_rows() -> Tuple[TableRow, ...]:
    return tuple(TableRow((0.0, gap), pair) for pair in KNOWN_SCALE_PAIRS for gap in LOCATION_GAPS)


def _scale_pair_rows() -> Tuple[TableRow, ...]:
    return tuple(TableRow((0.0, 0.0), pair) for pair in KNOWN_SCALE_PAIRS)


EQUAL_SCALE_ROWS = tuple(TableRow((0.0, gap), (s, s)) for gap, s in
                         ((0.1, 0.7), (0.2, 1.0), (0.4, 1.5), (0.6, 2.0), (0.9, 2.3), (1.2, 2.8), (1.4, 3.0)))

UNEQUAL_SCALE_ROWS = tuple(TableRow((0.0, gap), (s1, s2)) for gap, s1, s2 in
                           ((0.1, 0.7, 0.5), (0.2, 1.0, 0.9), (0.4, 1.5, 1.6), (0.6, 2.0, 1.9),
                            (0.9, 2.3, 2.5), (1.2, 2.8, 3.0), (1.4, 3.0, 3.5)))


# ---------------------------------------------------------------------------
# Reference cells
# ---------------------------------------------------------------------------

def _pairs(ns, row: TableRow, p_values, values) -> Tuple[ReferenceCell, ...]:
    """Reference cells from (target 1, target 2) pairs, one pair per p column."""
    cells = []
    for p, (first, second) in zip(p_values, values):
        cells.append(ReferenceCell(ns, row, p, 1, first))
        cells.append(ReferenceCell(ns, row, p, 2, second))
    return tuple(cells)


def _singles(ns, row: TableRow, p_values, target: int, values) -> Tuple[ReferenceCell, ...]:
    return tuple(ReferenceCell(ns, row, p, target, v) for p, v in zip(p_values, values))


_RATIO_05 = TableRow((0.0, 0.0), (0.5, 1.0))
_RATIO_09 = TableRow((0.0, 0.0), (0.9, 1.0))
_RATIO_01 = TableRow((0.0, 0.0), (0.1, 1.0))
_EQUAL = TableRow((0.0, 0.0), (1.0, 1.0))
_GAP_A = TableRow((0.0, 0.1), (1.0, 1.5))
_GAP_B = TableRow((0.0, 0.1), (3.0, 2.0))
_PAIR_A = TableRow((0.0, 0.0), (1.0, 1.5))
_PAIR_B = TableRow((0.0, 0.0), (3.0, 2.0))
_P_TABLE4 = (-1.0, -0.5, 0.5, 1.0, -4.0, -2.0, 2.0, 4.0)

TABLES: Dict[int, TableSpec] = {
    1: TableSpec(
        1, "Clipped ordered-scale estimators vs BAEE", ScenarioKind.ORDERED_SCALE,
        EstimatorTag.IMPROVED_ORDERED_SCALE, EstimatorTag.BAEE, (1, 2), P_MODERATE, SMALL_SAMPLES, _ratio_rows(),
        _pairs((5, 5), _RATIO_05, P_MODERATE, [(1.62, 0.91), (1.69, 0.94), (1.88, 1.01), (2.01, 1.05)])
        + _pairs((5, 5), _RATIO_09, P_MODERATE, [(0.97, 3.52), (1.04, 3.62), (1.20, 3.86), (1.33, 4.00)]),
    ),
    2: TableSpec(
        2, "Clipped ordered-scale estimators vs BAEE, strong asymmetry", ScenarioKind.ORDERED_SCALE,
        EstimatorTag.IMPROVED_ORDERED_SCALE, EstimatorTag.BAEE, (1, 2), P_STRONG, SMALL_SAMPLES, _ratio_rows(),
        _pairs((5, 5), _RATIO_05, P_STRONG, [(1.31, 0.78), (1.49, 0.86), (2.36, 1.10), (2.36, 1.10)]),
    ),
    3: TableSpec(
        3, "Clipped ordered-scale estimators vs MLE", ScenarioKind.ORDERED_SCALE,
        EstimatorTag.IMPROVED_ORDERED_SCALE, EstimatorTag.MLE, (1, 2), P_MODERATE, SMALL_SAMPLES, _ratio_rows(),
        _pairs((5, 7), _RATIO_05, P_MODERATE, [(38.06, 40.63), (38.06, 40.63), (42.73, 44.01), (44.69, 45.33)]),
    ),
    4: TableSpec(
        4, "BAEE vs MLE, ordered scales", ScenarioKind.ORDERED_SCALE,
        EstimatorTag.BAEE, EstimatorTag.MLE, (1, 2), _P_TABLE4, SMALL_SAMPLES, (_EQUAL,),
        _pairs((5, 5), _EQUAL, _P_TABLE4, [(37.25, 36.96), (38.61, 38.33), (41.75, 41.49), (43.58, 43.34),
                                           (31.13, 30.83), (34.88, 34.58), (47.93, 47.62), (60.84, 62.22)])
        + _pairs((5, 7), _EQUAL, _P_TABLE4, [(37.08, 40.39), (38.46, 41.44), (41.69, 43.77), (43.63, 45.09),
                                             (30.93, 35.36), (34.69, 38.51), (48.45, 48.10), (64.56, 56.37)]),
    ),
    5: TableSpec(
        5, "Clipped ordered-scale estimators vs MLE, strong asymmetry", ScenarioKind.ORDERED_SCALE,
        EstimatorTag.IMPROVED_ORDERED_SCALE, EstimatorTag.MLE, (1, 2), P_STRONG, SMALL_SAMPLES, _ratio_rows(),
        _pairs((5, 5), _RATIO_01, P_STRONG, [(31.15, 30.83), (34.90, 34.58), (48.55, 47.73), (60.87, 62.22)]),
    ),
    6: TableSpec(
        6, "Clipped known-scale estimators vs BLEE", ScenarioKind.LOC_KNOWN_SCALE,
        EstimatorTag.IMPROVED_KNOWN_SCALE, EstimatorTag.BLEE, (1, 2), P_MODERATE, SMALL_SAMPLES, _gap_rows(),
        _pairs((5, 5), _GAP_A, P_MODERATE, [(47.84, 11.02), (48.37, 12.90), (49.41, 18.42), (49.89, 22.63)])
        + _pairs((5, 5), _GAP_B, P_MODERATE, [(73.40, 4.73), (70.37, 6.56), (55.61, 13.63), (37.38, 20.69)]),
    ),
    7: TableSpec(
        7, "Clipped known-scale estimators vs BLEE, larger samples", ScenarioKind.LOC_KNOWN_SCALE,
        EstimatorTag.IMPROVED_KNOWN_SCALE, EstimatorTag.BLEE, (1, 2), P_WIDE, LARGE_SAMPLES, _gap_rows(),
        _pairs((8, 8), _GAP_A, P_WIDE, [(40.86, 6.74), (41.35, 7.42), (45.56, 21.12), (45.56, 21.12)])
        + _pairs((8, 8), _GAP_B, P_WIDE, [(73.65, 2.93), (72.76, 3.55), (23.08, 24.32), (3.67, 33.59)]),
    ),
    8: TableSpec(
        8, "Pooled BAEE vs MLE, equal unknown scales", ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE,
        EstimatorTag.BAEE, EstimatorTag.MLE, (1, 2), P_FULL, SMALL_SAMPLES, (_EQUAL,),
        _pairs((5, 5), _EQUAL, P_FULL, [(35.15, 34.95), (39.11, 38.85), (41.61, 41.31), (43.04, 42.71),
                                        (46.36, 45.94), (48.30, 47.81), (52.93, 52.10), (66.12, 65.38)]),
    ),
    9: TableSpec(
        9, "Clipped pooled BAEE vs BAEE, equal unknown scales", ScenarioKind.LOC_EQUAL_UNKNOWN_SCALE,
        EstimatorTag.IMPROVED_EQUAL_SCALE, EstimatorTag.BAEE, (1,), P_FULL, SMALL_SAMPLES, EQUAL_SCALE_ROWS,
        _singles((5, 5), EQUAL_SCALE_ROWS[0], P_FULL, 1,
                 [35.68, 38.38, 40.07, 41.01, 43.12, 44.29, 44.29, 51.37]),
    ),
    10: TableSpec(
        10, "Shifted restricted MLE vs restricted MLE, second population, larger samples",
        ScenarioKind.LOC_KNOWN_SCALE, EstimatorTag.RMLE_IMPROVED, EstimatorTag.RMLE, (2,), P_WIDE, LARGE_SAMPLES,
        _scale_pair_rows(),
        _singles((8, 8), _PAIR_A, P_WIDE, 2, [30.17, 30.50, 33.48, 33.91])
        + _singles((8, 8), _PAIR_B, P_WIDE, 2, [38.86, 39.42, 44.92, 45.77]),
    ),
    11: TableSpec(
        11, "Shifted restricted MLE vs restricted MLE, first population", ScenarioKind.LOC_KNOWN_SCALE,
        EstimatorTag.RMLE_IMPROVED, EstimatorTag.RMLE, (1,), P_MODERATE, SMALL_SAMPLES, _gap_rows(),
        _singles((5, 5), _GAP_A, P_MODERATE, 1, [53.73, 54.77, 57.03, 58.25])
        + _singles((5, 5), _GAP_B, P_MODERATE, 1, [55.72, 56.36, 57.71, 58.43]),
    ),
    12: TableSpec(
        12, "Shifted restricted MLE vs restricted MLE, first population, larger samples",
        ScenarioKind.LOC_KNOWN_SCALE, EstimatorTag.RMLE_IMPROVED, EstimatorTag.RMLE, (1,), P_WIDE, LARGE_SAMPLES,
        _gap_rows(),
        _singles((8, 8), _GAP_A, P_WIDE, 1, [50.92, 51.60, 57.81, 58.70])
        + _singles((8, 8), _GAP_B, P_WIDE, 1, [55.59, 56.00, 59.65, 56.00]),
    ),
    13: TableSpec(
        13, "Shifted restricted MLE vs restricted MLE, second population", ScenarioKind.LOC_KNOWN_SCALE,
        EstimatorTag.RMLE_IMPROVED, EstimatorTag.RMLE, (2,), P_MODERATE, SMALL_SAMPLES, _scale_pair_rows(),
        _singles((5, 5), _PAIR_A, P_MODERATE, 2, [30.84, 31.37, 32.51, 33.10])
        + _singles((5, 5), _PAIR_B, P_MODERATE, 2, [39.93, 40.89, 43.00, 46.34]),
    ),
    15: TableSpec(
        15, "Clipped BAEE vs BAEE, unequal unknown scales", ScenarioKind.LOC_UNEQUAL_UNKNOWN_SCALE,
        EstimatorTag.IMPROVED_UNEQUAL_SCALE, EstimatorTag.BAEE, (1,), P_FULL, SMALL_SAMPLES, UNEQUAL_SCALE_ROWS,
        _singles((5, 5), UNEQUAL_SCALE_ROWS[0], P_FULL, 1,
                 [42.24, 45.18, 46.97, 47.96, 50.11, 51.28, 53.83, 56.88]),
    ),
}


def get_table(table_id: int) -> TableSpec:
    try:
        return TABLES[int(table_id)]
    except (KeyError, ValueError):
        raise UnknownTableError(f"no built-in grid for table {table_id}; known tables: {sorted(TABLES)}")
