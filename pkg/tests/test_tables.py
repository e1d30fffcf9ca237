import pytest

from cli.tables import (
    LARGE_SAMPLES,
    SCALE_RATIOS,
    SMALL_SAMPLES,
    TABLES,
    TableRow,
    get_table,
)
from model.domain import EstimatorTag, ScenarioKind
from model.errors import UnknownTableError


def test_catalogue_covers_every_published_table():
    assert sorted(TABLES) == [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 15]


def test_unknown_table_is_rejected():
    with pytest.raises(UnknownTableError):
        get_table(14)
    with pytest.raises(UnknownTableError):
        get_table('x')


def test_table_1_grid():
    spec = get_table(1)
    assert spec.kind is ScenarioKind.ORDERED_SCALE
    assert spec.candidate is EstimatorTag.IMPROVED_ORDERED_SCALE
    assert spec.baseline is EstimatorTag.BAEE
    cells = list(spec.cells())
    assert len(cells) == len(SMALL_SAMPLES) * len(SCALE_RATIOS) * 4 * 2
    assert {cell.row.sigmas for cell in cells} == {(r, 1.0) for r in SCALE_RATIOS}


def test_reference_lookup():
    spec = get_table(1)
    cell = next(c for c in spec.cells(p_values=[1.0], sample_sizes=[(5, 5)])
                if c.row == TableRow((0.0, 0.0), (0.5, 1.0)) and c.target == 2)
    assert spec.reference_for(cell) == 1.05


def test_overrides_restrict_the_grid():
    spec = get_table(8)
    cells = list(spec.cells(p_values=[1.0], sample_sizes=[(5, 5)]))
    assert len(cells) == 2
    assert [spec.reference_for(c) for c in cells] == [48.30, 47.81]


def test_grid_points_validate():
    for table_id, spec in TABLES.items():
        for cell in spec.cells():
            report = cell.grid_point(spec.kind).validate()
            assert report.passed, (table_id, report.violations)


def test_large_sample_tables():
    for table_id in (7, 10, 12):
        assert get_table(table_id).sample_sizes == LARGE_SAMPLES


def test_only_the_improved_known_scale_tables_use_the_variant():
    assert [t for t, spec in TABLES.items() if spec.uses_variant] == [6, 7]


def test_repeated_p_columns_are_flagged():
    flags = get_table(2).suspected_duplicates()
    assert flags
    assert flags[0]['p_columns'] == [2.0, 4.0]
    assert not get_table(4).suspected_duplicates()
