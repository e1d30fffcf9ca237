import json

import pandas as pd
import pytest

from cli.commands import cmd_constants, cmd_risk, cmd_table, run_table
from cli.run_config import resolve_config
from estimators.constants import c0
from risk.engine import analytic_affine_risk


def test_constants_row_and_oracle_delta():
    df = cmd_constants([5], [1.0])
    row = df.iloc[0]
    assert row['valid']
    assert row['c0'] == pytest.approx(-0.045639, abs=1e-6)
    assert row['delta_c0'] < 1e-8
    assert row['delta_beta0'] < 1e-8
    assert row['delta_alpha0'] < 1e-8
    assert row['kappa0'] == row['c0']


def test_constants_flag_invalid_entries_without_failing():
    df = cmd_constants([5, 6], [5.0])
    assert df['valid'].tolist() == [False, True]
    assert "n > p violated" in df['note'].iloc[0]


def test_constants_flag_printed_alpha_outside_its_domain():
    df = cmd_constants([5], [4.0], sigma=1.5)
    assert pd.isna(df['alpha0_paper_printed'].iloc[0])
    assert df['valid'].iloc[0]


def test_risk_command_writes_two_rows(tmp_path):
    config = resolve_config({}, {'scenario': 'ordered-scale', 'k': '2', 'n': '5,5', 'sigma': '1,2', 'p': '1',
                                 'estimator': 'baee,mle', 'reps': '4000', 'out_dir': str(tmp_path)})
    df, manifest = cmd_risk(config, threads=2)
    assert df['estimator'].tolist() == ['baee', 'mle']
    assert (df['baseline'] == 'mle').all()
    assert df['pri'].iloc[1] == 0.0
    assert df['pri'].iloc[0] == pytest.approx(100 * (1 - df['risk'].iloc[0] / df['risk'].iloc[1]))
    assert (tmp_path / 'risk.csv').exists()
    assert (tmp_path / 'risk_display.csv').exists()
    assert manifest.config_hash == config.config_hash()


def test_risk_command_under_type2_censoring(tmp_path):
    config = resolve_config({}, {'n': '5,5', 'scheme': 'type2', 'm': '3,3', 'p': '1', 'estimator': 'baee',
                                 'reps': '20000', 'out_dir': str(tmp_path)})
    df, _ = cmd_risk(config)
    expected = analytic_affine_risk(c0(5, 1.0, 2), 5, 2, 1.0)
    assert abs(df['risk'].iloc[0] - expected) < 4 * df['se'].iloc[0]


def test_table_command_small_grid(tmp_path):
    manifest = cmd_table([4], reps=2000, seed=7, p_values=[1.0], sample_sizes=[(5, 5)], out_dir=str(tmp_path))
    df = pd.read_csv(tmp_path / 'table_4.csv')
    assert len(df) == 2
    assert df['reference'].tolist() == [43.58, 43.34]
    assert df['estimator'].unique().tolist() == ['baee']
    assert manifest.failed_cells == 0
    saved = json.loads((tmp_path / 'run_manifest.json').read_text())
    assert saved['outputs']['4']['results'].endswith('table_4.csv')
    assert saved['seed'] == 7


def test_table_output_is_byte_identical_across_thread_counts(tmp_path):
    cmd_table([1], reps=3000, seed=3, p_values=[1.0], sample_sizes=[(5, 5)], out_dir=str(tmp_path / 'a'), threads=1)
    cmd_table([1], reps=3000, seed=3, p_values=[1.0], sample_sizes=[(5, 5)], out_dir=str(tmp_path / 'b'), threads=4)
    assert (tmp_path / 'a' / 'table_1.csv').read_bytes() == (tmp_path / 'b' / 'table_1.csv').read_bytes()


def test_invalid_cells_are_counted_not_fatal(tmp_path):
    manifest = cmd_table([4], reps=500, seed=1, p_values=[6.0], sample_sizes=[(5, 5)], out_dir=str(tmp_path))
    assert manifest.failed_cells == 2
    assert pd.read_csv(tmp_path / 'table_4.csv').empty


def test_variant_outcomes_are_recorded_for_known_scale_tables():
    outcome = run_table(6, reps=2000, seed=5, p_values=[1.0], sample_sizes=[(5, 5)])
    first = outcome.variant_outcomes[0]
    assert first['variant'] == 'paper-printed'
    assert first['compared_cells'] == 4
    cells = 2 * 14
    if first['matched']:
        assert len(outcome.rows) == cells
    else:
        assert outcome.variant_outcomes[1]['variant'] == 'loss-consistent'
        assert len(outcome.rows) == 2 * cells
        assert {row['estimator'] for row in outcome.rows} == {
            'improved-known-scale:paper-printed', 'improved-known-scale:loss-consistent'}


def test_duplicate_reference_values_are_flagged(tmp_path):
    manifest = cmd_table([3], reps=500, seed=1, p_values=[-1.0], sample_sizes=[(5, 7)], out_dir=str(tmp_path))
    assert any(flag['table_id'] == 3 for flag in manifest.duplicate_flags)
