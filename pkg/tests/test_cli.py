"""
CLI Tests

Tests for the click command group: output files, formats, config files and exit codes
"""
import json
import math

import pandas as pd
import pytest

from gammaops import __version__
from gammaops.cli import main, parse_int_list
from gammaops.config import TestingConfig
from gammaops.exceptions import LadderShapeError


def invoke(runner, *args):
    return runner.invoke(main, ['--env', 'testing', *args])


class TestParseIntList:
    """Test integer list syntax"""

    def test_forms(self):
        assert parse_int_list('5') == [5]
        assert parse_int_list('0..4') == [0, 1, 2, 3, 4]
        assert parse_int_list('1,3..5') == [1, 3, 4, 5]
        assert parse_int_list('25:400') == [25, 50, 100, 200, 400]

    def test_invalid(self):
        with pytest.raises(ValueError):
            parse_int_list('5..1')
        with pytest.raises(LadderShapeError):
            parse_int_list('25:300')


class TestMomentsCommand:
    """Test exact moment output"""

    def test_csv_rows(self, runner, tmp_path):
        path = tmp_path / 'moments.csv'
        result = invoke(runner, '--output', str(path), 'moments', '--n', '5', '--k', '1', '--m', '0..2')
        assert result.exit_code == 0, result.output
        df = pd.read_csv(path, dtype={'coefficient': str})
        assert list(df.columns) == ['n', 'k', 'r', 'm', 'kind', 'coefficient']
        assert df[df['kind'] == 'raw']['coefficient'].tolist() == ['1', '1', '3/2']

    def test_metadata_sidecar(self, runner, tmp_path):
        path = tmp_path / 'moments.csv'
        invoke(runner, '--output', str(path), 'moments', '--n', '5')
        meta = json.loads((tmp_path / 'moments.meta.json').read_text())
        assert meta['version'] == __version__
        assert meta['command'] == 'moments'
        assert meta['data_file'] == 'moments.csv'
        assert meta['config']['n_values'] == [5]

    def test_config_file_then_flags(self, runner, tmp_path):
        config_path = tmp_path / 'experiment.json'
        config_path.write_text(json.dumps({'n_values': [6], 'k_values': [2], 'm_values': [1, 2]}))
        path = tmp_path / 'out.csv'
        result = invoke(runner, '--config', str(config_path), '--output', str(path), 'moments', '--m', '0')
        assert result.exit_code == 0, result.output
        df = pd.read_csv(path)
        assert set(df['n']) == {6}
        assert set(df['k']) == {2}
        assert set(df['m']) == {0}

    def test_default_output_dir(self, runner, tmp_path, monkeypatch):
        monkeypatch.setattr(TestingConfig, 'OUTPUT_DIR', str(tmp_path / 'results'))
        result = invoke(runner, 'moments', '--n', '5')
        assert result.exit_code == 0, result.output
        assert (tmp_path / 'results' / 'moments.csv').exists()

    def test_human_format(self, runner):
        result = invoke(runner, '--format', 'human', 'moments', '--n', '5', '--m', '2')
        assert result.exit_code == 0
        assert 'Exact moment coefficients' in result.output
        assert '3/2' in result.output

    def test_order_past_both_limits(self, runner, tmp_path):
        """m = 6..9 exceeds n-k = 4 and n-r = 5; nothing is written"""
        path = tmp_path / 'moments.csv'
        result = invoke(runner, '--output', str(path), 'moments', '--n', '5', '--k', '1', '--r', '0', '--m', '0..9')
        assert result.exit_code == 3
        assert 'm=9' in result.output
        assert not path.exists()
        assert not (tmp_path / 'moments.meta.json').exists()

    def test_order_past_one_limit(self, runner, tmp_path):
        """n-k = 2 < m = 3 <= n-r = 5 is still undefined for M_{n,k}"""
        path = tmp_path / 'moments.csv'
        result = invoke(runner, '--output', str(path), 'moments', '--n', '5', '--k', '3', '--r', '0', '--m', '0..3')
        assert result.exit_code == 3
        assert not path.exists()

    def test_every_kind_at_the_limit(self, runner, tmp_path):
        path = tmp_path / 'moments.csv'
        result = invoke(runner, '--output', str(path), 'moments', '--n', '6', '--k', '2', '--r', '1', '--m', '0..4')
        assert result.exit_code == 0, result.output
        df = pd.read_csv(path)
        assert set(df['m']) == {0, 1, 2, 3, 4}
        assert (df['kind'] == 'mstar_central').sum() == 5


class TestDeterministicOutput:
    """Test that identical configs give identical data files"""

    @pytest.mark.parametrize('args', [
        ('moments', '--n', '5..8', '--k', '1..2', '--r', '0..1', '--m', '0..3'),
        ('bounds', '--f', 'exp-neg,t-over-1pt', '--n', '10,20', '--k', '1,2', '--r', '0,1', '--x', '0.5,1'),
    ])
    def test_csv_bytes_identical(self, runner, tmp_path, args):
        first, second = tmp_path / 'first.csv', tmp_path / 'second.csv'
        assert invoke(runner, '--output', str(first), *args).exit_code == 0
        assert invoke(runner, '--output', str(second), *args).exit_code == 0
        assert first.read_bytes() == second.read_bytes()


class TestEvalCommand:
    """Test quadrature evaluation output"""

    def test_normalization(self, runner, tmp_path):
        path = tmp_path / 'eval.csv'
        result = invoke(runner, '--output', str(path), 'eval', '--f', 'one', '--n', '200', '--k', '1', '--x', '2')
        assert result.exit_code == 0, result.output
        value = pd.read_csv(path)['value'].iloc[0]
        assert math.isclose(value, 1.0, rel_tol=1e-10)

    def test_background_operator(self, runner, tmp_path):
        path = tmp_path / 'eval.csv'
        result = invoke(runner, '--output', str(path), 'eval', '--operator', 'G', '--f', 't', '--n', '5', '--x', '2')
        assert result.exit_code == 0, result.output
        df = pd.read_csv(path)
        assert df['operator'].iloc[0] == 'G'
        assert math.isclose(df['value'].iloc[0], 2.0, rel_tol=1e-9)

    def test_unknown_function(self, runner, tmp_path):
        result = invoke(runner, '--output', str(tmp_path / 'e.csv'), 'eval', '--f', 'cosh')
        assert result.exit_code == 2
        assert 'cosh' in result.output

    def test_constraint_violation(self, runner, tmp_path):
        result = invoke(runner, '--output', str(tmp_path / 'e.csv'), 'eval', '--n', '3', '--k', '4')
        assert result.exit_code == 3
        assert not (tmp_path / 'e.csv').exists()

    def test_growth_violation(self, runner, tmp_path):
        result = invoke(runner, '--output', str(tmp_path / 'e.csv'), 'eval', '--f', 't4', '--n', '5')
        assert result.exit_code == 3

    def test_quadrature_failure(self, runner, tmp_path):
        result = invoke(runner, '--node-budget', '100', '--output', str(tmp_path / 'e.csv'),
                        'eval', '--f', 'exp-neg', '--n', '400')
        assert result.exit_code == 4


class TestVerificationCommands:
    """Test voronovskaja, bounds, order and audit"""

    def test_voronovskaja(self, runner, tmp_path):
        path = tmp_path / 'v.csv'
        result = invoke(runner, '--output', str(path), 'voronovskaja', '--f', 'exp-neg', '--x', '1', '--ladder', '25:400')
        assert result.exit_code == 0, result.output
        df = pd.read_csv(path)
        assert df['n'].tolist() == [25, 50, 100, 200, 400]
        assert abs(df['extrapolated'].iloc[-1] - math.exp(-1.0)) <= 2e-3

    def test_voronovskaja_bad_ladder(self, runner):
        result = invoke(runner, 'voronovskaja', '--ladder', '25:300')
        assert result.exit_code == 2

    def test_bounds(self, runner, tmp_path):
        path = tmp_path / 'b.csv'
        result = invoke(runner, '--output', str(path), 'bounds', '--f', 'exp-neg', '--n', '10,20',
                        '--k', '1', '--r', '0', '--x', '1')
        assert result.exit_code == 0, result.output
        df = pd.read_csv(path)
        assert len(df) == 4
        assert set(df['theorem']) == {'first-modulus', 'second-modulus'}
        assert df[df['theorem'] == 'first-modulus']['holds'].all()

    def test_order(self, runner, tmp_path):
        path = tmp_path / 'o.csv'
        result = invoke(runner, '--output', str(path), 'order', '--m', '2', '--n', '20:80')
        assert result.exit_code == 0, result.output
        df = pd.read_csv(path)
        assert df['n'].tolist() == [20, 40, 80]
        assert pd.isna(df['ratio'].iloc[0])
        assert df['passed'].all()

    def test_audit(self, runner, tmp_path):
        path = tmp_path / 'a.csv'
        result = invoke(runner, '--output', str(path), 'audit', '--n', '5..8', '--k', '1..2', '--r', '0..1')
        assert result.exit_code == 0, result.output
        df = pd.read_csv(path)
        assert df[df['m'] <= 2]['match'].all()
        meta = json.loads((tmp_path / 'a.meta.json').read_text())
        assert meta['summary']['match_rate']['0'] == 1.0

    def test_audit_human(self, runner):
        result = invoke(runner, '--format', 'human', 'audit', '--n', '5..6', '--k', '1', '--r', '0')
        assert result.exit_code == 0
        assert 'match_rate' in result.output

    def test_missing_config_file(self, runner, tmp_path):
        result = invoke(runner, '--config', str(tmp_path / 'absent.json'), 'audit')
        assert result.exit_code == 2
