"""End-to-end tests of the experiment CLI."""

import pytest
from sqlalchemy import create_engine, text

from src.cli.main import EXIT_CONFIG, EXIT_OK, main
from src.cli.models import CharSumParams, ClassRankParams, SpinParams, Type2Params, parse_params
from src.errors import ConfigError


def read_comments(path):
    return [line for line in path.read_text().splitlines() if line.startswith('#')]


class TestMain:

    def test_charsum_writes_csv(self, tmp_path):
        out = tmp_path / 'charsum.csv'
        code = main(['charsum', '--moduli', '15,21', '--n', '2', '--verify-up-to', '40', '--out', str(out)])
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == '# subcommand: charsum'
        assert '# check prefix_sum_oracle: ok' in lines
        header = next(line for line in lines if not line.startswith('#'))
        assert header == 'q,N,k,l,max,exponent'

    def test_output_is_deterministic(self, tmp_path):
        first, second = tmp_path / 'a.csv', tmp_path / 'b.csv'
        args = ['spins', '--preset', 'cubic9', '--max-norm', '400', '--set-S', '1', '--checkpoints', '100,400']
        assert main(args + ['--out', str(first)]) == EXIT_OK
        assert main(args + ['--out', str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()
        assert (tmp_path / 'a_prime_sums.csv').read_bytes() == (tmp_path / 'b_prime_sums.csv').read_bytes()

    def test_empty_range_writes_header_only(self, tmp_path):
        out = tmp_path / 'spins.csv'
        args = ['spins', '--preset', 'cubic9', '--max-norm', '10', '--set-S', '1', '--out', str(out)]
        assert main(args) == EXIT_OK
        table = [line for line in out.read_text().splitlines() if not line.startswith('#')]
        assert table == ['p,orbit_index,ideal_key,generator_coords,spin_sigma_1,s_value,b16']

    def test_prime_sums_table_has_header(self, tmp_path):
        out = tmp_path / 'spins.csv'
        args = ['spins', '--preset', 'cubic9', '--max-norm', '10', '--set-S', '1',
                '--checkpoints', '10', '--out', str(out)]
        assert main(args) == EXIT_OK
        table = [line for line in (tmp_path / 'spins_prime_sums.csv').read_text().splitlines()
                 if not line.startswith('#')]
        assert table[0] == 'checkpoint,value,count,ratio'

    def test_unknown_preset(self, tmp_path):
        assert main(['validate', '--preset', 'septic', '--out', str(tmp_path / 'v.csv')]) == EXIT_CONFIG

    def test_missing_argument(self, tmp_path):
        assert main(['spins', '--set-S', '1', '--out', str(tmp_path / 's.csv')]) == EXIT_CONFIG

    def test_invalid_S(self, tmp_path):
        args = ['spins', '--max-norm', '100', '--set-S', '1,2', '--out', str(tmp_path / 's.csv')]
        assert main(args) == EXIT_CONFIG

    def test_norm_ceiling(self, tmp_path):
        args = ['type1', '--max-norm', str(10 ** 12), '--set-S', '1', '--out', str(tmp_path / 't.csv')]
        assert main(args) == EXIT_CONFIG

    def test_classrank_defaults_to_governing_field(self, tmp_path):
        out = tmp_path / 'classrank.csv'
        assert main(['classrank', '--max-norm', '500', '--out', str(out)]) == EXIT_OK
        comments = read_comments(out)
        assert '# field: governing_e' in comments
        assert '# check eight_rank_governing: ok' in comments
        assert (tmp_path / 'classrank_densities.csv').exists()

    def test_export_spec(self, tmp_path):
        out = tmp_path / 'quintic.json'
        assert main(['export-spec', '--preset', 'quintic11', '--out', str(out)]) == EXIT_OK
        assert main(['validate', '--spec', str(out), '--out', str(tmp_path / 'v.csv')]) == EXIT_OK

    def test_runs_are_recorded(self, tmp_path):
        url = f"sqlite:///{tmp_path / 'runs.db'}"
        out = tmp_path / 'nogo.csv'
        args = ['nogoverning', '--modulus', '16', '--max-norm', '300', '--witnesses', '50',
                '--db', '--db-url', url, '--out', str(out)]
        assert main(args) == 1
        args = ['classrank', '--max-norm', '300', '--db', '--db-url', url, '--out', str(out)]
        assert main(args) == EXIT_OK
        engine = create_engine(url)
        with engine.connect() as connection:
            statuses = [row[0] for row in connection.execute(text('SELECT status FROM experiment_runs ORDER BY id'))]
            cached = connection.execute(text('SELECT COUNT(*) FROM class_data')).scalar()
        assert statuses == ['FAILED', 'PASSED']
        assert cached > 0


class TestParams:

    def test_spin_params(self):
        params = parse_params(SpinParams, preset='cubic9', max_norm=1000, S=[1], checkpoints=[500, 100])
        assert params.checkpoints == [100, 500]
        assert params.threads == 1

    def test_rejects_unknown_fields(self):
        with pytest.raises(ConfigError):
            parse_params(ClassRankParams, max_p=100, colour='red')

    def test_both_field_sources(self, tmp_path):
        spec = tmp_path / 'f.json'
        spec.write_text('{}')
        with pytest.raises(ConfigError):
            parse_params(ClassRankParams, preset='cubic9', spec_path=spec, max_p=100)

    def test_missing_spec_file(self, tmp_path):
        with pytest.raises(ConfigError, match='does not exist'):
            parse_params(ClassRankParams, spec_path=tmp_path / 'none.json', max_p=100)

    @pytest.mark.parametrize('values', [
        {'max_norm': 0, 'S': [1]},
        {'max_norm': 100, 'S': []},
        {'max_norm': 100, 'S': [1], 'threads': 0},
        {'max_norm': 100, 'S': [1], 'checkpoints': [0]},
    ])
    def test_invalid_spin_params(self, values):
        with pytest.raises(ConfigError):
            parse_params(SpinParams, **values)

    def test_type2_product_ceiling(self):
        with pytest.raises(ConfigError):
            parse_params(Type2Params, x=10 ** 6, y=10 ** 6, S=[1])

    def test_charsum_range(self):
        assert parse_params(CharSumParams).q_range == (1000, 100_000)
        with pytest.raises(ConfigError):
            parse_params(CharSumParams, q_range=(500, 100))

    def test_none_values_take_defaults(self):
        params = parse_params(CharSumParams, samples=None, n=None)
        assert params.samples == 50 and params.n == 3
