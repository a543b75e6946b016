"""Tests for the experiment engine."""

import pytest

from src.errors import ConfigError, InsufficientWitnesses
from src.experiments.engine import ExperimentEngine, order_four_automorphisms, sample_squarefree
from src.spin.config import SpinConfig


@pytest.fixture(scope='module')
def cubic_engine(cubic):
    return ExperimentEngine(cubic, seed=1)


@pytest.fixture(scope='module')
def e_engine(governing_e):
    return ExperimentEngine(governing_e)


class TestFieldRuns:

    def test_validate(self, cubic_engine):
        result = cubic_engine.run_validate()
        assert result.checks == {'field': True}
        assert result.passed
        assert any(row['check'] for row in result.rows)

    def test_validate_with_reciprocity(self, cubic_engine):
        result = cubic_engine.run_validate(reciprocity_pairs=60, cells=6)
        assert result.summary['reciprocity_failures'] == 0
        assert result.checks['reciprocity']


class TestSpinRuns:

    def test_spins(self, cubic, cubic_engine):
        config = SpinConfig.build([1], cubic)
        result = cubic_engine.run_spins(300, config, checkpoints=[100, 300])
        assert result.summary['records'] == len(result.rows) == len(result.records)
        assert result.summary['degenerate'] == 0
        assert result.tables['prime_sums'][-1]['value'] == result.summary['sum_s']
        assert list(result.rows[0]) == result.columns == [
            'p', 'orbit_index', 'ideal_key', 'generator_coords', 'spin_sigma_1', 's_value', 'b16']
        assert list(result.tables['prime_sums'][0]) == result.table_columns['prime_sums']

    def test_spins_empty_range_keeps_columns(self, cubic, cubic_engine):
        result = cubic_engine.run_spins(10, SpinConfig.build([1], cubic))
        assert result.rows == []
        assert result.columns[-2:] == ['s_value', 'b16']

    def test_density_rows(self, quintic):
        engine = ExperimentEngine(quintic)
        config = SpinConfig.build([1, quintic.power_index(1, 2)], quintic)
        result = engine.run_density(1000, config, tolerance=1.0)
        assert len(result.rows) == 4
        assert result.checks['density']

    def test_type1(self, cubic, cubic_engine):
        config = SpinConfig.build([1], cubic)
        result = cubic_engine.run_type1(600, config, checkpoints=[150, 600], breakdown_modulus=3)
        assert result.checks['bounded']
        assert [row['checkpoint'] for row in result.rows] == [150, 600]
        assert sum(row['value'] for row in result.tables['breakdown']) == result.summary['total']
        assert list(result.rows[0]) == result.columns

    def test_type2(self, cubic, cubic_engine):
        config = SpinConfig.build([1], cubic)
        result = cubic_engine.run_type2(30, 30, config, seeds=(0, 1))
        assert [row['seed'] for row in result.rows] == [0, 1]
        assert result.checks['bounded']


class TestClassRuns:

    def test_classrank(self, e_engine):
        result = e_engine.run_classrank(2000)
        assert result.checks['rk2']
        assert result.checks['monotone']
        assert result.checks['eight_rank_governing']
        assert 'densities' not in result.checks
        assert [row['k'] for row in result.tables['densities']] == [2, 3, 4]
        assert result.passed

    def test_class_store_and_sink(self, governing_e):
        cached = {5: 2, 13: 2}
        saved = []
        engine = ExperimentEngine(governing_e, class_store=lambda primes: {p: cached[p] for p in primes if p in cached},
                                  class_sink=saved.extend)
        numbers = engine.class_numbers([5, 13, 17, 29])
        assert numbers == {5: 2, 13: 2, 17: 4, 29: 6}
        assert sorted(d.p for d in saved) == [17, 29]

    def test_order_four_automorphisms(self, governing_e, cubic):
        assert len(order_four_automorphisms(governing_e)) == 2
        assert order_four_automorphisms(cubic) == []

    def test_govern16(self, e_engine):
        result = e_engine.run_govern16(3000)
        assert result.checks['s_nonzero']
        assert result.checks['eight_rank_prefilter']
        assert result.summary['split_primes'] == len(result.rows) > 0
        assert [cell['modulus'] for cell in result.tables['cells']] == [16, 32]
        assert all(row['p'] % 8 == 1 for row in result.rows)

    def test_govern16_needs_order_four(self, cubic_engine, e_engine):
        with pytest.raises(ConfigError):
            cubic_engine.run_govern16(100)
        with pytest.raises(ConfigError):
            e_engine.run_govern16(100, order4_choice=2)

    def test_nogoverning(self, e_engine):
        result = e_engine.run_nogoverning_witness(16, 20000, witnesses=3)
        assert result.summary['pairs'] == len(result.rows) >= 3
        for row in result.rows:
            assert row['p'] % 16 == row['p_prime'] % 16 == row['residue']
            assert row['b16_p'] != row['b16_p_prime']

    def test_nogoverning_errors(self, e_engine):
        with pytest.raises(ConfigError):
            e_engine.run_nogoverning_witness(4, 1000)
        with pytest.raises(InsufficientWitnesses):
            e_engine.run_nogoverning_witness(16, 200, witnesses=50)


class TestCharSum:

    def test_single_modulus_with_oracle(self, cubic_engine):
        result = cubic_engine.run_charsum(moduli=[15], n=2, verify_up_to=60)
        assert result.rows == [{'q': 15, 'N': 3, 'k': 1, 'l': 0, 'max': 2, 'exponent': pytest.approx(0.25596, abs=1e-4)}]
        assert result.checks['prefix_sum_oracle']

    def test_sampled_moduli(self, cubic_engine):
        moduli = sample_squarefree((100, 2000), 10, seed=4)
        assert moduli == sample_squarefree((100, 2000), 10, seed=4)
        assert all(q % 2 == 1 and 100 <= q <= 2000 for q in moduli)
        result = cubic_engine.run_charsum(q_range=(100, 2000), samples=10)
        assert result.summary['moduli'] == len(result.rows) <= 10
