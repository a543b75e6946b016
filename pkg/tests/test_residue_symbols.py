"""Tests for quadratic residue symbols over O_K and the reciprocity table."""

from math import gcd

import numpy as np
import pytest

from src.algebra.elements import FieldElement, Modulus8Class, element_mul, element_pow, norm
from src.errors import ConfigError, EvenArgument, InconsistentCell, UnpopulatedCell
from src.primes.factorization import factor_rational_prime
from src.symbols.rational import jacobi
from src.symbols.reciprocity import (
    CellTable, ReciprocityTable, admissible_pair, cell_key, check_reciprocity, derive_mu2_table,
    random_lift, random_odd_class, reciprocity_defect, sample_cell
)
from src.symbols.residue import factor_integer, hilbert_infinity, residue_symbol, residue_symbol_prime


def test_factor_integer():
    assert factor_integer(360) == {2: 3, 3: 2, 5: 1}
    assert factor_integer(1) == {}
    assert factor_integer(1000003 * 1000033) == {1000003: 1, 1000033: 1}


class TestResidueSymbol:

    @pytest.mark.parametrize('a', [2, 5, 7, 10, -1])
    @pytest.mark.parametrize('b', [5, 7, 17, 19, 35])
    def test_rational_arguments(self, cubic, governing_e, a, b):
        expected = jacobi(a, b)
        assert residue_symbol(FieldElement.rational(a, 3), FieldElement.rational(b, 3), cubic) == expected
        # even degree: every unit-free rational symbol is 1
        e_value = residue_symbol(FieldElement.rational(a, 8), FieldElement.rational(b, 8), governing_e)
        assert e_value == (1 if expected else 0)

    def test_euler_criterion_at_split_prime(self, cubic, rng):
        P = factor_rational_prime(19, cubic)[0]
        for _ in range(20):
            a = FieldElement.of(rng.integers(-30, 31, size=3))
            r = P.residue_int(a)
            expected = 0 if r == 0 else (1 if pow(r, 9, 19) == 1 else -1)
            assert residue_symbol_prime(a, P) == expected

    def test_squares_have_symbol_one(self, cubic, quintic, rng, odd_unramified):
        for spec in (cubic, quintic):
            for _ in range(10):
                a = FieldElement.of(rng.integers(-6, 7, size=spec.degree))
                b = odd_unramified(spec)
                if a.is_zero() or gcd(norm(a, spec), norm(b, spec)) != 1:
                    continue
                assert residue_symbol(element_pow(a, 2, spec), b, spec) == 1

    def test_multiplicative_in_numerator(self, cubic, rng, odd_unramified):
        b = odd_unramified(cubic)
        for _ in range(15):
            a1 = FieldElement.of(rng.integers(-9, 10, size=3))
            a2 = FieldElement.of(rng.integers(-9, 10, size=3))
            product = residue_symbol(element_mul(a1, a2, cubic), b, cubic)
            assert product == residue_symbol(a1, b, cubic) * residue_symbol(a2, b, cubic)

    def test_unit_denominator(self, cubic):
        assert residue_symbol(FieldElement.of([5, 1, 0]), FieldElement.of([0, 1, 0]), cubic) == 1

    def test_even_denominator(self, cubic):
        with pytest.raises(EvenArgument):
            residue_symbol(FieldElement.rational(3, 3), FieldElement.rational(2, 3), cubic)

    def test_hilbert_infinity(self, cubic, governing_e):
        minus = FieldElement.rational(-1, 3)
        assert hilbert_infinity(minus, minus, cubic) == -1
        assert hilbert_infinity(minus, FieldElement.rational(3, 3), cubic) == 1
        assert hilbert_infinity(FieldElement.rational(-1, 8), FieldElement.rational(-1, 8), governing_e) == 1


class TestCellTable:

    def test_record_and_lookup(self):
        table = CellTable(name='t')
        table.record(('1', '3'), -1)
        table.record(('1', '3'), -1)
        assert table.lookup(('1', '3')) == -1
        assert table.min_samples == 2
        with pytest.raises(InconsistentCell):
            table.record(('1', '3'), 1)
        with pytest.raises(UnpopulatedCell):
            table.lookup(('5', '7'))

    def test_saved_table_loads(self, tmp_path):
        table = ReciprocityTable(name='mu2')
        table.record(('100', '300'), 1)
        table.save(tmp_path / 'mu2.json')
        loaded = ReciprocityTable.load(tmp_path / 'mu2.json')
        assert loaded.values == table.values
        assert loaded.counts == table.counts


class TestReciprocity:

    def test_derived_table_predicts_fresh_lifts(self, cubic):
        table = derive_mu2_table(cubic, cells=8, seed=3)
        assert table.cell_count > 0
        assert table.min_samples >= 20
        rng = np.random.default_rng(4)
        keys = sorted(table.values)
        checked = 0
        for _ in range(400):
            ka, kb = keys[int(rng.integers(len(keys)))]
            a = Modulus8Class.from_key(ka).lift() + FieldElement.of(rng.integers(-2, 2, size=3)).scale(8)
            b = Modulus8Class.from_key(kb).lift() + FieldElement.of(rng.integers(-2, 2, size=3)).scale(8)
            if not admissible_pair(a, b, cubic):
                continue
            assert check_reciprocity(a, b, table, cubic)
            checked += 1
        assert checked > 20

    def test_lifts_keep_class_and_spread(self, cubic):
        rng = np.random.default_rng(7)
        base = random_odd_class(cubic, rng)
        shifts = set()
        for _ in range(300):
            lift = random_lift(base, cubic, rng)
            assert Modulus8Class.of(lift).key == Modulus8Class.of(base).key
            shifts.update((x - y) // 8 for x, y in zip(lift.coords, base.coords))
        assert shifts == {-2, -1, 0, 1, 2}

    def test_cell_sample_uses_distinct_pairs(self, cubic):
        rng = np.random.default_rng(11)
        a0, b0 = random_odd_class(cubic, rng), random_odd_class(cubic, rng)
        sample = sample_cell(a0, b0, cubic, rng, lambda a, b: reciprocity_defect(a, b, cubic))
        assert sample is not None
        assert sample.key == cell_key(a0, b0)
        assert len(sample.values) == 20
        assert len(set(sample.pairs)) == len(sample.pairs)
        assert len(set(sample.values)) == 1

    def test_short_cell_is_dropped(self, cubic):
        rng = np.random.default_rng(11)
        a0, b0 = random_odd_class(cubic, rng), random_odd_class(cubic, rng)
        assert sample_cell(a0, b0, cubic, rng, lambda a, b: 1, max_attempts=10) is None

    def test_too_few_samples_rejected(self, cubic):
        with pytest.raises(ConfigError):
            derive_mu2_table(cubic, samples=5)

    def test_unpopulated_cell(self, cubic):
        table = ReciprocityTable(name='empty')
        with pytest.raises(UnpopulatedCell):
            check_reciprocity(FieldElement.of([1, 0, 0]), FieldElement.of([3, 0, 0]), table, cubic)
