"""Tests for prime decomposition and ideal arithmetic."""

from math import prod

import pytest

from src.algebra.elements import FieldElement, element_mul, norm
from src.errors import EvenPrime, RamifiedPrime
from src.primes.factorization import (
    conjugate_prime, count_roots, factor_ideal, factor_rational_prime, residue_map, split_orbit,
    split_prime_stream, splits_completely
)
from src.primes.ideals import (
    IdealLattice, ideal_of_element, ideal_power, ideal_product, lattice_is_ideal, prime_ideal_valuation
)


class TestDecomposition:

    @pytest.mark.parametrize('p, split', [(17, True), (19, True), (37, True), (5, False), (7, False)])
    def test_cubic_splitting_follows_p_mod_9(self, cubic, p, split):
        assert splits_completely(p, cubic) == split
        ideals = factor_rational_prime(p, cubic)
        assert len(ideals) == (3 if split else 1)
        assert prod(P.norm for P in ideals) == p ** 3

    def test_quintic_splitting_follows_p_mod_11(self, quintic):
        for p in (23, 43, 67, 89):
            assert splits_completely(p, quintic)
        assert factor_rational_prime(3, quintic)[0].f == 5

    def test_E_splitting(self, governing_e):
        # p = x^2 + 32 y^2
        assert splits_completely(41, governing_e)
        assert splits_completely(113, governing_e)
        assert not splits_completely(17, governing_e)
        assert {P.f for P in factor_rational_prime(17, governing_e)} == {2}

    def test_bad_primes(self, cubic, governing_e):
        with pytest.raises(EvenPrime):
            factor_rational_prime(2, cubic)
        with pytest.raises(RamifiedPrime):
            splits_completely(3, cubic)
        with pytest.raises(EvenPrime):
            splits_completely(2, governing_e)

    def test_count_roots(self, cubic):
        assert count_roots(19, cubic) == 3
        assert count_roots(5, cubic) == 0

    def test_ideals_are_prime_lattices(self, cubic, quintic):
        for spec, p in ((cubic, 5), (cubic, 19), (quintic, 23), (quintic, 3)):
            for P in factor_rational_prime(p, spec):
                assert lattice_is_ideal(P.lattice, spec)
                assert P.lattice.norm == P.norm
                assert P.contains(FieldElement.rational(p, spec.degree))


class TestResidueMaps:

    def test_ring_homomorphism(self, cubic, governing_e, rng):
        for spec, p in ((cubic, 19), (cubic, 5), (governing_e, 17), (governing_e, 41)):
            P = factor_rational_prime(p, spec)[0]
            for _ in range(10):
                a = FieldElement.of(rng.integers(-20, 21, size=spec.degree))
                b = FieldElement.of(rng.integers(-20, 21, size=spec.degree))
                assert residue_map(element_mul(a, b, spec), P) == residue_map(a, P) * residue_map(b, P)
                assert residue_map(a + b, P) == residue_map(a, P) + residue_map(b, P)

    def test_residue_vanishes_on_ideal(self, cubic):
        for P in factor_rational_prime(19, cubic):
            for b in P.lattice.basis():
                assert residue_map(b, P).is_zero()


class TestOrbits:

    def test_split_orbit_is_galois_orbit(self, cubic, quintic):
        for spec, p in ((cubic, 19), (quintic, 23)):
            orbit = split_orbit(p, spec)
            assert orbit[0].key == factor_rational_prime(p, spec)[0].key
            assert len({P.key for P in orbit}) == spec.degree
            for i, P in enumerate(orbit):
                assert conjugate_prime(orbit[0], i, spec).key == P.key

    def test_stream(self, cubic):
        primes = [p for p, _ in split_prime_stream(200, cubic)]
        assert primes == [p for p in (17, 19, 37, 53, 71, 73, 89, 107, 109, 127, 163, 179, 181, 197, 199)]


class TestIdealArithmetic:

    def test_product_norms(self, cubic):
        P, Q, _ = factor_rational_prime(19, cubic)
        product = ideal_product(P.lattice, Q.lattice, cubic)
        assert product.norm == 19 * 19
        assert ideal_power(P.lattice, 3, cubic).norm == 19 ** 3
        assert ideal_product(IdealLattice.unit(3), P.lattice, cubic) == P.lattice

    def test_principal_ideal(self, cubic, element):
        a = element(4, 1, 0)
        ideal = ideal_of_element(a, cubic)
        assert ideal.norm == abs(norm(a, cubic))
        assert ideal.contains(a)
        assert lattice_is_ideal(ideal, cubic)

    def test_factor_ideal(self, cubic, rng):
        for _ in range(10):
            a = FieldElement.of(rng.integers(-15, 16, size=3))
            n = abs(norm(a, cubic))
            if n == 0 or n % 2 == 0 or n % 3 == 0:
                continue
            factors = factor_ideal(ideal_of_element(a, cubic), cubic)
            assert prod(P.norm ** e for P, e in factors) == n

    def test_valuation(self, cubic):
        P = factor_rational_prime(19, cubic)[0]
        nineteen = FieldElement.rational(19, 3)
        assert prime_ideal_valuation(nineteen, P.lattice, cubic, 5) == 1
        square = FieldElement.rational(361, 3)
        assert prime_ideal_valuation(square, P.lattice, cubic, 5) == 2
