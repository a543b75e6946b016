"""Tests for the lattice probes and the type I / type II spin sums."""

import pytest

from src.algebra.elements import FieldElement, apply_automorphism, norm
from src.errors import CeilingExceeded, ConfigError
from src.primes.factorization import factor_rational_prime
from src.primes.ideals import IdealLattice, ideal_product
from src.sieve.lattice import (
    SieveLatticeProbe, decompose_a_beta, difference_image_basis, forms_proportional, gcd_of_norms,
    gcd_statistics, lattice_count_probe, squarefull_bound_exponents, spin_identity_holds
)
from src.sieve.sums import (
    check_modulus_ideal, max_abs_s, principal_ideals_up_to, type1_sum, type2_sum, unimodular_sequence
)
from src.spin.config import SpinConfig
from src.spin.spins import s_from_generator


@pytest.fixture(scope='module')
def cubic_config(cubic):
    return SpinConfig.build([1], cubic)


class TestLatticeProbes:

    def test_decomposition(self, element):
        a, beta = decompose_a_beta(element(4, -1, 2))
        assert a == 4
        assert beta == element(0, -1, 2)

    def test_spin_identity(self, cubic, quintic, odd_unramified):
        for _ in range(10):
            assert spin_identity_holds(odd_unramified(cubic), 1, cubic)
            assert spin_identity_holds(odd_unramified(quintic), 2, quintic)

    def test_difference_image_rank(self, cubic, quintic, governing_e):
        assert difference_image_basis(1, cubic).shape == (3, 2)
        assert difference_image_basis(1, quintic).shape == (5, 4)
        orders = [governing_e.automorphism_order(i) for i in range(8)]
        i = orders.index(2)
        assert difference_image_basis(i, governing_e).shape == (8, 4)

    def test_unit_ideal_counts_whole_box(self, cubic):
        probe = SieveLatticeProbe(sigma=1, ideal=IdealLattice.unit(3), spec=cubic)
        count = lattice_count_probe(probe, 1000.0)
        assert count.radius == 10
        assert count.count == count.box_points == 21 ** 2
        assert count.first_minimum == 1.0
        assert count.minimum_is_exact

    def test_prime_ideal_thins_the_box(self, cubic):
        P = factor_rational_prime(19, cubic)[0]
        probe = SieveLatticeProbe(sigma=1, ideal=P.lattice, spec=cubic)
        count = lattice_count_probe(probe, 10 ** 5)
        assert 1 <= count.count < count.box_points
        assert count.bound == pytest.approx((10 ** 5 / 19) ** (2 / 3))

    def test_probe_ceiling(self, cubic):
        probe = SieveLatticeProbe(sigma=1, ideal=IdealLattice.unit(3), spec=cubic)
        with pytest.raises(CeilingExceeded):
            lattice_count_probe(probe, 10 ** 12, ceiling=100)

    def test_gcd_statistics(self, quintic):
        stats = gcd_statistics(1000, [1, 10, 100], 1, 2, quintic)
        counts = [stats.counts[z] for z in (1, 10, 100)]
        assert counts == sorted(counts, reverse=True)
        assert counts[0] <= stats.box_points
        assert [row['Z'] for row in stats.rows()] == [1, 10, 100]

    def test_gcd_statistics_needs_distinct_automorphisms(self, quintic):
        with pytest.raises(ValueError):
            gcd_statistics(100, [1], 1, 1, quintic)

    def test_cubic_forms_are_proportional(self, cubic):
        # sigma_2 = sigma_1^-1 so the two difference norms differ by a sign
        assert forms_proportional(1, 2, cubic)
        beta = FieldElement.of([0, 2, -1])
        f1 = norm(apply_automorphism(1, beta, cubic) - beta, cubic)
        assert gcd_of_norms(beta, 1, 2, cubic) == abs(f1)

    def test_squarefull_bound_exponents(self):
        assert squarefull_bound_exponents(3) == pytest.approx((2 / 3, -1 / 3))
        assert squarefull_bound_exponents(2) == pytest.approx((0.5, 0.0))


class TestPrincipalIdeals:

    def test_routes_agree(self, cubic):
        by_ideals = principal_ideals_up_to(300, cubic, method='ideals')
        by_box = principal_ideals_up_to(300, cubic, method='box')
        assert [a.key for a in by_ideals] == [a.key for a in by_box]
        assert by_ideals[0].key == '1'

    def test_generators_have_the_right_norm(self, quintic):
        for a in principal_ideals_up_to(200, quintic, include_unit=False):
            assert abs(norm(a.generator, quintic)) == a.norm
            assert a.norm % 2 == 1 and a.norm % 11 != 0

    def test_unknown_method(self, cubic):
        with pytest.raises(ConfigError):
            principal_ideals_up_to(100, cubic, method='sieve')


class TestType1:

    def test_sum_matches_direct_evaluation(self, cubic, cubic_config):
        result = type1_sum(600, None, cubic_config, cubic, checkpoints=[200, 600])
        ideals = principal_ideals_up_to(600, cubic, coprime_to=cubic_config.F.F)
        expected = sum(s_from_generator(a.generator, a.factors, cubic_config, cubic) for a in ideals)
        assert result.total == expected
        assert [p.checkpoint for p in result.points] == [200, 600]
        assert result.points[-1].count == len(ideals)
        assert abs(result.total) <= result.points[-1].bound

    def test_modulus_restricts_to_multiples(self, cubic, cubic_config):
        P = factor_rational_prime(37, cubic)[0]
        result = type1_sum(3000, P.lattice, cubic_config, cubic, checkpoints=[3000])
        assert 1 <= result.points[-1].count < 3000 // 37

    def test_breakdown_adds_up(self, cubic, cubic_config):
        result = type1_sum(800, None, cubic_config, cubic, breakdown_modulus=4)
        assert sum(result.breakdown.values()) == result.total

    def test_modulus_must_avoid_conjugates(self, cubic, cubic_config):
        ideals = factor_rational_prime(37, cubic)
        m = ideal_product(ideals[0].lattice, ideals[1].lattice, cubic)
        with pytest.raises(ConfigError):
            check_modulus_ideal(m, cubic_config, cubic)
        assert check_modulus_ideal(IdealLattice.unit(3), cubic_config, cubic) == []

    def test_ceiling(self, cubic, cubic_config):
        with pytest.raises(CeilingExceeded):
            type1_sum(10 ** 12, None, cubic_config, cubic)

    def test_max_abs_s(self, cubic, governing_e):
        assert max_abs_s(cubic) == 1
        assert max_abs_s(governing_e) > 1


class TestType2:

    def test_seeded_and_bounded(self, cubic, cubic_config):
        first = type2_sum(40, 40, None, None, cubic_config, cubic, seed=7)
        again = type2_sum(40, 40, None, None, cubic_config, cubic, seed=7)
        assert first.value == again.value
        assert first.pairs > 0
        assert 0 <= first.normalized <= 1

    def test_indicator_coefficients(self, cubic, cubic_config):
        ideals = principal_ideals_up_to(40, cubic, coprime_to=cubic_config.F.F)
        only_unit = {'1': 1}
        result = type2_sum(40, 40, only_unit, only_unit, cubic_config, cubic)
        assert result.value == 1
        assert result.pairs == len(ideals) ** 2

    def test_unimodular_sequence(self):
        values = unimodular_sequence(['a', 'b', 'c'], seed=3)
        assert all(abs(abs(v) - 1) < 1e-12 for v in values.values())
        assert values == unimodular_sequence(['a', 'b', 'c'], seed=3)
