"""Tests for field arithmetic, presets and validation."""

from dataclasses import replace

import pytest
from sympy import factorint

from src.algebra.constants import compute_bigF
from src.algebra.elements import (
    FieldElement, Modulus8Class, apply_automorphism, characteristic_polynomial, element_divide,
    element_inverse, element_mul, element_pow, norm, trace
)
from src.algebra.embeddings import element_sqrt, is_totally_positive, real_signs
from src.algebra.field_spec import FieldSpec, load_field_spec
from src.algebra.presentation import build_field_spec
from src.algebra.presets import load_preset, resolve_field
from src.algebra.units import check_torsion_order, torsion_elements
from src.algebra.validation import check_unit_condition, discriminant_of_basis, validate_field_spec
from src.errors import ConfigError, FNotSquarefree, StructuralFailure, UnitConditionFailed

GOLDEN = {
    'name': 'golden',
    'generators': ['s'],
    'relations': ['s**2 - 5'],
    'integral_basis': ['1', '(1 + s)/2'],
    'automorphisms': [['s'], ['-s']],
    'units': ['(1 + s)/2'],
    'torsion': {'order': 2, 'generator': '-1'},
    'signature': [2, 0],
    'class_number': 1,
    'discriminant': '5',
    'unit_condition': True,
}


class TestCubicArithmetic:

    def test_defining_relation(self, cubic, element):
        t, t2 = element(0, 1, 0), element(0, 0, 1)
        assert element_mul(t, t2, cubic) == element(1, 3, 0)
        assert element_pow(t, 3, cubic) == element(1, 3, 0)

    def test_norm_and_trace(self, cubic, element):
        assert norm(element(0, 1, 0), cubic) == 1
        assert norm(element(2, 0, 0), cubic) == 8
        assert trace(element(0, 1, 0), cubic) == 0
        assert trace(element(0, 0, 1), cubic) == 6
        assert characteristic_polynomial(element(0, 1, 0), cubic) == [1, 0, -3, -1]

    def test_norm_is_multiplicative(self, cubic, rng):
        for _ in range(20):
            a = FieldElement.of(rng.integers(-9, 10, size=3))
            b = FieldElement.of(rng.integers(-9, 10, size=3))
            assert norm(element_mul(a, b, cubic), cubic) == norm(a, cubic) * norm(b, cubic)

    def test_division_and_inverse(self, cubic, element):
        t, t2 = element(0, 1, 0), element(0, 0, 1)
        assert element_divide(element_mul(t, t2, cubic), t, cubic) == t2
        assert element_inverse(t, cubic) == element(-3, 0, 1)
        assert element_divide(element(1, 0, 0), element(2, 0, 0), cubic) is None
        with pytest.raises(ValueError):
            element_inverse(element(3, 0, 0), cubic)

    def test_automorphisms(self, cubic, element):
        t = element(0, 1, 0)
        assert apply_automorphism(1, t, cubic) == element(2, 0, -1)
        assert [cubic.automorphism_order(i) for i in range(3)] == [1, 3, 3]
        assert cubic.inverse_index(1) == 2
        assert cubic.power_index(1, 2) == 2
        assert cubic.power_index(1, -1) == 2
        a = element(3, -1, 4)
        assert apply_automorphism(1, apply_automorphism(2, a, cubic), cubic) == a

    def test_automorphisms_are_ring_maps(self, cubic, rng):
        for _ in range(10):
            a = FieldElement.of(rng.integers(-5, 6, size=3))
            b = FieldElement.of(rng.integers(-5, 6, size=3))
            left = apply_automorphism(1, element_mul(a, b, cubic), cubic)
            right = element_mul(apply_automorphism(1, a, cubic), apply_automorphism(1, b, cubic), cubic)
            assert left == right

    def test_modulus8_key(self, element):
        cell = Modulus8Class.of(element(9, -1, 16))
        assert cell.key == '170'
        assert Modulus8Class.from_key(cell.key) == cell


class TestEmbeddings:

    def test_signs(self, cubic, element):
        assert real_signs(element(-1, 0, 0), cubic) == (-1, -1, -1)
        assert is_totally_positive(element(0, 0, 1), cubic)
        assert real_signs(element(1, 0, 0), load_preset('governing_e')) == ()

    def test_square_roots(self, cubic, element):
        t = element(0, 1, 0)
        root = element_sqrt(element(0, 0, 1), cubic)
        assert root in (t, -t)
        assert element_sqrt(t, cubic) is None


class TestPresets:

    def test_presets_validate(self, cubic, quintic, governing_e):
        for spec in (cubic, quintic, governing_e):
            assert validate_field_spec(spec).passed
            assert discriminant_of_basis(spec) == spec.discriminant

    def test_shapes(self, cubic, quintic, governing_e):
        assert (cubic.degree, cubic.discriminant, cubic.signature) == (3, 81, (3, 0))
        assert (quintic.degree, quintic.discriminant) == (5, 14641)
        assert (governing_e.degree, governing_e.signature, governing_e.torsion_order) == (8, (0, 4), 8)

    def test_unit_condition(self, cubic, quintic):
        assert check_unit_condition(cubic)[0]
        assert check_unit_condition(quintic)[0]

    def test_torsion(self, governing_e):
        assert check_torsion_order(governing_e)
        assert len(set(torsion_elements(governing_e))) == 8

    @pytest.mark.parametrize('order', [4, 16])
    def test_wrong_torsion_order(self, governing_e, order):
        assert not check_torsion_order(replace(governing_e, torsion_order=order))

    def test_order_four_elements_of_E(self, governing_e):
        orders = sorted(governing_e.automorphism_order(i) for i in range(8))
        assert orders == [1, 2, 2, 2, 2, 2, 4, 4]

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            load_preset('septic')
        with pytest.raises(ConfigError):
            resolve_field('cubic9', spec_path=__file__)

    def test_explicit_layout_reloads(self, cubic, tmp_path):
        path = tmp_path / 'cubic.json'
        cubic.save(path)
        reloaded = load_field_spec(path)
        assert reloaded.to_json() == cubic.to_json()

    def test_big_f(self, cubic):
        F = compute_bigF(cubic)
        assert F.two_power == 2 ** 5
        assert F.abs_discriminant == 81
        assert F.f % 2 == 1
        assert all(e == 1 for e in factorint(F.f).values())
        with pytest.raises(FNotSquarefree):
            compute_bigF(load_preset('cubic9', with_class_reps=False))


class TestPresentation:

    def test_golden_field(self):
        spec = build_field_spec(GOLDEN)
        assert spec.mult_table[1][1] == (1, 1)
        assert spec.automorphisms[1] == ((1, 1), (0, -1))
        assert spec.defining_polynomial == (1, -1, -1)

    def test_non_monic_relation(self):
        with pytest.raises(ConfigError):
            build_field_spec({**GOLDEN, 'relations': ['2*s**2 - 5']})

    def test_missing_key(self):
        data = dict(GOLDEN)
        del data['units']
        with pytest.raises(ConfigError):
            build_field_spec(data)

    def test_unit_condition_violation(self):
        data = {**GOLDEN, 'name': 'sqrt3', 'relations': ['s**2 - 3'], 'integral_basis': ['1', 's'],
                'units': ['2 + s'], 'discriminant': '12'}
        with pytest.raises(UnitConditionFailed):
            build_field_spec(data)

    def test_wrong_discriminant(self, cubic):
        with pytest.raises(StructuralFailure):
            validate_field_spec(replace(cubic, discriminant=80))

    def test_malformed_explicit_layout(self):
        with pytest.raises(ConfigError):
            FieldSpec.from_json({'degree': 3})
