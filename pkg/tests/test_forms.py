"""Tests for binary quadratic forms and class numbers."""

import pytest

from src.classgroup.forms import (
    QuadForm, class_number, compose, form_order, form_pow, generated_subgroup,
    is_fundamental, reduced_forms, small_generators
)
from src.errors import DiscriminantMismatch, NotFundamental


def test_identity_and_discriminant():
    assert QuadForm.identity(-20) == QuadForm(1, 0, 5)
    assert QuadForm.identity(-23) == QuadForm(1, 1, 6)
    assert QuadForm(2, 2, 3).discriminant == -20


def test_reduce():
    assert QuadForm(6, 2, 1).reduce() == QuadForm(1, 0, 5)
    f = QuadForm(3, 2, 5).reduce()
    assert f.is_reduced
    assert f.discriminant == -56
    assert QuadForm(2, -2, 3).reduce() == QuadForm(2, 2, 3)


def test_reduced_flags():
    assert QuadForm(2, 1, 3).is_reduced
    assert not QuadForm(2, -2, 3).is_reduced
    assert not QuadForm(3, 1, 2).is_reduced
    assert not QuadForm(3, -1, 3).is_reduced


@pytest.mark.parametrize('D, h', [(-3, 1), (-4, 1), (-20, 2), (-23, 3), (-47, 5), (-56, 4), (-84, 4), (-68, 4)])
def test_class_numbers(D, h):
    assert class_number(D) == h


def test_not_fundamental():
    assert not is_fundamental(-12)
    assert not is_fundamental(-16)
    assert is_fundamental(-8)
    with pytest.raises(NotFundamental):
        class_number(-12)


def test_composition_examples():
    identity = QuadForm.identity(-20)
    f = QuadForm(2, 2, 3)
    assert compose(f, f) == identity
    assert compose(f, identity) == f
    assert compose(QuadForm(3, 2, 5), QuadForm(3, 2, 5)) == QuadForm(2, 0, 7)


def test_discriminant_mismatch():
    with pytest.raises(DiscriminantMismatch):
        compose(QuadForm(2, 2, 3), QuadForm(1, 1, 6))


def test_cyclic_group_of_order_five():
    forms = list(reduced_forms(-47))
    assert len(forms) == 5
    generator = QuadForm(2, 1, 6)
    assert form_order(generator, 10) == 5
    assert {form_pow(generator, k) for k in range(5)} == set(forms)
    assert form_pow(generator, -1) == generator.inverse()
    assert compose(generator, generator.inverse()) == QuadForm.identity(-47)


def test_group_laws_on_minus_84():
    forms = list(reduced_forms(-84))
    identity = QuadForm.identity(-84)
    for f in forms:
        assert compose(f, f.inverse()) == identity
        for g in forms:
            assert compose(f, g) == compose(g, f)
            for k in forms:
                assert compose(compose(f, g), k) == compose(f, compose(g, k))
    # Cl(-84) is (Z/2)^2: every element squares to the identity
    assert all(compose(f, f) == identity for f in forms)


def test_generated_subgroup_is_whole_group():
    D = -4 * 41
    assert generated_subgroup(small_generators(D)) == set(reduced_forms(D))
    assert generated_subgroup([]) == set()
