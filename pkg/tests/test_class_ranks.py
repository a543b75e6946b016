"""Tests for h(-4p) and the 2-power ranks."""

import pytest

from src.classgroup.forms import class_number
from src.classgroup.ranks import (
    ClassData, class_numbers_minus_4p, eight_rank_governing_check, primes_1_mod_4,
    rank_from_h, two_part, two_power_rank, two_sylow_generator
)
from src.errors import WrongResidueClass

KNOWN = {5: 2, 13: 2, 17: 4, 29: 6, 37: 2, 41: 8, 53: 6, 61: 6, 73: 4, 89: 12, 97: 4, 101: 14, 113: 8}


def test_batch_matches_known_values():
    assert class_numbers_minus_4p(list(KNOWN)) == KNOWN


def test_batch_matches_form_count():
    primes = primes_1_mod_4(3000).tolist()
    batch = class_numbers_minus_4p(primes)
    for p in primes[::7]:
        assert batch[p] == class_number(-4 * p)


def test_batch_rejects_wrong_class():
    with pytest.raises(WrongResidueClass):
        class_numbers_minus_4p([5, 7])
    assert class_numbers_minus_4p([]) == {}


def test_rank_helpers():
    assert two_part(12) == 4
    assert two_part(7) == 1
    assert rank_from_h(8, 3) == 1
    assert rank_from_h(12, 3) == 0


@pytest.mark.parametrize('p, ranks', [(5, (1, 0, 0, 0)), (17, (1, 1, 0, 0)), (41, (1, 1, 1, 0)), (113, (1, 1, 1, 0))])
def test_two_power_rank(p, ranks):
    assert tuple(two_power_rank(p, k, verify=True) for k in range(1, 5)) == ranks


def test_two_power_rank_rejects():
    with pytest.raises(WrongResidueClass):
        two_power_rank(7, 1)
    with pytest.raises(WrongResidueClass):
        two_power_rank(21, 1)
    with pytest.raises(ValueError):
        two_power_rank(5, 5)


def test_two_sylow_generator_has_full_order():
    for p in (17, 41, 89):
        g = two_sylow_generator(p)
        target = two_part(KNOWN[p])
        order, current = 1, g
        while current.a != 1:
            current = current * current
            order *= 2
        assert order == target


def test_class_data_invariants():
    primes = primes_1_mod_4(20000).tolist()
    for p, h in class_numbers_minus_4p(primes).items():
        d = ClassData(p=p, h=h)
        assert d.rk2 == 1
        assert d.rk4 >= d.rk8 >= d.rk16
        assert d.to_dict()['two_part'] == h & -h


def test_eight_rank_governed_by_E(governing_e):
    for p in primes_1_mod_4(1500).tolist():
        splits, eight = eight_rank_governing_check(p, governing_e)
        assert splits == eight, p
