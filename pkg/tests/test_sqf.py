"""Tests for the squarefree / squarefull split."""

from math import gcd

import pytest
from sympy import factorint, primefactors

from src.sieve.sqf import SqfFactorization, sqf, sqf_part


def test_examples():
    assert sqf(360, 1) == SqfFactorization(360, 5, 72, 1)
    assert sqf(360, 2) == SqfFactorization(360, 5, 9, 8)
    assert sqf(1, 30) == SqfFactorization(1, 1, 1, 1)


def test_parts():
    for n in range(1, 400):
        for mF in (1, 2, 6, 30):
            parts = sqf(n, mF)
            assert parts.q * parts.g * parts.r == n
            assert all(mF % p == 0 for p in primefactors(parts.r))
            assert gcd(parts.q * parts.g, mF) == 1
            assert all(e == 1 for e in factorint(parts.q).values())
            assert all(e > 1 for e in factorint(parts.g).values())
            assert sqf_part(n, mF) == parts.q


def test_rejects_non_positive():
    with pytest.raises(ValueError):
        sqf(0, 1)
    with pytest.raises(ValueError):
        sqf(5, 0)
