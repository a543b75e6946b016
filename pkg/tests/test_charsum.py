"""Tests for the short character-sum scan."""

from math import log

import pytest

from src.errors import BadModulus
from src.sieve.charsum import (
    CharSumScanConfig, character_table, charsum_scan, complete_sum, naive_window_max,
    odd_squarefree, scan_moduli
)
from src.symbols.rational import jacobi


def test_fifteen_with_square_root_window():
    config = CharSumScanConfig(q=15, n=2)
    assert config.N == 3
    report = charsum_scan(config)
    assert report.max == 2
    assert report.exponent == pytest.approx(log(2) / log(15))
    assert report.to_dict()['N'] == 3


def test_character_table_matches_jacobi():
    for q in (15, 21, 105, 231):
        table = character_table(q)
        assert [int(x) for x in table] == [jacobi(m, q) for m in range(q)]
        assert complete_sum(q) == 0


def test_prefix_sums_match_naive_scan():
    for q in odd_squarefree(3, 200):
        for n, k, l in ((2, 1, 0), (3, 1, 0), (2, 4, 1)):
            config = CharSumScanConfig(q=q, n=n, k=k, l=l)
            assert charsum_scan(config).max == naive_window_max(config), (q, n, k, l)


@pytest.mark.parametrize('q, k', [(9, 1), (10, 1), (1, 1), (15, 15), (15, 30)])
def test_bad_modulus(q, k):
    with pytest.raises(BadModulus):
        CharSumScanConfig(q=q, k=k)


def test_odd_squarefree():
    assert odd_squarefree(3, 30) == [3, 5, 7, 11, 13, 15, 17, 19, 21, 23, 29]


def test_scan_skips_moduli_dividing_step():
    summary = scan_moduli([3, 5, 7], n=2, k=3)
    assert [r.q for r in summary.reports] == [5, 7]
    assert summary.max_exponent >= summary.median_exponent


def test_max_never_exceeds_window():
    for q in odd_squarefree(3, 300):
        report = charsum_scan(CharSumScanConfig(q=q))
        assert report.max <= report.N
