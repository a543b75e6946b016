"""Tests for experiment statistics."""

import numpy as np
import pytest

from src.experiments.statistics import (
    StatisticsCalculator, all_patterns, compare_to_expected, pattern_label
)


@pytest.fixture
def calculator():
    return StatisticsCalculator(confidence=0.95)


def test_patterns():
    assert all_patterns(2) == [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    assert pattern_label((1, -1, 1)) == '+-+'


def test_pattern_statistics_counts_degenerate_separately(calculator):
    stats = calculator.pattern_statistics([(1,), (1,), (-1,), (0,)], 1)
    assert stats.total == 3
    assert stats.degenerate == 1
    assert stats.frequency((1,)) == pytest.approx(2 / 3)
    assert stats.max_deviation == pytest.approx(2 / 3 - 1 / 2)
    assert sum(row['count'] for row in stats.rows()) == 3


def test_uniform_sample_passes_chi_square(calculator, rng):
    patterns = [tuple(int(x) for x in row) for row in rng.choice([1, -1], size=(4000, 2))]
    stats = calculator.pattern_statistics(patterns, 2)
    assert stats.p_value > 0.001
    assert stats.max_deviation < 0.03


def test_empty_patterns(calculator):
    stats = calculator.pattern_statistics([], 3)
    assert stats.total == 0
    assert stats.p_value == 1.0


def test_wilson_interval(calculator):
    estimate = calculator.proportion(50, 100)
    low, high = estimate.interval
    assert estimate.value == 0.5
    assert low + high == pytest.approx(1.0)
    assert 0.39 < low < 0.41
    assert calculator.proportion(0, 0).value == 0.0


def test_compare_to_expected(calculator):
    result = compare_to_expected(calculator.proportion(260, 1000), 0.25, 0.02)
    assert result['within_tolerance']
    assert result['expected_in_ci']


def test_fit_exponent(calculator):
    xs = np.array([10.0, 100.0, 1000.0, 10000.0])
    assert calculator.fit_exponent(xs, xs ** 0.5) == pytest.approx(0.5)
    assert calculator.fit_exponent([1.0], [1.0]) is None


def test_decreasing(calculator):
    assert calculator.decreasing([3.0, -2.0, 1.0])
    assert not calculator.decreasing([1.0, 2.0])
