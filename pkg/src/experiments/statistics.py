"""
Statistics for experiment reports.

Pattern frequencies with a chi-square test against the uniform law, proportion
confidence intervals, and log-log exponent fits.
"""

from dataclasses import dataclass, field
from typing import ClassVar, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats


@dataclass
class PatternStatistics:
    """Frequencies of sign patterns against the uniform 1/2^t law."""

    t: int
    total: int
    counts: Dict[Tuple[int, ...], int]
    chi_square: float
    p_value: float
    # records with a zero spin, left out of the pattern counts
    degenerate: int = 0

    ROW_COLUMNS: ClassVar[List[str]] = ['pattern', 'count', 'frequency', 'expected']

    @property
    def expected(self) -> float:
        return 1.0 / 2 ** self.t

    def frequency(self, pattern: Tuple[int, ...]) -> float:
        return self.counts.get(pattern, 0) / self.total if self.total else 0.0

    @property
    def max_deviation(self) -> float:
        if not self.total:
            return 0.0
        return max(abs(self.frequency(p) - self.expected) for p in all_patterns(self.t))

    def to_dict(self):
        """Convert to dictionary for display."""
        return {
            't': self.t,
            'total': self.total,
            'degenerate': self.degenerate,
            'chi_square': f"{self.chi_square:.3f}",
            'p_value': f"{self.p_value:.4f}",
            'max_deviation': f"{self.max_deviation:.4f}",
        }

    def rows(self) -> List[Dict]:
        return [
            {
                'pattern': pattern_label(p),
                'count': self.counts.get(p, 0),
                'frequency': self.frequency(p),
                'expected': self.expected,
            }
            for p in all_patterns(self.t)
        ]


@dataclass
class ProportionEstimate:
    """Share of successes with a Wilson score interval."""

    successes: int
    trials: int
    confidence: float = 0.95
    interval: Tuple[float, float] = field(default=(0.0, 1.0))

    COLUMNS: ClassVar[List[str]] = ['successes', 'trials', 'frequency', 'ci_low', 'ci_high']

    @property
    def value(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    def to_dict(self):
        return {
            'successes': self.successes,
            'trials': self.trials,
            'frequency': self.value,
            'ci_low': self.interval[0],
            'ci_high': self.interval[1],
        }


def all_patterns(t: int) -> List[Tuple[int, ...]]:
    patterns = [()]
    for _ in range(t):
        patterns = [p + (s,) for p in patterns for s in (1, -1)]
    return patterns


def pattern_label(pattern: Tuple[int, ...]) -> str:
    return ''.join('+' if s > 0 else '-' for s in pattern)


class StatisticsCalculator:
    """Calculate frequency tests and fits from experiment data."""

    def __init__(self, confidence: float = 0.95):
        """
        Initialize calculator.

        Args:
            confidence: Two-sided confidence level for proportion intervals
        """
        self.confidence = confidence

    def pattern_statistics(self, patterns: Sequence[Tuple[int, ...]], t: int) -> PatternStatistics:
        """
        Tally sign patterns and test them against the uniform law.

        Args:
            patterns: One tuple of +-1 (or 0 for a vanished spin) per record
            t: Pattern length

        Returns:
            PatternStatistics (degenerate patterns counted separately)
        """
        counts: Dict[Tuple[int, ...], int] = {p: 0 for p in all_patterns(t)}
        degenerate = 0
        for p in patterns:
            if p in counts:
                counts[p] += 1
            else:
                degenerate += 1
        total = sum(counts.values())
        if total == 0:
            return PatternStatistics(t=t, total=0, counts=counts, chi_square=0.0, p_value=1.0,
                                     degenerate=degenerate)
        observed = np.array([counts[p] for p in all_patterns(t)], dtype=float)
        chi2, p_value = stats.chisquare(observed)
        return PatternStatistics(t=t, total=total, counts=counts, chi_square=float(chi2),
                                 p_value=float(p_value), degenerate=degenerate)

    def proportion(self, successes: int, trials: int) -> ProportionEstimate:
        """
        Wilson score interval for a binomial proportion.

        Args:
            successes: Number of successes
            trials: Number of trials

        Returns:
            ProportionEstimate
        """
        estimate = ProportionEstimate(successes=successes, trials=trials, confidence=self.confidence)
        if trials == 0:
            return estimate
        z = stats.norm.ppf(0.5 + self.confidence / 2)
        phat = successes / trials
        denom = 1 + z * z / trials
        center = (phat + z * z / (2 * trials)) / denom
        half = z * np.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
        estimate.interval = (float(max(0.0, center - half)), float(min(1.0, center + half)))
        return estimate

    def fit_exponent(self, xs: Sequence[float], ys: Sequence[float]) -> Optional[float]:
        """
        Slope of log|y| against log x over points with y != 0.

        Returns:
            Fitted exponent, or None with fewer than two usable points
        """
        points = [(x, abs(y)) for x, y in zip(xs, ys) if x > 0 and y != 0]
        if len(points) < 2:
            return None
        log_x = np.log([p[0] for p in points])
        log_y = np.log([p[1] for p in points])
        return float(stats.linregress(log_x, log_y).slope)

    def decreasing(self, values: Sequence[float]) -> bool:
        """Whether |values| is non-increasing."""
        magnitudes = [abs(v) for v in values]
        return all(b <= a for a, b in zip(magnitudes, magnitudes[1:]))


def compare_to_expected(estimate: ProportionEstimate, expected: float, tolerance: float) -> dict:
    """
    Compare a measured proportion to its predicted value.

    Args:
        estimate: Measured proportion
        expected: Predicted value
        tolerance: Allowed absolute deviation

    Returns:
        Dictionary with comparison results
    """
    deviation = estimate.value - expected
    return {
        'expected': expected,
        'measured': estimate.value,
        'deviation': deviation,
        'within_tolerance': abs(deviation) <= tolerance,
        'expected_in_ci': estimate.interval[0] <= expected <= estimate.interval[1],
    }
