"""
Short real character sums.

For odd squarefree q > 1, chi_q(m) = (m / q) is a real non-principal character.
The scan reports, over all starting points M, the largest |sum of chi_q(m)| with
M < m <= M + N and m = l mod k, where N = floor(q^(1/n)), and the exponent
log(max) / log(q) to compare with the trivial 1/n.
"""

import logging
from dataclasses import dataclass
from math import gcd, log
from statistics import median
from typing import ClassVar, Dict, Iterable, List

import numpy as np
from sympy import factorint, primerange

from src.errors import BadModulus
from src.symbols.rational import jacobi

logger = logging.getLogger(__name__)


def _integer_root(q: int, n: int) -> int:
    N = int(round(q ** (1.0 / n)))
    while N ** n > q:
        N -= 1
    while (N + 1) ** n <= q:
        N += 1
    return N


@dataclass(frozen=True)
class CharSumScanConfig:
    """Modulus, degree parameter and progression of one scan."""

    q: int
    n: int = 3
    k: int = 1
    l: int = 0

    def __post_init__(self):
        if self.q <= 1 or self.q % 2 == 0:
            raise BadModulus(f"q = {self.q} must be odd and > 1")
        if any(e > 1 for e in factorint(self.q).values()):
            raise BadModulus(f"q = {self.q} is not squarefree")
        if self.k < 1 or self.k % self.q == 0:
            raise BadModulus(f"q = {self.q} divides the step k = {self.k}")
        if self.n < 1:
            raise BadModulus(f"degree parameter n = {self.n} must be positive")

    @property
    def N(self) -> int:
        return _integer_root(self.q, self.n)

    @property
    def period(self) -> int:
        return self.q * self.k // gcd(self.q, self.k)


@dataclass
class CharSumReport:
    q: int
    N: int
    k: int
    l: int
    max: int
    n: int = 3

    COLUMNS: ClassVar[List[str]] = ['q', 'N', 'k', 'l', 'max', 'exponent']

    @property
    def exponent(self) -> float:
        if self.max <= 0:
            return 0.0
        return log(self.max) / log(self.q)

    @property
    def gap(self) -> float:
        """1/n minus the measured exponent: the empirical saving over the trivial bound."""
        return 1.0 / self.n - self.exponent

    def to_dict(self) -> Dict:
        return {'q': self.q, 'N': self.N, 'k': self.k, 'l': self.l, 'max': self.max,
                'exponent': self.exponent}


def character_table(q: int) -> np.ndarray:
    """chi_q(m) for m = 0..q-1 as a product of Legendre tables."""
    m = np.arange(q, dtype=np.int64)
    table = np.ones(q, dtype=np.int64)
    for p in factorint(q):
        legendre = -np.ones(p, dtype=np.int64)
        legendre[(np.arange(p, dtype=np.int64) ** 2) % p] = 1
        legendre[0] = 0
        table *= legendre[m % p]
    return table


def complete_sum(q: int) -> int:
    return int(character_table(q).sum())


def charsum_scan(config: CharSumScanConfig) -> CharSumReport:
    """
    Exact maximum of the restricted short sum over all M, by prefix sums over one period.

    The summand chi_q(m) [m = l mod k] has period lcm(q, k), so M ranges over one period.
    """
    q, k, N = config.q, config.k, config.N
    L = config.period
    chi = character_table(q)
    m = np.arange(1, L + N + 1, dtype=np.int64)
    summand = chi[m % q] * ((m - config.l) % k == 0)
    prefix = np.concatenate(([0], np.cumsum(summand)))
    windows = prefix[N:N + L] - prefix[:L]
    result = CharSumReport(q=q, N=N, k=k, l=config.l % k, max=int(np.abs(windows).max()), n=config.n)
    logger.debug(f"charsum q = {q}, N = {N}: max {result.max}")
    return result


def naive_window_max(config: CharSumScanConfig) -> int:
    """The same maximum by direct summation of every window, with the Jacobi symbol."""
    q, k, N = config.q, config.k, config.N
    best = 0
    for M in range(config.period):
        total = sum(jacobi(m, q) for m in range(M + 1, M + N + 1) if (m - config.l) % k == 0)
        best = max(best, abs(total))
    return best


def odd_squarefree(lo: int, hi: int) -> List[int]:
    out = []
    for q in range(max(lo, 3) | 1, hi + 1, 2):
        if all(q % (p * p) for p in primerange(3, int(q ** 0.5) + 1)):
            out.append(q)
    return out


@dataclass
class ScanSummary:
    reports: List[CharSumReport]

    @property
    def median_exponent(self) -> float:
        return median(r.exponent for r in self.reports) if self.reports else 0.0

    @property
    def max_exponent(self) -> float:
        return max((r.exponent for r in self.reports), default=0.0)


def scan_moduli(moduli: Iterable[int], n: int = 3, k: int = 1, l: int = 0) -> ScanSummary:
    """charsum_scan over several moduli; moduli dividing k are skipped."""
    reports = []
    for q in moduli:
        if k % q == 0:
            continue
        reports.append(charsum_scan(CharSumScanConfig(q=q, n=n, k=k, l=l)))
    summary = ScanSummary(reports)
    logger.info(f"charsum scan: {len(reports)} moduli, median exponent {summary.median_exponent:.4f}")
    return summary
