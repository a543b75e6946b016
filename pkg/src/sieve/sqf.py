"""
Squarefree / squarefull splitting of integers relative to a modulus.
"""

from dataclasses import dataclass
from math import prod
from typing import Dict

from src.symbols.residue import factor_integer


@dataclass(frozen=True)
class SqfFactorization:
    """n = q' g' r' with q' squarefree, g' squarefull, both coprime to mF, and rad(r') | mF."""

    n: int
    q: int
    g: int
    r: int

    def to_dict(self) -> Dict:
        return {'n': self.n, 'q': self.q, 'g': self.g, 'r': self.r}


def sqf(n: int, mF: int) -> SqfFactorization:
    """
    Split n into its mF-part, then the rest by exponent.

    Raises:
        FactoringBudgetExceeded: n could not be factored
    """
    if n < 1 or mF < 1:
        raise ValueError(f"sqf needs positive arguments, got n = {n}, mF = {mF}")
    if n == 1:
        return SqfFactorization(1, 1, 1, 1)
    factors = factor_integer(n)
    r = prod(p ** e for p, e in factors.items() if mF % p == 0)
    q = prod(p for p, e in factors.items() if mF % p and e == 1)
    g = prod(p ** e for p, e in factors.items() if mF % p and e > 1)
    return SqfFactorization(n, q, g, r)


def sqf_part(n: int, mF: int) -> int:
    return sqf(n, mF).q
