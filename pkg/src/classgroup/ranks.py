"""
Class numbers h(-4p) and 2-power ranks.

For p = 1 mod 4 the 2-Sylow subgroup of Cl(-4p) is cyclic (genus theory gives
2-rank one), so rk_{2^k} is 1 exactly when 2^k divides h. Class numbers for many
primes at once are counted form by form in numpy: a reduced form of discriminant
-4p is (a, 2b', c) with ac = b'^2 + p, |2b'| <= a <= c.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import ClassVar, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime, primerange

from src.algebra.field_spec import FieldSpec
from src.classgroup.forms import QuadForm, class_number, compose, form_pow, reduced_forms
from src.errors import StructuralFailure, WrongResidueClass
from src.primes.factorization import splits_completely

logger = logging.getLogger(__name__)

MAX_RANK_EXPONENT = 4


def _check_prime(p: int):
    if not isprime(p) or p % 4 != 1:
        raise WrongResidueClass(f"{p} is not a prime congruent to 1 mod 4")


def primes_1_mod_4(X: int, start: int = 5) -> np.ndarray:
    return np.array([p for p in primerange(start, X + 1) if p % 4 == 1], dtype=np.int64)


def class_numbers_minus_4p(primes: Sequence[int]) -> Dict[int, int]:
    """
    h(-4p) for every p in primes (each p = 1 mod 4).

    For each a the admissible b' in [0, a/2] are tabulated by the residue -b'^2 mod a
    with weight 2 (b' and -b') or 1 (b' = 0 or 2b' = a). Primes with p > a^2 read the
    table directly since then c > a. Primes with 3a^2/4 <= p < a^2 need c >= a, that
    is p >= a^2 - b'^2, with weight 1 on equality.
    """
    P = np.array(sorted(set(int(p) for p in primes)), dtype=np.int64)
    if P.size == 0:
        return {}
    if np.any(P % 4 != 1):
        bad = int(P[P % 4 != 1][0])
        raise WrongResidueClass(f"{bad} is not congruent to 1 mod 4")
    h = np.zeros(P.size, dtype=np.int64)
    a_max = isqrt(4 * int(P[-1]) // 3) + 1
    for a in range(1, a_max + 1):
        bp = np.arange(0, a // 2 + 1, dtype=np.int64)
        weights = np.where((bp == 0) | (2 * bp == a), 1, 2)
        residues = (-(bp * bp)) % a
        table = np.bincount(residues, weights=weights, minlength=a).astype(np.int64)

        above = int(np.searchsorted(P, a * a, side='right'))
        if above < P.size:
            h[above:] += table[P[above:] % a]

        below = int(np.searchsorted(P, (3 * a * a) // 4, side='left'))
        if below >= above:
            continue
        window = P[below:above]
        window_res = window % a
        order = np.lexsort((window, window_res))
        sorted_res = window_res[order]
        sorted_p = window[order]
        for b, w, r in zip(bp.tolist(), weights.tolist(), residues.tolist()):
            lo = int(np.searchsorted(sorted_res, r, side='left'))
            hi = int(np.searchsorted(sorted_res, r, side='right'))
            if lo == hi:
                continue
            group = sorted_p[lo:hi]
            threshold = a * a - b * b
            start = lo + int(np.searchsorted(group, threshold, side='left'))
            if start >= hi:
                continue
            h[below + order[start:hi]] += w
            if w > 1:
                equal_end = lo + int(np.searchsorted(group, threshold, side='right'))
                if equal_end > start:
                    h[below + order[start:equal_end]] -= w - 1
    return dict(zip(P.tolist(), h.tolist()))


def two_part(h: int) -> int:
    return h & -h


def rank_from_h(h: int, k: int) -> int:
    return int(h % (2 ** k) == 0)


@lru_cache(maxsize=65536)
def class_number_minus_4p(p: int) -> int:
    _check_prime(p)
    return class_number(-4 * p)


def two_sylow_generator(p: int, h: Optional[int] = None) -> QuadForm:
    """
    A form whose order is the full 2-part of h(-4p).

    Every reduced form is raised to the odd part of h, which lands in the 2-Sylow
    subgroup; the one of largest order is returned.

    Raises:
        StructuralFailure: no form of order two_part(h) exists (2-Sylow not cyclic)
    """
    D = -4 * p
    h = h or class_number_minus_4p(p)
    target = two_part(h)
    odd = h // target
    identity = QuadForm.identity(D)
    best, best_order = identity, 1
    for f in reduced_forms(D):
        g = form_pow(f, odd)
        order, current = 1, g
        while current != identity:
            current = compose(current, current)
            order *= 2
            if order > target:
                raise StructuralFailure("2-Sylow order", f"{g} has order above {target} for p = {p}")
        if order > best_order:
            best, best_order = g, order
        if best_order == target:
            return best
    raise StructuralFailure("2-Sylow cyclic", f"largest 2-power order {best_order} < {target} for p = {p}")


def two_power_rank(p: int, k: int, verify: bool = False) -> int:
    """
    rk_{2^k} Cl(-4p) for p = 1 mod 4, k = 1..4.

    Args:
        p: Prime congruent to 1 mod 4
        k: Exponent
        verify: Also exhibit a form of order two_part(h), confirming cyclicity

    Raises:
        WrongResidueClass: p not a prime = 1 mod 4
    """
    _check_prime(p)
    if not 1 <= k <= MAX_RANK_EXPONENT:
        raise ValueError(f"k must be in 1..{MAX_RANK_EXPONENT}, got {k}")
    h = class_number_minus_4p(p)
    if verify:
        two_sylow_generator(p, h)
    return rank_from_h(h, k)


@dataclass
class ClassData:
    """Class number and 2-power ranks of Q(sqrt(-4p))."""

    p: int
    h: int
    split_in_E: Optional[bool] = None

    COLUMNS: ClassVar[List[str]] = ['p', 'h', 'two_part', 'rk2', 'rk4', 'rk8', 'rk16', 'split_in_E']

    @property
    def D(self) -> int:
        return -4 * self.p

    @property
    def two_part(self) -> int:
        return two_part(self.h)

    def rank(self, k: int) -> int:
        return rank_from_h(self.h, k)

    @property
    def rk2(self) -> int:
        return self.rank(1)

    @property
    def rk4(self) -> int:
        return self.rank(2)

    @property
    def rk8(self) -> int:
        return self.rank(3)

    @property
    def rk16(self) -> int:
        return self.rank(4)

    def to_dict(self) -> Dict:
        return {
            'p': self.p,
            'h': self.h,
            'two_part': self.two_part,
            'rk2': self.rk2,
            'rk4': self.rk4,
            'rk8': self.rk8,
            'rk16': self.rk16,
            'split_in_E': self.split_in_E,
        }


def class_data_batch(primes: Iterable[int], spec: Optional[FieldSpec] = None) -> List[ClassData]:
    """ClassData for each prime, with split_in_E filled when a governing field is given."""
    numbers = class_numbers_minus_4p(list(primes))
    out = []
    for p, h in numbers.items():
        split = splits_completely(p, spec) if spec is not None else None
        out.append(ClassData(p=p, h=h, split_in_E=split))
    logger.info(f"Computed class data for {len(out)} primes")
    return out


def eight_rank_governing_check(p: int, spec: FieldSpec) -> Tuple[bool, bool]:
    """
    (p splits completely in E, 8 | h(-4p)).

    Raises:
        WrongResidueClass: p not a prime = 1 mod 4
        RamifiedPrime: p ramified in E
    """
    _check_prime(p)
    return splits_completely(p, spec), two_power_rank(p, 3) == 1
