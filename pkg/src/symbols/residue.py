"""
Quadratic residue symbols over O_K.

(a / P) is Euler's criterion in the residue field; (a / b) multiplies the prime
symbols over the factorization of the ideal (b), found by factoring |N(b)| and
decomposing each rational prime.
"""

import logging
from typing import Dict, List, Tuple

from sympy import factorint, isprime
from sympy.ntheory import pollard_rho

from src.algebra.elements import FieldElement, norm
from src.algebra.embeddings import real_signs
from src.algebra.field_spec import FieldSpec
from src.errors import EvenArgument, FactoringBudgetExceeded
from src.primes.factorization import PrimeIdealData, factor_rational_prime, residue_map
from src.primes.ideals import prime_ideal_valuation
from src.symbols.rational import legendre

logger = logging.getLogger(__name__)

TRIAL_LIMIT = 10 ** 6
RHO_ROUNDS = 30

Factorization = List[Tuple[PrimeIdealData, int]]


def factor_integer(n: int, trial_limit: int = TRIAL_LIMIT, rho_rounds: int = RHO_ROUNDS) -> Dict[int, int]:
    """
    Factor n > 0 by trial division up to trial_limit, then Pollard rho.

    Raises:
        FactoringBudgetExceeded: a composite cofactor survives rho_rounds attempts
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    pending = factorint(n, limit=trial_limit)
    result: Dict[int, int] = {}
    stack = list(pending.items())
    while stack:
        q, e = stack.pop()
        if q == 1:
            continue
        if isprime(q):
            result[q] = result.get(q, 0) + e
            continue
        divisor = None
        for seed in range(rho_rounds):
            divisor = pollard_rho(q, s=2 + seed, retries=1, seed=seed)
            if divisor:
                break
        if not divisor:
            raise FactoringBudgetExceeded(f"could not split {q} within {rho_rounds} rho rounds")
        stack.append((divisor, e))
        stack.append((q // divisor, e))
    return dict(sorted(result.items()))


def ideal_factorization(b: FieldElement, spec: FieldSpec) -> Factorization:
    """
    Prime ideal factorization of (b) for b with odd norm coprime to D_K.

    Returns:
        List of (prime ideal, exponent)
    """
    value = abs(norm(b, spec))
    if value == 0:
        raise ValueError("zero has no factorization")
    out: Factorization = []
    for p, e in factor_integer(value).items():
        remaining = e
        for P in factor_rational_prime(p, spec):
            if remaining <= 0:
                break
            k = _valuation(b, P, spec, remaining // P.f)
            if k:
                out.append((P, k))
                remaining -= k * P.f
        if remaining:
            raise ArithmeticError(f"valuations above {p} do not account for p^{e} in N({b})")
    return out


def _valuation(b: FieldElement, P: PrimeIdealData, spec: FieldSpec, bound: int) -> int:
    if bound <= 0 or not P.contains(b):
        return 0
    if bound == 1:
        return 1
    return prime_ideal_valuation(b, P.lattice, spec, bound)


def residue_symbol_prime(a: FieldElement, P: PrimeIdealData) -> int:
    """(a / P) in {-1, 0, 1}."""
    if P.rho is not None:
        return legendre(P.residue_int(a), P.p)
    return residue_map(a, P).quadratic_character()


def symbol_over_factorization(a: FieldElement, factorization: Factorization) -> int:
    """Product of (a / P)^e."""
    result = 1
    for P, e in factorization:
        s = residue_symbol_prime(a, P)
        if s == 0:
            return 0
        if e % 2:
            result *= s
    return result


def residue_symbol(a: FieldElement, b: FieldElement, spec: FieldSpec) -> int:
    """
    (a / b) for b of odd norm.

    Raises:
        EvenArgument: N(b) even
        FactoringBudgetExceeded: |N(b)| could not be factored
    """
    nb = norm(b, spec)
    if nb % 2 == 0:
        raise EvenArgument(f"denominator {b} has even norm {nb}")
    if abs(nb) == 1:
        return 1
    return symbol_over_factorization(a, ideal_factorization(b, spec))


def hilbert_infinity(a: FieldElement, b: FieldElement, spec: FieldSpec) -> int:
    """Product over real places of (a, b)_v: -1 at places where both are negative."""
    if spec.is_totally_complex:
        return 1
    result = 1
    for sa, sb in zip(real_signs(a, spec), real_signs(b, spec)):
        if sa < 0 and sb < 0:
            result = -result
    return result
