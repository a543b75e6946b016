"""
Spins and joint spins.

spin(sigma, a) = (a / sigma(a)). The joint spin s_a of an odd principal ideal
averages psi(tva) prod_S spin(sigma, tva) over torsion t and unit square classes v,
keeping only totally positive tva when the field is totally real. Every term shares
the denominators sigma((a)), so the factorization of (a) is computed once and moved
around by the Galois action.
"""

import logging
from typing import Dict, List, Optional, Sequence

from src.algebra.elements import FieldElement, apply_automorphism, element_mul
from src.algebra.embeddings import is_totally_positive
from src.algebra.field_spec import FieldSpec
from src.algebra.units import torsion_elements, unit_class_representatives
from src.generators.principal import make_totally_positive, short_generator
from src.primes.factorization import conjugate_prime
from src.primes.ideals import IdealLattice
from src.spin.config import SpinConfig
from src.symbols.residue import Factorization, ideal_factorization, residue_symbol, symbol_over_factorization

logger = logging.getLogger(__name__)


def spin_sigma(i: int, a: FieldElement, spec: FieldSpec) -> int:
    """
    spin(sigma_i, a) = (a / sigma_i(a)).

    Raises:
        EvenArgument: a has even norm
    """
    return residue_symbol(a, apply_automorphism(i, a, spec), spec)


def joint_spin_element(a: FieldElement, S: Sequence[int], spec: FieldSpec) -> int:
    """Product of spin_sigma over S; 0 as soon as one factor vanishes."""
    result = 1
    for i in S:
        value = spin_sigma(i, a, spec)
        if value == 0:
            return 0
        result *= value
    return result


def conjugate_factorization(factors: Factorization, i: int, spec: FieldSpec) -> Factorization:
    """Factorization of sigma_i(a) from that of a."""
    return [(conjugate_prime(P, i, spec), e) for P, e in factors]


def spins_from_factorization(a: FieldElement, factors: Factorization, S: Sequence[int],
                             spec: FieldSpec) -> List[int]:
    """[spin(sigma, a) for sigma in S] given the prime factorization of (a)."""
    return [symbol_over_factorization(a, conjugate_factorization(factors, i, spec)) for i in S]


def s_from_generator(alpha: FieldElement, factors: Factorization, config: SpinConfig,
                     spec: FieldSpec) -> int:
    """
    Joint spin of (alpha) from a generator and the factorization of (alpha).

    In a totally real field with the unit condition exactly one class tv makes
    tv*alpha totally positive, so the double sum has a single term.
    """
    denominators: Dict[int, Factorization] = {i: conjugate_factorization(factors, i, spec) for i in config.S}

    def term(beta: FieldElement) -> int:
        weight = config.psi(beta)
        if weight == 0:
            return 0
        for i in config.S:
            value = symbol_over_factorization(beta, denominators[i])
            if value == 0:
                return 0
            weight *= value
        return weight

    if spec.is_totally_real and spec.unit_condition:
        return term(make_totally_positive(alpha, spec))

    total = 0
    for t in torsion_elements(spec):
        for v in unit_class_representatives(spec):
            beta = element_mul(element_mul(t, v, spec), alpha, spec)
            if spec.is_totally_real and not is_totally_positive(beta, spec):
                continue
            total += term(beta)
    return total


def s_of_ideal(ideal: IdealLattice, config: SpinConfig, spec: FieldSpec,
               generator: Optional[FieldElement] = None,
               factors: Optional[Factorization] = None) -> int:
    """
    s_a for an ideal: 0 for even ideals, else the torsion and unit-class average.

    Args:
        ideal: Ideal in HNF
        config: S, psi, F
        spec: Field
        generator: Known generator (found by short_generator otherwise)
        factors: Known prime factorization of the ideal

    Raises:
        GeneratorNotFound: the ideal has no generator within the search budget
    """
    if not ideal.is_odd():
        return 0
    if ideal.norm == 1:
        generator = generator or FieldElement.one(spec.degree)
        return s_from_generator(generator, [], config, spec)
    if generator is None:
        generator = short_generator(ideal, spec)
    if factors is None:
        factors = ideal_factorization(generator, spec)
    return s_from_generator(generator, factors, config, spec)
