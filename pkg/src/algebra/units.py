"""
Units, torsion and unit square classes.
"""

import logging
from dataclasses import replace
from functools import lru_cache
from itertools import product
from typing import Dict, List, Tuple

from sympy import primefactors

from src.algebra.elements import FieldElement, element_mul, element_pow, element_prod
from src.algebra.embeddings import element_sqrt, real_signs
from src.algebra.field_spec import FieldSpec
from src.errors import StructuralFailure

logger = logging.getLogger(__name__)

MAX_SATURATION_STEPS = 32


@lru_cache(maxsize=16)
def torsion_elements(spec: FieldSpec) -> Tuple[FieldElement, ...]:
    """All roots of unity t^k, k = 0..|T_K|-1."""
    out = [FieldElement.one(spec.degree)]
    for _ in range(spec.torsion_order - 1):
        out.append(element_mul(out[-1], spec.torsion_generator, spec))
    return tuple(out)


def unit_product(exponents, spec: FieldSpec) -> FieldElement:
    return element_prod([u for u, e in zip(spec.fundamental_units, exponents) if e % 2], spec)


@lru_cache(maxsize=16)
def unit_class_representatives(spec: FieldSpec) -> Tuple[FieldElement, ...]:
    """Products of fundamental units with exponents in {0, 1}: representatives of V_K/V_K^2."""
    return tuple(unit_product(e, spec) for e in product((0, 1), repeat=len(spec.fundamental_units)))


@lru_cache(maxsize=16)
def sign_table(spec: FieldSpec) -> Dict[Tuple[int, ...], FieldElement]:
    """
    Map from sign vectors to a unit with that sign vector.

    Ranges over +-1 times the unit class representatives; the identity is inserted
    first so that an already positive element keeps its generator.
    """
    table: Dict[Tuple[int, ...], FieldElement] = {}
    n = spec.degree
    for t in (FieldElement.one(n), FieldElement.rational(-1, n)):
        for v in unit_class_representatives(spec):
            u = element_mul(t, v, spec)
            table.setdefault(real_signs(u, spec), u)
    return table


def square_class_candidates(spec: FieldSpec) -> List[Tuple[Tuple[int, ...], FieldElement]]:
    """Nontrivial products t^a * prod u_j^e_j with a, e_j in {0, 1}."""
    r = len(spec.fundamental_units)
    out = []
    for bits in product((0, 1), repeat=r + 1):
        if not any(bits):
            continue
        element = unit_product(bits[1:], spec)
        if bits[0]:
            element = element_mul(element, spec.torsion_generator, spec)
        out.append((bits, element))
    return out


def find_unit_square(spec: FieldSpec):
    """First nontrivial class of T_K x <units> that is a square, as (bits, root), or None."""
    for bits, element in square_class_candidates(spec):
        root = element_sqrt(element, spec)
        if root is not None:
            return bits, root
    return None


def saturate_units(spec: FieldSpec) -> FieldSpec:
    """
    Replace units by square roots until no class of T_K x <units> is a square.

    Returns:
        Spec whose units represent V_K / V_K^2
    """
    for _ in range(MAX_SATURATION_STEPS):
        found = find_unit_square(spec)
        if found is None:
            return spec
        bits, root = found
        unit_bits = bits[1:]
        if not any(unit_bits):
            raise StructuralFailure("torsion", "torsion generator is a square")
        j = max(k for k, b in enumerate(unit_bits) if b)
        logger.warning(f"{spec.name}: unit class {bits} is a square, replacing unit {j} by its root")
        units = list(spec.fundamental_units)
        units[j] = root
        spec = replace(spec, fundamental_units=tuple(units))
    raise StructuralFailure("unit_saturation", f"no fixed point after {MAX_SATURATION_STEPS} steps")


def is_root_of_unity(a: FieldElement, spec: FieldSpec) -> bool:
    return a in torsion_elements(spec)


def check_torsion_order(spec: FieldSpec) -> bool:
    """t has exact order |T_K|."""
    one = FieldElement.one(spec.degree)
    w = spec.torsion_order
    if element_pow(spec.torsion_generator, w, spec) != one:
        return False
    return all(element_pow(spec.torsion_generator, w // q, spec) != one for q in primefactors(w))
