"""
Generators of principal ideals and unit normalisation.

short_generator finds a generator by short-vector search in the LLL-reduced ideal
lattice. make_totally_positive and reduce_to_domain then pin down a canonical
representative up to unit squares (totally real) or torsion (totally complex).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import mpmath
import numpy as np

from src.algebra.elements import (
    FieldElement, element_inverse, element_mul, element_pow, norm
)
from src.algebra.embeddings import float_embedding_matrix, log_embedding, real_signs
from src.algebra.field_spec import FieldSpec
from src.algebra.units import sign_table, torsion_elements
from src.errors import GeneratorNotFound, NotAchievable
from src.generators.lattice import reduce_ideal_basis, short_vectors
from src.primes.factorization import split_prime_stream
from src.primes.ideals import IdealLattice

logger = logging.getLogger(__name__)

SEARCH_ROUNDS = 6
SEARCH_LIMIT = 50_000
BOUNDARY_BITS = 20
DOMAIN_PRECISIONS = (64, 128, 256, 512)


@dataclass(frozen=True)
class DomainReducedElement:
    """Element moved into the fundamental parallelepiped of the unit log-lattice."""

    element: FieldElement
    # coordinates in [0, 1) with respect to the domain unit basis
    log_vector: Tuple[float, ...]

    def to_dict(self) -> Dict:
        return {
            'element': list(self.element.coords),
            'log_vector': list(self.log_vector),
        }


def short_generator(ideal: IdealLattice, spec: FieldSpec, rounds: int = SEARCH_ROUNDS,
                    limit: int = SEARCH_LIMIT) -> FieldElement:
    """
    Find a generator of a principal ideal.

    The search radius starts at 1.5 * n * N^(2/n) (squared Minkowski length) and
    doubles each round. Candidates are prefiltered by their floating norm and then
    checked exactly: an element of the ideal whose norm equals N(L) generates L.

    Args:
        ideal: Ideal in HNF
        spec: Field
        rounds: Number of radius doublings
        limit: Vectors inspected per round

    Returns:
        alpha with (alpha) = ideal

    Raises:
        GeneratorNotFound: budget exhausted
    """
    n = spec.degree
    if ideal.norm == 1:
        return FieldElement.one(n)

    reduced = reduce_ideal_basis(ideal, spec)
    gram = reduced.gram
    target = ideal.norm
    emb = float_embedding_matrix(spec)
    radius = 1.5 * n * target ** (2.0 / n)

    for attempt in range(rounds):
        found = list(short_vectors(gram, radius, limit))
        if found:
            found.sort(key=lambda item: item[1])
            vectors = np.array([x for x, _ in found], dtype=object)
            coords = reduced.combine(vectors)
            approx = np.abs(np.prod(emb @ coords.astype(float).T, axis=0))
            close = np.abs(approx - target) <= 1e-6 * target + 1e-3
            for index in np.nonzero(close)[0]:
                candidate = FieldElement.of(int(c) for c in coords[index])
                if abs(norm(candidate, spec)) == target:
                    logger.debug(f"generator of norm {target} found in round {attempt}")
                    return candidate
        logger.debug(f"round {attempt}: no generator within radius {radius:.3g}")
        radius *= 2
    raise GeneratorNotFound(f"no generator of the ideal of norm {target} after {rounds} rounds")


def make_totally_positive(a: FieldElement, spec: FieldSpec) -> FieldElement:
    """
    Multiply a by +-1 times a unit square-class representative so it becomes totally positive.

    Raises:
        NotAchievable: no unit has the required sign vector
    """
    if a.is_zero():
        raise ValueError("zero has no totally positive associate")
    if not spec.is_totally_real:
        return a
    signs = real_signs(a, spec)
    unit = sign_table(spec).get(signs)
    if unit is None:
        raise NotAchievable(f"{spec.name}: no unit with sign vector {signs}")
    if all(s > 0 for s in signs):
        return a
    return element_mul(unit, a, spec)


@lru_cache(maxsize=16)
def domain_units(spec: FieldSpec) -> Tuple[FieldElement, ...]:
    """Basis of the unit lattice the domain is taken against: u_j^2 for totally real fields, u_j otherwise."""
    if spec.is_totally_real:
        return tuple(element_mul(u, u, spec) for u in spec.fundamental_units)
    return tuple(spec.fundamental_units)


@lru_cache(maxsize=16)
def _domain_inverses(spec: FieldSpec) -> Tuple[FieldElement, ...]:
    return tuple(element_inverse(w, spec) for w in domain_units(spec))


@lru_cache(maxsize=64)
def _unit_log_matrix(spec: FieldSpec, precision: int):
    r = spec.unit_rank
    with mpmath.workprec(precision + 32):
        rows = [log_embedding(w, spec, precision)[:r] for w in domain_units(spec)]
        return mpmath.matrix(rows).T


def log_coordinates(a: FieldElement, spec: FieldSpec, precision: int = 64) -> List:
    """Coordinates of the trace-zero part of log(a) in the domain unit basis."""
    r = spec.unit_rank
    if r == 0:
        return []
    n = spec.degree
    r1, _ = spec.signature
    logs = log_embedding(a, spec, precision)
    with mpmath.workprec(precision + 32):
        mean = mpmath.log(abs(norm(a, spec))) / n
        shifted = [logs[v] - (1 if v < r1 else 2) * mean for v in range(r)]
        solution = mpmath.lu_solve(_unit_log_matrix(spec, precision), mpmath.matrix(shifted))
        return [solution[j] for j in range(r)]


def _floor_coordinates(a: FieldElement, spec: FieldSpec) -> Tuple[List[int], List[float]]:
    if spec.unit_rank == 0:
        return [], []
    boundary = mpmath.mpf(2) ** (-BOUNDARY_BITS)
    for precision in DOMAIN_PRECISIONS:
        coords = log_coordinates(a, spec, precision)
        if all(abs(c - mpmath.nint(c)) >= boundary for c in coords):
            floors = [int(mpmath.floor(c)) for c in coords]
            return floors, [float(c - k) for c, k in zip(coords, floors)]
        logger.debug(f"log coordinates near the domain boundary at {precision} bits")
    # still ambiguous at the top precision: entries this close are integers
    exact = mpmath.mpf(2) ** (-DOMAIN_PRECISIONS[-1] // 4)
    floors = []
    for c in coords:
        nearest = mpmath.nint(c)
        floors.append(int(nearest) if abs(c - nearest) < exact else int(mpmath.floor(c)))
    return floors, [max(0.0, float(c - k)) for c, k in zip(coords, floors)]


def _unit_power(j: int, k: int, spec: FieldSpec) -> FieldElement:
    if k >= 0:
        return element_pow(domain_units(spec)[j], k, spec)
    return element_pow(_domain_inverses(spec)[j], -k, spec)


def reduce_to_domain(a: FieldElement, spec: FieldSpec) -> DomainReducedElement:
    """
    Move a into the fundamental parallelepiped of the unit log-lattice.

    The result is a * prod w_j^(-k_j) with k_j the floors of the log coordinates.
    For totally complex fields the torsion multiple with the smallest coordinate
    tuple is returned, so the result depends only on the ideal.

    Args:
        a: Nonzero element (totally positive for totally real fields)
        spec: Field

    Returns:
        DomainReducedElement
    """
    if a.is_zero():
        raise ValueError("zero cannot be reduced")
    floors, fractions = _floor_coordinates(a, spec)
    element = a
    for j, k in enumerate(floors):
        if k:
            element = element_mul(element, _unit_power(j, -k, spec), spec)
    if not spec.is_totally_real:
        element = min((element_mul(t, element, spec) for t in torsion_elements(spec)),
                      key=lambda e: e.coords)
    return DomainReducedElement(element=element, log_vector=tuple(fractions))


def canonical_element(alpha: FieldElement, spec: FieldSpec) -> FieldElement:
    """Representative of alpha up to units: totally positive when the field is real, then domain-reduced."""
    if spec.is_totally_real and spec.unit_condition:
        alpha = make_totally_positive(alpha, spec)
    return reduce_to_domain(alpha, spec).element


def canonical_generator(ideal: IdealLattice, spec: FieldSpec) -> FieldElement:
    """short_generator of the ideal, then canonical_element."""
    return canonical_element(short_generator(ideal, spec), spec)


def select_class_reps(spec: FieldSpec, count: Optional[int] = None) -> FieldSpec:
    """
    Attach class representatives: generators of degree-one primes above the smallest split primes.

    One prime is taken per rational prime so the norms multiply to a squarefree f.

    Args:
        spec: Field with class number h
        count: Number of representatives (default 2h)

    Returns:
        Spec with class_reps set
    """
    count = count or 2 * spec.class_number
    reps = []
    for p, orbit in split_prime_stream(10 ** 7, spec):
        reps.append(canonical_generator(orbit[0].lattice, spec))
        logger.info(f"{spec.name}: class representative above p = {p}")
        if len(reps) == count:
            break
    return spec.with_class_reps(reps)
