"""
Enumeration of principal odd ideals up to a norm bound.

Two independent routes:

  - box: every ideal has a domain-reduced generator whose coordinates lie in a box
    |a_i| <= R_i with R_i proportional to X^(1/n). The box is scanned slab by slab
    with numpy, filtered by float norm and log coordinates, then checked exactly
    and deduplicated by HNF.
  - ideals: products of prime ideal powers built depth first from the prime
    decomposition, with generators multiplied out from prime generators.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy import primerange

from src.algebra.elements import FieldElement, apply_automorphism, element_mul, element_pow, norm
from src.algebra.embeddings import float_embedding_matrix, log_embedding, place_indices
from src.algebra.field_spec import FieldSpec
from src.config import get_settings
from src.errors import CeilingExceeded, GeneratorNotFound
from src.generators.principal import domain_units, reduce_to_domain, short_generator
from src.primes.factorization import PrimeIdealData, factor_rational_prime
from src.primes.ideals import IdealLattice, ideal_of_element, ideal_power, ideal_product

logger = logging.getLogger(__name__)

DOMAIN_SLACK = 1e-6

Factorization = Tuple[Tuple[PrimeIdealData, int], ...]


# Box route

@lru_cache(maxsize=16)
def _place_bounds(spec: FieldSpec) -> np.ndarray:
    """Per-embedding bound exp(sum_j max(0, log|w_j|_v)) over the domain parallelepiped."""
    n = spec.degree
    r1, _ = spec.signature
    places = place_indices(spec)
    exponent = np.zeros(len(places))
    for w in domain_units(spec):
        logs = [float(x) for x in log_embedding(w, spec)]
        for v, k in enumerate(places):
            weight = 1 if k < r1 else 2
            exponent[v] += max(0.0, logs[v] / weight)
    bounds = np.zeros(n)
    for v, k in enumerate(places):
        bounds[k] = np.exp(exponent[v])
        if k >= r1:
            bounds[k + 1] = bounds[k]
    return bounds


def box_radii(X: int, spec: FieldSpec) -> List[int]:
    """
    Coordinate box containing every domain-reduced generator of norm <= X.

    Returns:
        R_i with |a_i| <= R_i
    """
    inverse = np.linalg.inv(float_embedding_matrix(spec))
    scale = X ** (1.0 / spec.degree)
    radii = scale * (np.abs(inverse) @ _place_bounds(spec))
    return [int(np.floor(r * (1 + 1e-9) + 1e-9)) for r in radii]


def box_size(radii: Sequence[int]) -> int:
    size = 1
    for r in radii:
        size *= 2 * r + 1
    return size


@lru_cache(maxsize=16)
def _float_unit_logs(spec: FieldSpec) -> np.ndarray:
    r = spec.unit_rank
    rows = [[float(x) for x in log_embedding(w, spec)[:r]] for w in domain_units(spec)]
    return np.array(rows, dtype=float).T


def box_slabs(radii: Sequence[int]) -> Iterator[np.ndarray]:
    """Blocks of box points: a product over the leading coordinates times a grid of the last two."""
    n = len(radii)
    tail = [np.arange(-r, r + 1) for r in radii[-2:]]
    grid = np.stack(np.meshgrid(*tail, indexing='ij'), axis=-1).reshape(-1, len(tail))
    for head in product(*(range(-r, r + 1) for r in radii[:-2])):
        block = np.empty((grid.shape[0], n), dtype=np.int64)
        block[:, :n - len(tail)] = head
        block[:, n - len(tail):] = grid
        yield block


def _candidate_mask(block: np.ndarray, X: int, spec: FieldSpec) -> np.ndarray:
    emb = block.astype(float) @ float_embedding_matrix(spec).T
    values = np.prod(emb, axis=1).real
    absolute = np.abs(values)
    mask = (absolute >= 1.5) & (absolute <= X + 0.5)
    mask &= np.rint(absolute).astype(np.int64) % 2 == 1
    r1, _ = spec.signature
    if spec.is_totally_real:
        mask &= np.all(emb.real > 0, axis=1)
    r = spec.unit_rank
    if r and mask.any():
        chosen = emb[mask]
        moduli = np.log(np.abs(chosen[:, place_indices(spec)]))
        weights = np.array([1.0 if k < r1 else 2.0 for k in place_indices(spec)])
        logs = moduli * weights - np.outer(np.log(absolute[mask]) / spec.degree, weights)
        coords = np.linalg.solve(_float_unit_logs(spec), logs[:, :r].T).T
        inside = np.all((coords >= -DOMAIN_SLACK) & (coords < 1 + DOMAIN_SLACK), axis=1)
        mask[np.nonzero(mask)[0][~inside]] = False
    return mask


def enumerate_principal_odd_ideals(X: int, spec: FieldSpec, ceiling: Optional[int] = None,
                                   coprime_to: int = 1) -> Iterator[Tuple[IdealLattice, FieldElement]]:
    """
    Principal odd ideals 1 < N(a) <= X, each once, with a domain-reduced generator.

    Args:
        X: Norm bound
        spec: Field
        ceiling: Maximum number of box points (default from settings)
        coprime_to: Skip ideals whose norm shares a factor with this integer

    Yields:
        (ideal, generator) ordered by (norm, HNF)

    Raises:
        CeilingExceeded: the box is larger than the ceiling
    """
    ceiling = ceiling or get_settings().enum_ceiling
    radii = box_radii(X, spec)
    size = box_size(radii)
    if size > ceiling:
        raise CeilingExceeded(f"box {radii} has {size} points, ceiling {ceiling}")
    logger.info(f"{spec.name}: scanning box {radii} ({size} points) for norms <= {X}")

    found: Dict[Tuple, Tuple[IdealLattice, FieldElement]] = {}
    for block in box_slabs(radii):
        mask = _candidate_mask(block, X, spec)
        for row in block[mask]:
            alpha = FieldElement.of(int(x) for x in row)
            value = abs(norm(alpha, spec))
            if value <= 1 or value > X or value % 2 == 0 or gcd(value, coprime_to) != 1:
                continue
            generator = reduce_to_domain(alpha, spec).element
            ideal = ideal_of_element(generator, spec)
            found.setdefault(ideal.key, (ideal, generator))
    logger.info(f"{spec.name}: {len(found)} principal odd ideals of norm <= {X}")
    for key in sorted(found, key=lambda k: (found[k][0].norm, k)):
        yield found[key]


# Ideal route

@dataclass
class IdealRecord:
    """An ideal given by its prime factorization, with a generator when principal."""

    norm: int
    factors: Factorization
    generator: Optional[FieldElement]
    spec: FieldSpec = field(repr=False)

    @cached_property
    def lattice(self) -> IdealLattice:
        result = IdealLattice.unit(self.spec.degree)
        for P, e in self.factors:
            result = ideal_product(result, ideal_power(P.lattice, e, self.spec), self.spec)
        return result

    @property
    def is_principal(self) -> bool:
        return self.generator is not None

    def exponent(self, P: PrimeIdealData) -> int:
        for Q, e in self.factors:
            if Q.key == P.key:
                return e
        return 0


@lru_cache(maxsize=None)
def prime_generators(p: int, spec: FieldSpec) -> Tuple[Optional[FieldElement], ...]:
    """
    Generators of the primes above p, aligned with factor_rational_prime(p).

    One short-vector search per rational prime; the conjugates come from the
    Galois action. None marks a non-principal prime.
    """
    ideals = factor_rational_prime(p, spec)
    n = spec.degree
    if len(ideals) == 1:
        return (FieldElement.rational(p, n),)
    try:
        base = short_generator(ideals[0].lattice, spec)
    except GeneratorNotFound:
        logger.debug(f"no generator for the primes above {p}")
        return tuple(None for _ in ideals)
    out: List[Optional[FieldElement]] = [None] * len(ideals)
    for i in range(n):
        image = apply_automorphism(i, base, spec)
        for k, P in enumerate(ideals):
            if out[k] is None and P.contains(image):
                out[k] = image
                break
    return tuple(out)


def prime_ideals_up_to(X: int, spec: FieldSpec, coprime_to: int = 1) -> List[Tuple[PrimeIdealData, Optional[FieldElement]]]:
    """Prime ideals of norm <= X not above 2, D_K or coprime_to, with generators, by norm."""
    out = []
    excluded = 2 * abs(spec.discriminant) * coprime_to
    for p in primerange(3, X + 1):
        if excluded % p == 0:
            continue
        ideals = factor_rational_prime(p, spec)
        if ideals[0].norm > X:
            continue
        for P, g in zip(ideals, prime_generators(p, spec)):
            out.append((P, g))
    out.sort(key=lambda item: (item[0].norm, item[0].key))
    return out


def enumerate_ideals_by_factorization(X: int, spec: FieldSpec, coprime_to: int = 1,
                                      principal_only: bool = True) -> Iterator[IdealRecord]:
    """
    Ideals 1 < N(a) <= X coprime to 2 * D_K * coprime_to, built from prime powers.

    Generators are products of prime generators, so an ideal is reported principal
    exactly when all its primes are (class number one), or otherwise when a short
    generator of the product lattice exists.

    Args:
        X: Norm bound
        spec: Field
        coprime_to: Extra integer the ideals must be coprime to
        principal_only: Skip ideals without a generator

    Yields:
        IdealRecord in depth-first order (not sorted by norm)
    """
    primes = prime_ideals_up_to(X, spec, coprime_to)
    n = spec.degree
    one = FieldElement.one(n)
    logger.info(f"{spec.name}: {len(primes)} prime ideals of norm <= {X}")

    def extend(start: int, current: int, factors: Factorization, generator: Optional[FieldElement]):
        for j in range(start, len(primes)):
            P, g = primes[j]
            if current * P.norm > X:
                break
            power_norm = P.norm
            e = 1
            while current * power_norm <= X:
                new_factors = factors + ((P, e),)
                new_generator = None
                if generator is not None and g is not None:
                    new_generator = element_mul(generator, element_pow(g, e, spec), spec)
                record = IdealRecord(norm=current * power_norm, factors=new_factors,
                                     generator=new_generator, spec=spec)
                if record.generator is None and spec.class_number > 1:
                    try:
                        record.generator = short_generator(record.lattice, spec)
                    except GeneratorNotFound:
                        pass
                if record.generator is not None or not principal_only:
                    yield record
                yield from extend(j + 1, current * power_norm, new_factors, new_generator)
                e += 1
                power_norm *= P.norm

    yield from extend(0, 1, (), one)
