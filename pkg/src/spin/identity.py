"""
The spin factorization identity and the properties of phi.

spin(sigma, ab/c) = spin(sigma, c) delta(sigma; a, b) (ac / sigma(aB)) (bc / sigma(bA))
                    (a / sigma(b) sigma^-1(b))

with A, B the class representatives, (a) = aA, (b) = bB and (c) = AB.
factorization_identity_probe computes both sides without delta and returns their
ratio; reconstruct_delta requires that ratio to be constant on mod-8 cells (refined by
sign vectors in fields with real places), which rebuilds delta as a CellTable.

phi(a, b) = prod_S (a / sigma(b) sigma^-1(b)) is checked for symmetry up to a
cell sign, bimultiplicativity, and vanishing of its residue sums.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from src.algebra.elements import FieldElement, apply_automorphism, element_divide, element_mul, norm
from src.algebra.embeddings import real_signs
from src.algebra.field_spec import FieldSpec
from src.errors import ConfigError, ZeroSymbolEncountered
from src.primes.factorization import PrimeIdealData
from src.spin.spins import conjugate_factorization, spin_sigma
from src.symbols.reciprocity import (
    CellTable, admissible_pair, cell_key, random_lift, random_odd_class, sample_cell
)
from src.symbols.residue import Factorization, ideal_factorization, residue_symbol, residue_symbol_prime

logger = logging.getLogger(__name__)

SAMPLES_PER_CELL = 20


def _nonzero(value: int, what: str) -> int:
    if value == 0:
        raise ZeroSymbolEncountered(f"{what} vanished")
    return value


def factorization_identity_probe(a: FieldElement, b: FieldElement, c: FieldElement, i: int,
                                 spec: FieldSpec, A: Optional[FieldElement] = None,
                                 B: Optional[FieldElement] = None) -> int:
    """
    Ratio of the two sides of the spin factorization identity, delta left out.

    Args:
        a, b: Odd elements with A | a and B | b
        c: Generator of AB (1 when A = B = 1)
        i: Automorphism index
        spec: Field
        A, B: Class representative generators (default 1)

    Returns:
        +1 or -1

    Raises:
        ZeroSymbolEncountered: a symbol on either side vanished
    """
    n = spec.degree
    one = FieldElement.one(n)
    A = A or one
    B = B or one
    a_part = element_divide(a, A, spec)
    b_part = element_divide(b, B, spec)
    if a_part is None or b_part is None:
        raise ValueError("a must be divisible by A and b by B")

    left = _nonzero(spin_sigma(i, element_mul(a_part, b_part, spec), spec), "spin(sigma, ab/c)")

    sigma = lambda x: apply_automorphism(i, x, spec)  # noqa: E731
    sigma_inv = lambda x: apply_automorphism(spec.inverse_index(i), x, spec)  # noqa: E731
    ac = element_mul(a, c, spec)
    bc = element_mul(b, c, spec)
    right = _nonzero(spin_sigma(i, c, spec), "spin(sigma, c)")
    right *= _nonzero(residue_symbol(ac, sigma(element_mul(a_part, B, spec)), spec), "(ac / sigma(aB))")
    right *= _nonzero(residue_symbol(bc, sigma(element_mul(b_part, A, spec)), spec), "(bc / sigma(bA))")
    right *= _nonzero(residue_symbol(a, element_mul(sigma(b), sigma_inv(b), spec), spec),
                      "(a / sigma(b) sigma^-1(b))")
    return left * right


def phi(a: FieldElement, b: FieldElement, S: Sequence[int], spec: FieldSpec) -> int:
    """prod over S of (a / sigma(b) sigma^-1(b))."""
    result = 1
    for i in S:
        denominator = element_mul(apply_automorphism(i, b, spec),
                                  apply_automorphism(spec.inverse_index(i), b, spec), spec)
        value = residue_symbol(a, denominator, spec)
        if value == 0:
            return 0
        result *= value
    return result


def phi_denominator(factors: Factorization, S: Sequence[int], spec: FieldSpec) -> Factorization:
    """Factorization of (phi(b)) = prod_S sigma(b) sigma^-1(b), equal primes merged."""
    merged: Dict[Tuple, Tuple[PrimeIdealData, int]] = {}
    for i in S:
        for j in (i, spec.inverse_index(i)):
            for P, e in conjugate_factorization(factors, j, spec):
                previous = merged.get(P.key)
                merged[P.key] = (P, e + (previous[1] if previous else 0))
    return [merged[k] for k in sorted(merged)]


def residue_representatives(P: PrimeIdealData) -> List[FieldElement]:
    """Complete residue system of O_K / P from the HNF diagonal."""
    hnf = P.lattice.hnf
    diagonal = [hnf[i][i] for i in range(len(hnf))]
    return [FieldElement.of(int(d) for d in digits) for digits in np.ndindex(*diagonal)]


@dataclass
class ResidueSumResult:
    """Sum of phi(xi, b) over residues, locally and globally."""

    norm: int
    squarefull: bool
    local_sums: List[int] = field(default_factory=list)
    total: int = 0
    scaled_total: int = 0

    @property
    def vanishes(self) -> bool:
        return self.total == 0


def is_squarefull(m: int) -> bool:
    return all(e >= 2 for e in factorint(abs(m)).values())


def phi_residue_sum(b: FieldElement, S: Sequence[int], spec: FieldSpec,
                    factors: Optional[Factorization] = None) -> ResidueSumResult:
    """
    Sum of phi(xi, b) over xi modulo (phi(b)), and modulo N(b).

    O_K / (phi(b)) splits by CRT into the O_K / Q^e. Since (xi / Q)^e only sees
    xi mod Q, each local sum is N(Q)^(e-1) times an exhaustive sum over a residue
    system of O_K / Q. The sum over xi mod N(b) is N(b)^n / N(phi(b)) times the total.
    """
    factors = factors if factors is not None else ideal_factorization(b, spec)
    value = abs(norm(b, spec))
    denominator = phi_denominator(factors, S, spec)
    result = ResidueSumResult(norm=value, squarefull=is_squarefull(value))
    total = 1
    phi_norm = 1
    for Q, e in denominator:
        local = sum(residue_symbol_prime(xi, Q) ** e for xi in residue_representatives(Q))
        local *= Q.norm ** (e - 1)
        result.local_sums.append(local)
        total *= local
        phi_norm *= Q.norm ** e
    result.total = total
    result.scaled_total = total * (value ** spec.degree // phi_norm)
    return result


def phi_depends_on_norm_class(a: FieldElement, b: FieldElement, shift: FieldElement, S: Sequence[int],
                              spec: FieldSpec) -> bool:
    """phi(a + N(b) * shift, b) == phi(a, b)."""
    value = abs(norm(b, spec))
    return phi(a + shift.scale(value), b, S, spec) == phi(a, b, S, spec)


def sign_label(x: FieldElement, spec: FieldSpec) -> str:
    """Signs of x at the real places, e.g. '+-+'."""
    return ''.join('+' if s > 0 else '-' for s in real_signs(x, spec))


def refined_cell_key(a: FieldElement, b: FieldElement, spec: FieldSpec) -> Tuple[str, str]:
    """Mod-8 cell of (a, b), refined by sign vectors when the field has real places."""
    key = cell_key(a, b)
    if spec.is_totally_complex:
        return key
    return f"{key[0]}|{sign_label(a, spec)}", f"{key[1]}|{sign_label(b, spec)}"


def _sign_refinement(spec: FieldSpec) -> Optional[Callable[[FieldElement], str]]:
    if spec.is_totally_complex:
        return None
    return lambda x: sign_label(x, spec)


def reconstruct_delta(i: int, spec: FieldSpec, cells: int = 10, samples: int = SAMPLES_PER_CELL,
                      seed: int = 0, max_attempts: int = 400) -> CellTable:
    """
    delta(sigma_i; a, b) as a cell table, in the degenerate setting A = B = c = 1.

    Cells are mod-8 classes refined by sign vectors (see refined_cell_key). A cell enters
    the table only with `samples` distinct usable lift pairs.

    Args:
        i: Automorphism index
        spec: Field
        cells: Random cells to try
        samples: Distinct pairs per cell (>= 20)
        seed: RNG seed
        max_attempts: Pair draws per cell before the cell is dropped

    Returns:
        CellTable of delta values

    Raises:
        ConfigError: samples below the per-cell minimum
        InconsistentCell: the ratio varies inside a cell
    """
    if samples < SAMPLES_PER_CELL:
        raise ConfigError(f"samples must be at least {SAMPLES_PER_CELL}")
    rng = np.random.default_rng(seed)
    table = CellTable(name=f"delta:{spec.name}:sigma{i}")
    one = FieldElement.one(spec.degree)

    def observe(a: FieldElement, b: FieldElement) -> Optional[int]:
        try:
            return factorization_identity_probe(a, b, one, i, spec)
        except ZeroSymbolEncountered:
            return None

    for _ in range(cells):
        a0, b0 = random_odd_class(spec, rng), random_odd_class(spec, rng)
        sample = sample_cell(a0, b0, spec, rng, observe, samples=samples, max_attempts=max_attempts,
                             label=_sign_refinement(spec))
        if sample is not None:
            table.record_sample(sample)
    logger.info(f"{table.name}: {table.cell_count} of {cells} cells populated")
    return table


def phi_symmetry_table(S: Sequence[int], spec: FieldSpec, cells: int = 10, samples: int = SAMPLES_PER_CELL,
                       seed: int = 0, max_attempts: int = 400) -> CellTable:
    """
    mu(cell) with phi(a, b) = mu * phi(b, a), on cells of `samples` distinct lift pairs.

    Raises:
        ConfigError: samples below the per-cell minimum
        InconsistentCell: the sign varies inside a cell
    """
    if samples < SAMPLES_PER_CELL:
        raise ConfigError(f"samples must be at least {SAMPLES_PER_CELL}")
    rng = np.random.default_rng(seed)
    table = CellTable(name=f"mu:{spec.name}:S{list(S)}")

    def observe(a: FieldElement, b: FieldElement) -> Optional[int]:
        forward, backward = phi(a, b, S, spec), phi(b, a, S, spec)
        if forward == 0 or backward == 0:
            return None
        return forward * backward

    for _ in range(cells):
        a0, b0 = random_odd_class(spec, rng), random_odd_class(spec, rng)
        sample = sample_cell(a0, b0, spec, rng, observe, samples=samples, max_attempts=max_attempts,
                             label=_sign_refinement(spec))
        if sample is not None:
            table.record_sample(sample)
    return table


def check_bimultiplicative(S: Sequence[int], spec: FieldSpec, triples: int = 200, seed: int = 0) -> int:
    """
    Count failures of phi(a, b1 b2) = phi(a, b1) phi(a, b2) and phi(a1 a2, b) = phi(a1, b) phi(a2, b).

    Returns:
        Number of failing triples (0 when the property holds)
    """
    rng = np.random.default_rng(seed)
    failures = 0
    checked = 0
    while checked < triples:
        x, y, z = (random_lift(random_odd_class(spec, rng), spec, rng) for _ in range(3))
        if not (admissible_pair(x, y, spec) and admissible_pair(x, z, spec) and admissible_pair(y, z, spec)):
            continue
        checked += 1
        if phi(x, element_mul(y, z, spec), S, spec) != phi(x, y, S, spec) * phi(x, z, S, spec):
            failures += 1
        if phi(element_mul(y, z, spec), x, S, spec) != phi(y, x, S, spec) * phi(z, x, S, spec):
            failures += 1
    return failures
