"""
Ideal lattices in Hermite normal form.

An ideal is stored by the upper triangular HNF of its Z-basis (columns), which is
the canonical key used for deduplication everywhere in the package.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from src.algebra.elements import FieldElement, element_mul, norm
from src.algebra.field_spec import FieldSpec

logger = logging.getLogger(__name__)

HNF = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class IdealLattice:
    """Ideal of O_K given by its HNF basis (columns) and norm."""

    hnf: HNF
    norm: int

    @property
    def degree(self) -> int:
        return len(self.hnf)

    @property
    def key(self) -> HNF:
        return self.hnf

    @property
    def key_string(self) -> str:
        return ';'.join(','.join(str(x) for x in row) for row in self.hnf)

    @classmethod
    def unit(cls, n: int) -> 'IdealLattice':
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), 1)

    def is_odd(self) -> bool:
        return self.norm % 2 == 1

    def basis(self) -> List[FieldElement]:
        n = self.degree
        return [FieldElement(tuple(self.hnf[r][c] for r in range(n))) for c in range(n)]

    def contains(self, a: FieldElement) -> bool:
        """HNF membership by back substitution."""
        return self.solve(a) is not None

    def solve(self, a: FieldElement) -> Optional[List[int]]:
        """Integer x with H x = a, or None."""
        n = self.degree
        residual = list(a.coords)
        x = [0] * n
        for i in range(n - 1, -1, -1):
            pivot = self.hnf[i][i]
            q, r = divmod(residual[i], pivot)
            if r:
                return None
            x[i] = q
            if q:
                for k in range(i + 1):
                    residual[k] -= q * self.hnf[k][i]
        return x

    def contains_ideal(self, other: 'IdealLattice') -> bool:
        return all(self.contains(b) for b in other.basis())


def hnf_from_generators(columns: Sequence[Sequence[int]], n: int, multiple: Optional[int] = None) -> HNF:
    """
    HNF of the Z-span of integer column vectors.

    Args:
        columns: Generating vectors (each of length n)
        n: Dimension
        multiple: Known multiple of the lattice determinant (enables the modular algorithm)
    """
    m = len(columns)
    matrix = DomainMatrix([[ZZ(columns[c][r]) for c in range(m)] for r in range(n)], (n, m), ZZ)
    if multiple is not None:
        result = hermite_normal_form(matrix, D=ZZ(multiple))
    else:
        result = hermite_normal_form(matrix)
    rows = result.to_list()
    if len(rows[0]) != n:
        raise ValueError("generators do not span a full-rank lattice")
    return tuple(tuple(int(x) for x in row) for row in rows)


def _det_upper(hnf: HNF) -> int:
    d = 1
    for i in range(len(hnf)):
        d *= hnf[i][i]
    return d


def ideal_from_generators(generators: Iterable[FieldElement], spec: FieldSpec,
                          multiple: Optional[int] = None) -> IdealLattice:
    """Ideal generated by the given elements: Z-span of g * w_j."""
    n = spec.degree
    columns = []
    for g in generators:
        for j in range(n):
            columns.append(element_mul(g, FieldElement.basis(j, n), spec).coords)
    hnf = hnf_from_generators(columns, n, multiple)
    return IdealLattice(hnf, _det_upper(hnf))


def ideal_of_element(a: FieldElement, spec: FieldSpec) -> IdealLattice:
    """Principal ideal (a)."""
    if a.is_zero():
        raise ValueError("zero element generates the zero ideal")
    return ideal_from_generators([a], spec, multiple=abs(norm(a, spec)))


def ideal_product(left: IdealLattice, right: IdealLattice, spec: FieldSpec) -> IdealLattice:
    """Product ideal from pairwise products of the two bases."""
    n = spec.degree
    if left.norm == 1:
        return right
    if right.norm == 1:
        return left
    columns = []
    for a in left.basis():
        for b in right.basis():
            columns.append(element_mul(a, b, spec).coords)
    hnf = hnf_from_generators(columns, n, multiple=left.norm * right.norm)
    return IdealLattice(hnf, _det_upper(hnf))


def ideal_power(ideal: IdealLattice, e: int, spec: FieldSpec) -> IdealLattice:
    result = IdealLattice.unit(spec.degree)
    for _ in range(e):
        result = ideal_product(result, ideal, spec)
    return result


def prime_ideal_valuation(a: FieldElement, ideal: IdealLattice, spec: FieldSpec, bound: int) -> int:
    """
    Largest k <= bound with a in ideal**k.

    Args:
        a: Nonzero element
        ideal: Prime ideal
        bound: Upper bound for the valuation (e.g. v_p(N(a)) / f)
    """
    k = 0
    power = ideal
    while k < bound and power.contains(a):
        k += 1
        if k < bound:
            power = ideal_product(power, ideal, spec)
    return k


def lattice_is_ideal(ideal: IdealLattice, spec: FieldSpec) -> bool:
    """Closure of the lattice under multiplication by basis elements."""
    n = spec.degree
    for b in ideal.basis():
        for j in range(n):
            if not ideal.contains(element_mul(b, FieldElement.basis(j, n), spec)):
                return False
    return True
