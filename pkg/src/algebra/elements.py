"""
Field element arithmetic.

Elements of O_K are integer coordinate vectors in the integral basis of a FieldSpec.
All arithmetic is exact; multiplication goes through the structure constants and the
norm is the determinant of the multiplication-by-a matrix.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, TYPE_CHECKING

from sympy import ZZ, QQ
from sympy.polys.matrices import DomainMatrix

if TYPE_CHECKING:
    from src.algebra.field_spec import FieldSpec


@dataclass(frozen=True)
class FieldElement:
    """Integer coordinates with respect to the integral basis."""

    coords: Tuple[int, ...]

    @classmethod
    def of(cls, values: Iterable[int]) -> 'FieldElement':
        return cls(tuple(int(v) for v in values))

    @classmethod
    def zero(cls, n: int) -> 'FieldElement':
        return cls((0,) * n)

    @classmethod
    def one(cls, n: int) -> 'FieldElement':
        return cls.rational(1, n)

    @classmethod
    def rational(cls, m: int, n: int) -> 'FieldElement':
        return cls((int(m),) + (0,) * (n - 1))

    @classmethod
    def basis(cls, i: int, n: int) -> 'FieldElement':
        values = [0] * n
        values[i] = 1
        return cls(tuple(values))

    @property
    def degree(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __add__(self, other: 'FieldElement') -> 'FieldElement':
        return FieldElement(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: 'FieldElement') -> 'FieldElement':
        return FieldElement(tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> 'FieldElement':
        return FieldElement(tuple(-x for x in self.coords))

    def scale(self, k: int) -> 'FieldElement':
        return FieldElement(tuple(k * x for x in self.coords))

    def mod(self, m: int) -> 'FieldElement':
        """Coordinates reduced into [0, m)."""
        return FieldElement(tuple(x % m for x in self.coords))

    def to_list(self) -> List[int]:
        return list(self.coords)

    def __str__(self) -> str:
        return '[' + ' '.join(str(x) for x in self.coords) + ']'


@dataclass(frozen=True)
class Modulus8Class:
    """Residue class of an element in O_K / 8 O_K."""

    coords: Tuple[int, ...]

    @classmethod
    def of(cls, a: FieldElement) -> 'Modulus8Class':
        return cls(tuple(x % 8 for x in a.coords))

    @property
    def key(self) -> str:
        return ''.join(str(x) for x in self.coords)

    @classmethod
    def from_key(cls, key: str) -> 'Modulus8Class':
        return cls(tuple(int(ch) for ch in key))

    def lift(self) -> FieldElement:
        return FieldElement(self.coords)


def multiplication_matrix(a: FieldElement, spec: 'FieldSpec') -> List[List[int]]:
    """
    Matrix of x -> a*x in the integral basis.

    Column j holds the coordinates of a * w_j.
    """
    n = spec.degree
    matrix = [[0] * n for _ in range(n)]
    for i, ai in enumerate(a.coords):
        if ai == 0:
            continue
        left = spec.left_multiplication[i]
        for k in range(n):
            row = left[k]
            target = matrix[k]
            for j in range(n):
                if row[j]:
                    target[j] += ai * row[j]
    return matrix


def element_mul(a: FieldElement, b: FieldElement, spec: 'FieldSpec') -> FieldElement:
    """Product via the structure constants."""
    n = spec.degree
    out = [0] * n
    table = spec.mult_table
    for i, ai in enumerate(a.coords):
        if ai == 0:
            continue
        row_i = table[i]
        for j, bj in enumerate(b.coords):
            if bj == 0:
                continue
            c = ai * bj
            for k, t in enumerate(row_i[j]):
                if t:
                    out[k] += c * t
    return FieldElement(tuple(out))


def element_pow(a: FieldElement, e: int, spec: 'FieldSpec') -> FieldElement:
    """a**e for e >= 0 by square and multiply."""
    if e < 0:
        raise ValueError("negative exponent; use element_inverse")
    result = FieldElement.one(spec.degree)
    base = a
    while e:
        if e & 1:
            result = element_mul(result, base, spec)
        e >>= 1
        if e:
            base = element_mul(base, base, spec)
    return result


def element_prod(values: Sequence[FieldElement], spec: 'FieldSpec') -> FieldElement:
    result = FieldElement.one(spec.degree)
    for v in values:
        result = element_mul(result, v, spec)
    return result


def norm(a: FieldElement, spec: 'FieldSpec') -> int:
    """Field norm: determinant of the multiplication matrix (exact, Bareiss)."""
    if a.is_rational():
        return a.coords[0] ** spec.degree
    matrix = DomainMatrix([[ZZ(x) for x in row] for row in multiplication_matrix(a, spec)],
                          (spec.degree, spec.degree), ZZ)
    return int(matrix.det())


def characteristic_polynomial(a: FieldElement, spec: 'FieldSpec') -> List[int]:
    """Characteristic polynomial of a, highest degree first."""
    n = spec.degree
    matrix = DomainMatrix([[ZZ(x) for x in row] for row in multiplication_matrix(a, spec)], (n, n), ZZ)
    return [int(c) for c in matrix.charpoly()]


def trace(a: FieldElement, spec: 'FieldSpec') -> int:
    matrix = multiplication_matrix(a, spec)
    return sum(matrix[i][i] for i in range(spec.degree))


def apply_automorphism(i: int, a: FieldElement, spec: 'FieldSpec') -> FieldElement:
    """sigma_i(a): new coordinates are A_i . coords."""
    matrix = spec.automorphisms[i]
    return FieldElement(tuple(
        sum(row[j] * x for j, x in enumerate(a.coords) if x) for row in matrix
    ))


def element_divide(a: FieldElement, b: FieldElement, spec: 'FieldSpec') -> Optional[FieldElement]:
    """
    Exact quotient a / b when it lies in O_K, else None.

    Args:
        a: Numerator
        b: Nonzero denominator

    Returns:
        Integral quotient or None
    """
    n = spec.degree
    matrix = DomainMatrix([[QQ(x) for x in row] for row in multiplication_matrix(b, spec)], (n, n), QQ)
    rhs = DomainMatrix([[QQ(x)] for x in a.coords], (n, 1), QQ)
    solution = matrix.lu_solve(rhs).to_list()
    coords = []
    for row in solution:
        value = Fraction(int(row[0].numerator), int(row[0].denominator))
        if value.denominator != 1:
            return None
        coords.append(value.numerator)
    return FieldElement(tuple(coords))


def element_inverse(a: FieldElement, spec: 'FieldSpec') -> FieldElement:
    """Inverse of a unit; raises ValueError for non-units."""
    inverse = element_divide(FieldElement.one(spec.degree), a, spec)
    if inverse is None:
        raise ValueError(f"{a} is not a unit")
    return inverse


def is_odd(a: FieldElement, spec: 'FieldSpec') -> bool:
    """True when (a) is coprime to 2, i.e. the norm is odd."""
    return norm(a, spec) % 2 == 1
