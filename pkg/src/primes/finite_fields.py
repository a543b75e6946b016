"""
Residue fields F_{p^f} as polynomials modulo (p, g).

Polynomials are sympy galoistools lists (highest degree first, coefficients in [0, p)).
"""

from dataclasses import dataclass
from typing import Tuple

from sympy import ZZ
from sympy.polys.galoistools import gf_add, gf_mul, gf_pow_mod, gf_rem, gf_strip

from src.symbols.rational import legendre


@dataclass(frozen=True)
class ResidueFieldElement:
    """Element of Z[x] / (p, g(x)) with deg < f."""

    p: int
    modulus: Tuple[int, ...]
    coeffs: Tuple[int, ...]

    @property
    def f(self) -> int:
        return len(self.modulus) - 1

    @classmethod
    def from_poly(cls, poly, p: int, modulus: Tuple[int, ...]) -> 'ResidueFieldElement':
        reduced = gf_rem(gf_strip([c % p for c in poly]), list(modulus), p, ZZ)
        return cls(p, modulus, tuple(int(c) for c in reduced))

    @classmethod
    def from_int(cls, value: int, p: int, modulus: Tuple[int, ...]) -> 'ResidueFieldElement':
        value %= p
        return cls(p, modulus, (value,) if value else ())

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: 'ResidueFieldElement') -> 'ResidueFieldElement':
        return ResidueFieldElement(self.p, self.modulus,
                                   tuple(gf_add(list(self.coeffs), list(other.coeffs), self.p, ZZ)))

    def __mul__(self, other: 'ResidueFieldElement') -> 'ResidueFieldElement':
        product = gf_mul(list(self.coeffs), list(other.coeffs), self.p, ZZ)
        return ResidueFieldElement.from_poly(product, self.p, self.modulus)

    def __pow__(self, e: int) -> 'ResidueFieldElement':
        if self.f == 1:
            value = pow(self.coeffs[0] if self.coeffs else 0, e, self.p)
            return ResidueFieldElement.from_int(value, self.p, self.modulus)
        result = gf_pow_mod(list(self.coeffs), e, list(self.modulus), self.p, ZZ)
        return ResidueFieldElement(self.p, self.modulus, tuple(int(c) for c in result))

    def as_int(self) -> int:
        """Value for f = 1."""
        return self.coeffs[0] if self.coeffs else 0

    def quadratic_character(self) -> int:
        """x^((q-1)/2) in {-1, 0, 1} with q = p^f."""
        if self.is_zero():
            return 0
        if self.f == 1:
            return legendre(self.as_int(), self.p)
        power = self ** ((self.p ** self.f - 1) // 2)
        if power.coeffs == (1,):
            return 1
        if power.coeffs == (self.p - 1,):
            return -1
        raise ArithmeticError(f"Euler criterion gave {power.coeffs} modulo {self.p}")
