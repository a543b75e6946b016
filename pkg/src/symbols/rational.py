"""
Rational residue symbols.

Jacobi symbol by the binary reciprocity iteration (no factorization of the modulus).
"""

from src.errors import EvenModulus


def jacobi(a: int, m: int) -> int:
    """
    Jacobi symbol (a/m) for odd m > 0.

    Raises:
        EvenModulus: m even or non-positive
    """
    if m <= 0 or m % 2 == 0:
        raise EvenModulus(f"Jacobi symbol needs an odd positive modulus, got {m}")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    return jacobi(a, p)


def reciprocity_sign(a: int, b: int) -> int:
    """(-1)^((a-1)(b-1)/4) for odd positive a, b."""
    return -1 if a % 4 == 3 and b % 4 == 3 else 1
