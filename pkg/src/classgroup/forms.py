"""
Positive definite binary quadratic forms.

Forms (a, b, c) of negative discriminant D = b^2 - 4ac, with reduction, Gauss
composition and powering. Reduced primitive forms of discriminant D are in
bijection with the class group of the imaginary quadratic order of discriminant D.
"""

import logging
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterator, List, Set

from sympy import factorint
from sympy.core.intfunc import igcdex

from src.errors import DiscriminantMismatch, NotFundamental

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadForm:
    """ax^2 + bxy + cy^2 with a > 0 and b^2 - 4ac < 0."""

    a: int
    b: int
    c: int

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    @classmethod
    def identity(cls, D: int) -> 'QuadForm':
        """Principal form (1, k, (k^2 - D)/4) with k = D mod 2."""
        k = D % 2
        return cls(1, k, (k * k - D) // 4)

    def normalize(self) -> 'QuadForm':
        """Move b into (-a, a] by x -> x + ry."""
        a, b, c = self.a, self.b, self.c
        r = (a - b) // (2 * a)
        return QuadForm(a, b + 2 * r * a, a * r * r + b * r + c)

    def reduce(self) -> 'QuadForm':
        form = self.normalize()
        while form.a > form.c:
            form = QuadForm(form.c, -form.b, form.a).normalize()
        if form.a == form.c and form.b < 0:
            form = QuadForm(form.a, -form.b, form.c)
        return form

    def inverse(self) -> 'QuadForm':
        return QuadForm(self.a, -self.b, self.c).reduce()

    def __mul__(self, other: 'QuadForm') -> 'QuadForm':
        return compose(self, other)

    def __pow__(self, e: int) -> 'QuadForm':
        return form_pow(self, e)


def compose(f1: QuadForm, f2: QuadForm) -> QuadForm:
    """
    Gauss composition of two primitive forms, reduced.

    Args:
        f1, f2: Primitive forms of the same discriminant

    Returns:
        Reduced form in the class of f1 * f2

    Raises:
        DiscriminantMismatch: the discriminants differ
    """
    D = f1.discriminant
    if f2.discriminant != D:
        raise DiscriminantMismatch(f"cannot compose {f1} (D = {D}) with {f2} (D = {f2.discriminant})")
    if f1.a > f2.a:
        f1, f2 = f2, f1
    a1, b1 = f1.a, f1.b
    a2, b2, c2 = f2.a, f2.b, f2.c
    s = (b1 + b2) // 2
    n = b2 - s

    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        u, _, d = igcdex(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        u, v, d1 = igcdex(s, d)
        x2, y2 = u, -v

    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return QuadForm(int(a3), int(b3), int(c3)).reduce()


def form_pow(f: QuadForm, e: int) -> QuadForm:
    """f^e by square-and-multiply; negative e goes through the inverse."""
    if e < 0:
        return form_pow(f.inverse(), -e)
    result = QuadForm.identity(f.discriminant)
    base = f.reduce()
    while e:
        if e & 1:
            result = compose(result, base)
        base = compose(base, base)
        e >>= 1
    return result


def form_order(f: QuadForm, bound: int) -> int:
    """Order of f in the class group, searching up to bound."""
    identity = QuadForm.identity(f.discriminant)
    current = f.reduce()
    for k in range(1, bound + 1):
        if current == identity:
            return k
        current = compose(current, f)
    raise ValueError(f"order of {f} exceeds {bound}")


def is_fundamental(D: int) -> bool:
    """Negative fundamental discriminant test."""
    if D >= 0:
        return False
    if D % 4 == 1:
        return all(e == 1 for e in factorint(-D).values())
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and all(e == 1 for e in factorint(-m).values())
    return False


def _check_fundamental(D: int):
    if not is_fundamental(D):
        raise NotFundamental(f"{D} is not a negative fundamental discriminant")


def reduced_forms(D: int) -> Iterator[QuadForm]:
    """Reduced primitive forms of discriminant D, in order of a then b."""
    if D >= 0 or D % 4 not in (0, 1):
        raise NotFundamental(f"{D} is not a negative discriminant")
    for a in range(1, isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2 or (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            yield QuadForm(a, b, c)


def class_number(D: int) -> int:
    """
    Class number h(D) by counting reduced primitive forms.

    Raises:
        NotFundamental: D is not a negative fundamental discriminant
    """
    _check_fundamental(D)
    return sum(1 for _ in reduced_forms(D))


def generated_subgroup(generators: List[QuadForm], limit: int = 100_000) -> Set[QuadForm]:
    """Closure of a set of forms under composition."""
    if not generators:
        return set()
    identity = QuadForm.identity(generators[0].discriminant)
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for f in frontier:
            for g in generators:
                product = compose(f, g)
                if product not in seen:
                    seen.add(product)
                    nxt.append(product)
        if len(seen) > limit:
            raise ValueError(f"subgroup exceeds {limit} elements")
        frontier = nxt
    return seen


def small_generators(D: int, max_a: int = 0) -> List[QuadForm]:
    """Reduced forms with a <= max_a (default sqrt(|D|/3), every reduced form)."""
    max_a = max_a or isqrt(-D // 3)
    return [f for f in reduced_forms(D) if f.a <= max_a]
