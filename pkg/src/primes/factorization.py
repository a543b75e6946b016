"""
Decomposition of rational primes in O_K.

For a prime p we pick an integral element gamma whose characteristic polynomial is
squarefree mod p (the primitive element when possible). Then p is unramified, Z[gamma]
has index prime to p, and the prime ideals above p correspond to the irreducible
factors g of charpoly(gamma) mod p, with residue map w_i -> h_i(x) mod (p, g).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple

from sympy import GF, Matrix, ZZ, factorint, primerange
from sympy.polys.galoistools import (
    gf_add, gf_degree, gf_factor_sqf, gf_from_int_poly, gf_gcd, gf_pow_mod, gf_sqf_p, gf_sub
)
from sympy.polys.matrices import DomainMatrix

from src.algebra.elements import FieldElement, apply_automorphism, characteristic_polynomial, element_mul
from src.algebra.field_spec import FieldSpec
from src.errors import EvenPrime, RamifiedPrime
from src.primes.finite_fields import ResidueFieldElement
from src.primes.ideals import IdealLattice, hnf_from_generators, ideal_power

logger = logging.getLogger(__name__)

MAX_GENERATOR_CANDIDATES = 200


@dataclass(frozen=True)
class PGenerator:
    """Element gamma with squarefree charpoly mod p and the basis change to its powers."""

    p: int
    gamma: FieldElement
    charpoly: Tuple[int, ...]
    # residue_polys[i]: coefficients (highest first) of w_i as a polynomial in gamma mod p
    residue_polys: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True, eq=False)
class PrimeIdealData:
    """A prime ideal above p with its residue field map."""

    p: int
    f: int
    g_factor: Tuple[int, ...]
    lattice: IdealLattice
    residue_polys: Tuple[Tuple[int, ...], ...]
    orbit_index: int = 0
    # f = 1 only: residue of w_i is rho[i] mod p
    rho: Optional[Tuple[int, ...]] = None

    @property
    def norm(self) -> int:
        return self.p ** self.f

    @property
    def key(self):
        return self.lattice.key

    @property
    def root(self) -> Optional[int]:
        if self.f != 1:
            return None
        return (-self.g_factor[1]) % self.p

    def residue_int(self, a: FieldElement) -> int:
        """Residue of a for f = 1 ideals, in [0, p)."""
        return sum(r * x for r, x in zip(self.rho, a.coords)) % self.p

    def contains(self, a: FieldElement) -> bool:
        if self.rho is not None:
            return self.residue_int(a) == 0
        return self.lattice.contains(a)

    def __repr__(self):
        return f"<PrimeIdeal p={self.p} f={self.f} orbit={self.orbit_index}>"


def _candidates(spec: FieldSpec):
    n = spec.degree
    yield spec.primitive_element
    for i in range(1, n):
        yield FieldElement.basis(i, n)
    for k in range(1, MAX_GENERATOR_CANDIDATES):
        for i in range(1, n):
            for j in range(i + 1, n):
                yield FieldElement.basis(i, n) + FieldElement.basis(j, n).scale(k)
                yield FieldElement.basis(i, n) - FieldElement.basis(j, n).scale(k)


@lru_cache(maxsize=None)
def _charpoly(spec: FieldSpec, gamma: FieldElement) -> Tuple[int, ...]:
    return tuple(characteristic_polynomial(gamma, spec))


@lru_cache(maxsize=4096)
def p_generator(p: int, spec: FieldSpec) -> PGenerator:
    """
    Find gamma with charpoly(gamma) squarefree mod p.

    Raises:
        RamifiedPrime: no candidate works (p divides D_K)
    """
    n = spec.degree
    for count, gamma in enumerate(_candidates(spec)):
        if count > MAX_GENERATOR_CANDIDATES:
            break
        cp = _charpoly(spec, gamma)
        reduced = gf_from_int_poly(list(cp), p)
        if len(reduced) - 1 != n or not gf_sqf_p(reduced, p, ZZ):
            continue
        powers = [FieldElement.one(n)]
        for _ in range(n - 1):
            powers.append(element_mul(powers[-1], gamma, spec))
        matrix = Matrix([[powers[c].coords[r] for c in range(n)] for r in range(n)])
        inverse = matrix.inv_mod(p)
        residue_polys = []
        for i in range(n):
            # w_i = sum_j inverse[j, i] gamma^j
            coeffs = [int(inverse[j, i]) % p for j in range(n - 1, -1, -1)]
            residue_polys.append(tuple(gf_from_int_poly(coeffs, p)))
        if gamma != spec.primitive_element:
            logger.debug(f"p = {p}: using p-generator {gamma}")
        return PGenerator(p, gamma, cp, tuple(residue_polys))
    raise RamifiedPrime(f"no element with squarefree characteristic polynomial mod {p}")


def _check_prime(p: int, spec: FieldSpec):
    if p == 2:
        raise EvenPrime("p = 2 is excluded")
    if spec.discriminant % p == 0:
        raise RamifiedPrime(f"{p} divides the discriminant {spec.discriminant}")


def _f1_lattice(p: int, rho: Tuple[int, ...]) -> IdealLattice:
    n = len(rho)
    rows = [[0] * n for _ in range(n)]
    rows[0][0] = p
    for i in range(1, n):
        rows[0][i] = (-rho[i]) % p
        rows[i][i] = 1
    return IdealLattice(tuple(tuple(r) for r in rows), p)


def _residue_row(residue_polys, root: int, p: int) -> Tuple[int, ...]:
    out = []
    for poly in residue_polys:
        value = 0
        for c in poly:
            value = (value * root + c) % p
        out.append(value)
    return tuple(out)


def _general_lattice(p: int, g: List[int], residue_polys, n: int) -> IdealLattice:
    """Kernel of O_K -> F_p[x]/(g) as an HNF lattice."""
    f = len(g) - 1
    columns = []
    for poly in residue_polys:
        r = ResidueFieldElement.from_poly(list(poly), p, tuple(g))
        padded = [0] * (f - len(r.coeffs)) + list(r.coeffs)
        columns.append(padded)
    field = GF(p)
    matrix = DomainMatrix([[field(columns[c][r]) for c in range(n)] for r in range(f)], (f, n), field)
    kernel = matrix.nullspace().to_list()
    generators = [[int(field.to_int(x)) % p for x in row] for row in kernel]
    for i in range(n):
        e = [0] * n
        e[i] = p
        generators.append(e)
    hnf = hnf_from_generators(generators, n, multiple=p ** f)
    return IdealLattice(hnf, p ** f)


@lru_cache(maxsize=8192)
def factor_rational_prime(p: int, spec: FieldSpec) -> Tuple[PrimeIdealData, ...]:
    """
    Prime ideals above an odd unramified p, ordered by (root or factor).

    Raises:
        EvenPrime: p = 2
        RamifiedPrime: p | D_K
    """
    _check_prime(p, spec)
    gen = p_generator(p, spec)
    n = spec.degree
    poly = gf_from_int_poly(list(gen.charpoly), p)
    _, factors = gf_factor_sqf(poly, p, ZZ)
    factors = sorted(tuple(int(c) for c in g) for g in factors)
    degrees = {len(g) - 1 for g in factors}
    if len(degrees) != 1:
        raise ArithmeticError(f"unequal residue degrees {degrees} above {p}; field is not Galois")
    f = degrees.pop()

    ideals = []
    for g in factors:
        if f == 1:
            root = (-g[1]) % p
            rho = _residue_row(gen.residue_polys, root, p)
            lattice = _f1_lattice(p, rho)
        else:
            rho = None
            lattice = _general_lattice(p, list(g), gen.residue_polys, n)
        ideals.append(PrimeIdealData(p=p, f=f, g_factor=g, lattice=lattice,
                                     residue_polys=gen.residue_polys, rho=rho))
    if f == 1:
        ideals.sort(key=lambda P: P.root)
    return tuple(ideals)


def residue_map(a: FieldElement, P: PrimeIdealData) -> ResidueFieldElement:
    """Image of a in O_K / P."""
    if P.rho is not None:
        return ResidueFieldElement.from_int(P.residue_int(a), P.p, P.g_factor)
    total = [0]
    p = P.p
    for x, poly in zip(a.coords, P.residue_polys):
        if x % p:
            scaled = [(x * c) % p for c in poly]
            total = gf_add(total, scaled, p, ZZ)
    return ResidueFieldElement.from_poly(total, p, P.g_factor)


def count_roots(p: int, spec: FieldSpec) -> int:
    """Number of roots mod p of the p-generator's characteristic polynomial."""
    poly = gf_from_int_poly(list(_charpoly(spec, spec.primitive_element)), p)
    if not gf_sqf_p(poly, p, ZZ):
        poly = gf_from_int_poly(list(p_generator(p, spec).charpoly), p)
    xp = gf_pow_mod([1, 0], p, poly, p, ZZ)
    return gf_degree(gf_gcd(gf_sub(xp, [1, 0], p, ZZ), poly, p, ZZ))


def splits_completely(p: int, spec: FieldSpec) -> bool:
    """
    True iff p splits into n degree-one primes.

    Raises:
        EvenPrime, RamifiedPrime
    """
    _check_prime(p, spec)
    return count_roots(p, spec) == spec.degree


def conjugate_ideal(P: PrimeIdealData, index: int, spec: FieldSpec) -> PrimeIdealData:
    """sigma_index(P) for a degree-one prime: residue row rho . A_{sigma^-1}."""
    if P.rho is None:
        raise ValueError("conjugate_ideal is implemented for degree-one primes")
    inverse = spec.automorphisms[spec.inverse_index(index)]
    n = spec.degree
    rho = tuple(sum(P.rho[k] * inverse[k][j] for k in range(n)) % P.p for j in range(n))
    root = rho_to_root(rho, spec, P.p)
    return PrimeIdealData(p=P.p, f=1, g_factor=(1, (-root) % P.p), lattice=_f1_lattice(P.p, rho),
                          residue_polys=P.residue_polys, orbit_index=index, rho=rho)


def rho_to_root(rho: Tuple[int, ...], spec: FieldSpec, p: int) -> int:
    """Residue of the p-generator under the map with row rho."""
    gamma = p_generator(p, spec).gamma
    return sum(r * x for r, x in zip(rho, gamma.coords)) % p


def split_orbit(p: int, spec: FieldSpec) -> List[PrimeIdealData]:
    """
    Degree-one primes above a completely split p in Galois orbit order.

    Entry i is sigma_i(P0) where P0 has the smallest root.
    """
    ideals = factor_rational_prime(p, spec)
    base = ideals[0]
    return [conjugate_ideal(base, i, spec) for i in range(spec.degree)]


def split_prime_stream(X: int, spec: FieldSpec, start: int = 3) -> Iterator[Tuple[int, List[PrimeIdealData]]]:
    """
    Completely split odd unramified primes start <= p <= X with their orbits.

    Yields:
        (p, orbit) in increasing p
    """
    for p in primerange(max(3, start), X + 1):
        if spec.discriminant % p == 0:
            continue
        if count_roots(p, spec) == spec.degree:
            yield p, split_orbit(p, spec)


@lru_cache(maxsize=65536)
def conjugate_prime(P: PrimeIdealData, index: int, spec: FieldSpec) -> PrimeIdealData:
    """sigma_index(P), returned as the matching entry of factor_rational_prime(P.p)."""
    candidates = factor_rational_prime(P.p, spec)
    if index == 0:
        for Q in candidates:
            if Q.key == P.key:
                return Q
    if P.rho is not None:
        image = conjugate_ideal(P, index, spec)
        for Q in candidates:
            if Q.rho == image.rho:
                return Q
    else:
        images = [apply_automorphism(index, b, spec) for b in P.lattice.basis()]
        for Q in candidates:
            if all(Q.contains(x) for x in images):
                return Q
    raise ArithmeticError(f"no prime above {P.p} matches sigma_{index}({P})")


def factor_ideal(ideal: IdealLattice, spec: FieldSpec) -> List[Tuple[PrimeIdealData, int]]:
    """
    Prime factorization of an ideal of odd norm coprime to D_K.

    The exponent of P is the largest e with ideal contained in P^e.
    """
    out = []
    for p, e in sorted(factorint(ideal.norm).items()):
        remaining = e
        for P in factor_rational_prime(p, spec):
            k = 0
            power = P.lattice
            while remaining >= (k + 1) * P.f and power.contains_ideal(ideal):
                k += 1
                power = ideal_power(P.lattice, k + 1, spec)
            if k:
                out.append((P, k))
                remaining -= k * P.f
        if remaining:
            raise ArithmeticError(f"valuations above {p} do not account for p^{e} in N(ideal)")
    return out
