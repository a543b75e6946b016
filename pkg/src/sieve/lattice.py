"""
Counting oracles for the lattice estimates behind the type I sum.

alpha = a + beta with a in Z and beta in the complement M of Z. For an automorphism
sigma the map beta -> beta - sigma(beta) sends O_K onto a sublattice M'' of rank
r = n(1 - 1/ord(sigma)); its points divisible by an ideal g form Lambda_g. The probes
count Lambda_g in a coordinate box exactly and compare with the shape x^(r/n) / g^(r/n),
and count beta whose two difference norms share a large common factor.
"""

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from src.algebra.elements import FieldElement, apply_automorphism, norm
from src.algebra.embeddings import float_embedding_matrix
from src.algebra.field_spec import FieldSpec
from src.errors import CeilingExceeded
from src.generators.enumeration import box_size, box_slabs
from src.primes.ideals import IdealLattice
from src.symbols.residue import residue_symbol

logger = logging.getLogger(__name__)

PROBE_CEILING = 10 ** 6


def decompose_a_beta(alpha: FieldElement) -> Tuple[int, FieldElement]:
    """alpha = a + beta with a the coordinate on 1 and beta in the span of the other basis elements."""
    a = alpha.coords[0]
    return a, FieldElement((0,) + alpha.coords[1:])


def spin_identity_holds(alpha: FieldElement, i: int, spec: FieldSpec) -> bool:
    """(alpha / sigma(alpha)) == ((beta - sigma(beta)) / (a + sigma(beta)))."""
    a, beta = decompose_a_beta(alpha)
    sigma_beta = apply_automorphism(i, beta, spec)
    left = residue_symbol(alpha, apply_automorphism(i, alpha, spec), spec)
    right = residue_symbol(beta - sigma_beta, FieldElement.rational(a, spec.degree) + sigma_beta, spec)
    return left == right


def difference_image_basis(i: int, spec: FieldSpec) -> np.ndarray:
    """
    Z-basis (columns) of M'' = {beta - sigma_i(beta)}.

    Returns:
        n x r integer matrix in column Hermite normal form
    """
    n = spec.degree
    A = spec.automorphisms[i]
    columns = [[int(r == c) - A[r][c] for c in range(n)] for r in range(n)]
    hnf = hermite_normal_form(DomainMatrix([[ZZ(x) for x in row] for row in columns], (n, n), ZZ))
    return np.array([[int(x) for x in row] for row in hnf.to_list()], dtype=np.int64)


def _membership_mask(points: np.ndarray, ideal: IdealLattice) -> np.ndarray:
    """Rows of points (coordinates in O_K) that lie in the ideal, by vectorised back substitution."""
    n = ideal.degree
    residual = points.copy()
    mask = np.ones(points.shape[0], dtype=bool)
    H = np.array(ideal.hnf, dtype=np.int64)
    for k in range(n - 1, -1, -1):
        q, r = np.divmod(residual[:, k], H[k, k])
        mask &= r == 0
        residual[:, :k + 1] -= np.outer(q, H[:k + 1, k])
    return mask


@dataclass
class SieveLatticeProbe:
    """Lambda_g inside M'' for one automorphism and one ideal."""

    sigma: int
    ideal: IdealLattice
    spec: FieldSpec = field(repr=False)
    box_constant: float = 1.0

    def __post_init__(self):
        self.basis = difference_image_basis(self.sigma, self.spec)
        expected = self.spec.degree - self.spec.degree // self.spec.automorphism_order(self.sigma)
        if self.basis.shape[1] != expected:
            raise ArithmeticError(f"rank of M'' is {self.basis.shape[1]}, expected {expected}")

    @property
    def order(self) -> int:
        return self.spec.automorphism_order(self.sigma)

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def g(self) -> int:
        return self.ideal.norm

    def radius(self, x: float) -> int:
        return int(np.floor(self.box_constant * x ** (1.0 / self.spec.degree) + 1e-9))

    def bound(self, x: float) -> float:
        return (x / self.g) ** (self.rank / self.spec.degree)


@dataclass
class LatticeCount:
    """Exact count of Lambda_g in T_x against the bound shape."""

    x: float
    g: int
    rank: int
    radius: int
    box_points: int
    count: int
    bound: float
    # shortest nonzero point of Lambda_g in T_x; exact first minimum when <= radius
    first_minimum: Optional[float]

    @property
    def ratio(self) -> float:
        return self.count / self.bound if self.bound else 0.0

    @property
    def minimum_is_exact(self) -> bool:
        return self.first_minimum is not None and self.first_minimum <= self.radius

    def to_dict(self) -> Dict:
        return {
            'x': self.x,
            'g': self.g,
            'rank': self.rank,
            'radius': self.radius,
            'box_points': self.box_points,
            'count': self.count,
            'bound': self.bound,
            'ratio': self.ratio,
            'first_minimum': self.first_minimum,
        }


def lattice_count_probe(probe: SieveLatticeProbe, x: float, ceiling: int = PROBE_CEILING) -> LatticeCount:
    """
    |Lambda_g cap T_x| by exhaustive enumeration of the coordinate box.

    Args:
        probe: M'' basis and ideal g
        x: Box parameter (|a_i| <= C x^(1/n))
        ceiling: Maximum number of box points

    Raises:
        CeilingExceeded: the box exceeds the ceiling
    """
    R = probe.radius(x)
    radii = [R] * probe.rank
    size = box_size(radii)
    if size > ceiling:
        raise CeilingExceeded(f"lattice probe box has {size} points, ceiling {ceiling}")
    count = 0
    shortest = None
    for block in box_slabs(radii):
        inside = _membership_mask(block @ probe.basis.T, probe.ideal)
        nonzero = inside & block.any(axis=1)
        count += int(inside.sum())
        if nonzero.any():
            lengths = np.sqrt((block[nonzero].astype(float) ** 2).sum(axis=1))
            low = float(lengths.min())
            shortest = low if shortest is None else min(shortest, low)
    result = LatticeCount(x=x, g=probe.g, rank=probe.rank, radius=R, box_points=size, count=count,
                          bound=probe.bound(x), first_minimum=shortest)
    logger.debug(f"lattice probe sigma{probe.sigma}, g = {probe.g}, x = {x}: {count} points")
    return result


@dataclass
class GcdStatistics:
    """Counts of beta in M with gcd(f1(beta), f2(beta)) > Z."""

    x: float
    sigma: int
    tau: int
    box_points: int
    counts: Dict[int, int]
    proportional: bool

    def rows(self) -> List[Dict]:
        return [{'x': self.x, 'Z': z, 'count': c, 'box_points': self.box_points}
                for z, c in sorted(self.counts.items())]


def _difference_matrix(i: int, spec: FieldSpec) -> np.ndarray:
    """Coordinates of sigma_i(omega_k) - omega_k for k = 2..n, as columns."""
    n = spec.degree
    A = spec.automorphisms[i]
    return np.array([[A[r][c] - int(r == c) for c in range(1, n)] for r in range(n)], dtype=float)


def _box_radius_for_m(x: float, spec: FieldSpec) -> List[int]:
    """Coordinate bounds of beta in M with every |beta^(i)| <= x^(1/n)."""
    inverse = np.linalg.inv(float_embedding_matrix(spec))
    scale = x ** (1.0 / spec.degree)
    radii = scale * np.abs(inverse).sum(axis=1)
    return [int(np.floor(r + 1e-9)) for r in radii[1:]]


def forms_proportional(i: int, j: int, spec: FieldSpec, samples: int = 20, seed: int = 0) -> bool:
    """
    Whether f1 = N(sigma_i(beta) - beta) and f2 = N(sigma_j(beta) - beta) agree up to a constant.

    Proportional forms satisfy f1(v) f2(w) = f1(w) f2(v) for all v, w; one violated
    pair decides.
    """
    rng = np.random.default_rng(seed)
    n = spec.degree

    def values(coords):
        beta = FieldElement((0,) + tuple(int(c) for c in coords))
        return (norm(apply_automorphism(i, beta, spec) - beta, spec),
                norm(apply_automorphism(j, beta, spec) - beta, spec))

    points = [values(rng.integers(-5, 6, size=n - 1)) for _ in range(samples)]
    for (f1v, f2v), (f1w, f2w) in zip(points, points[1:]):
        if f1v * f2w != f1w * f2v:
            return False
    return True


def gcd_statistics(x: float, Z: Sequence[int], sigma: int, tau: int, spec: FieldSpec,
                   ceiling: int = PROBE_CEILING) -> GcdStatistics:
    """
    Count beta in M with |beta^(i)| <= x^(1/n) and gcd(f1(beta), f2(beta)) > Z, for each Z.

    Norms are evaluated in floating point from the embeddings and rounded; the box is
    small enough that they stay far below 2^53.

    Raises:
        CeilingExceeded: the coordinate box exceeds the ceiling
        ValueError: sigma == tau
    """
    if sigma == tau:
        raise ValueError("sigma and tau must differ")
    radii = _box_radius_for_m(x, spec)
    size = box_size(radii)
    if size > ceiling:
        raise CeilingExceeded(f"gcd statistics box has {size} points, ceiling {ceiling}")
    emb = float_embedding_matrix(spec)
    limit = x ** (1.0 / spec.degree) * (1 + 1e-9)
    d1 = emb @ _difference_matrix(sigma, spec)
    d2 = emb @ _difference_matrix(tau, spec)
    beta_emb = emb[:, 1:]
    thresholds = sorted(int(z) for z in Z)
    counts = {z: 0 for z in thresholds}
    inside_total = 0
    for block in box_slabs(radii):
        values = block.astype(float)
        conj = values @ beta_emb.T
        keep = np.all(np.abs(conj) <= limit, axis=1)
        if not keep.any():
            continue
        values = values[keep]
        inside_total += int(keep.sum())
        f1 = np.rint(np.prod(values @ d1.T, axis=1).real).astype(np.int64)
        f2 = np.rint(np.prod(values @ d2.T, axis=1).real).astype(np.int64)
        common = np.gcd(f1, f2)
        for z in thresholds:
            counts[z] += int((common > z).sum())
    proportional = forms_proportional(sigma, tau, spec)
    if proportional:
        logger.warning(f"f1 and f2 look proportional for sigma{sigma}, sigma{tau}")
    return GcdStatistics(x=x, sigma=sigma, tau=tau, box_points=inside_total, counts=counts,
                         proportional=proportional)


def squarefull_bound_exponents(order: int) -> Tuple[float, float]:
    """(x exponent, Z exponent) of the squarefull-count bound x^(1 - 1/ord) Z^(-1 + 2/ord)."""
    return 1 - 1 / order, -1 + 2 / order


def gcd_of_norms(beta: FieldElement, sigma: int, tau: int, spec: FieldSpec) -> int:
    """Exact gcd(N(sigma(beta) - beta), N(tau(beta) - beta))."""
    return gcd(norm(apply_automorphism(sigma, beta, spec) - beta, spec),
               norm(apply_automorphism(tau, beta, spec) - beta, spec))
