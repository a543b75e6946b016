"""
Lattice reduction and short-vector enumeration.

Ideal lattices are embedded with the Minkowski map, scaled to integers and
LLL-reduced (sympy DomainMatrix.lll_transform). Short vectors under the float Gram
matrix are then enumerated Fincke-Pohst style.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np
from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from src.algebra.embeddings import minkowski_matrix
from src.algebra.field_spec import FieldSpec
from src.primes.ideals import IdealLattice

logger = logging.getLogger(__name__)

SCALE_BITS = 40
LLL_DELTA = QQ(99, 100)


@dataclass
class ReducedIdealBasis:
    """LLL-reduced basis of an ideal with its Minkowski images."""

    # rows are integer coordinate vectors of the reduced basis elements
    basis: np.ndarray
    # rows are Minkowski images of the basis rows
    images: np.ndarray

    @property
    def gram(self) -> np.ndarray:
        return self.images @ self.images.T

    def combine(self, vectors: np.ndarray) -> np.ndarray:
        """Integer coordinates (rows) of sum x_i b_i for each row x."""
        return vectors @ self.basis


def reduce_ideal_basis(ideal: IdealLattice, spec: FieldSpec) -> ReducedIdealBasis:
    """
    LLL-reduce the ideal lattice under the Minkowski quadratic form.

    Args:
        ideal: Ideal in HNF
        spec: Field

    Returns:
        ReducedIdealBasis
    """
    n = spec.degree
    mink = minkowski_matrix(spec)
    columns = np.array(ideal.hnf, dtype=object)
    basis_rows = [[int(columns[r][c]) for r in range(n)] for c in range(n)]
    images = np.array([mink @ np.array(row, dtype=float) for row in basis_rows])
    scale = 2.0 ** SCALE_BITS / max(1.0, float(np.abs(images).max()))
    scaled = [[ZZ(int(round(x * scale))) for x in row] for row in images]
    _, transform = DomainMatrix(scaled, (n, n), ZZ).lll_transform(delta=LLL_DELTA)
    t = [[int(x) for x in row] for row in transform.to_list()]
    reduced_rows = [[sum(t[i][k] * basis_rows[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    basis = np.array(reduced_rows, dtype=object)
    reduced_images = np.array([mink @ np.array(row, dtype=float) for row in reduced_rows])
    return ReducedIdealBasis(basis=basis, images=reduced_images)


def short_vectors(gram: np.ndarray, radius: float, limit: int = 100_000) -> Iterator[Tuple[np.ndarray, float]]:
    """
    Enumerate x != 0 (one of each +-pair) with x^T G x <= radius.

    Args:
        gram: Positive definite Gram matrix
        radius: Squared-length bound
        limit: Maximum number of vectors yielded

    Yields:
        (integer vector, squared length)
    """
    n = gram.shape[0]
    chol = np.linalg.cholesky(gram).T
    q = np.zeros((n, n))
    for i in range(n):
        q[i, i] = chol[i, i] ** 2
        for j in range(i + 1, n):
            q[i, j] = chol[i, j] / chol[i, i]

    radius = radius * (1 + 1e-9)
    x = np.zeros(n, dtype=np.int64)
    remaining = np.zeros(n)
    center = np.zeros(n)
    upper = np.zeros(n, dtype=np.int64)

    def start_level(i):
        center[i] = -sum(q[i, j] * x[j] for j in range(i + 1, n))
        span = np.sqrt(max(remaining[i], 0.0) / q[i, i])
        upper[i] = int(np.floor(center[i] + span))
        x[i] = int(np.ceil(center[i] - span)) - 1

    i = n - 1
    remaining[i] = radius
    start_level(i)
    produced = 0
    while True:
        x[i] += 1
        if x[i] > upper[i]:
            i += 1
            if i >= n:
                return
            continue
        if i > 0:
            offset = x[i] - center[i]
            remaining[i - 1] = remaining[i] - q[i, i] * offset * offset
            i -= 1
            start_level(i)
            continue
        if not x.any():
            return
        length = radius - remaining[0] + q[0, 0] * (x[0] - center[0]) ** 2
        yield x.copy(), float(length)
        produced += 1
        if produced >= limit:
            logger.debug(f"short_vectors: stopped at limit {limit}")
            return
