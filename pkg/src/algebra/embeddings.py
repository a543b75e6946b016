"""
Numeric embeddings with adaptive precision.

Roots of the defining polynomial are ordered once and for all: real roots ascending,
then one root of each complex pair with positive imaginary part followed by its
conjugate, pairs sorted by (real, imaginary) part. Every numeric routine in the
package uses this order.
"""

import logging
from functools import lru_cache
from itertools import product
from typing import List, Optional, Tuple

import mpmath
import numpy as np

from src.algebra.elements import FieldElement, element_mul, norm
from src.algebra.field_spec import FieldSpec
from src.errors import PrecisionExhausted

logger = logging.getLogger(__name__)

MIN_PRECISION = 53
MAX_PRECISION = 4096
FLOAT_PRECISION = 200


@lru_cache(maxsize=64)
def ordered_roots(spec: FieldSpec, precision: int) -> Tuple:
    """Roots of the defining polynomial at `precision` bits, in embedding order."""
    with mpmath.workprec(precision + 32):
        roots = mpmath.polyroots(list(spec.defining_polynomial), maxsteps=400,
                                 extraprec=2 * precision)
        tolerance = mpmath.mpf(2) ** (-(precision // 2))
        real, upper = [], []
        for r in roots:
            scale = max(1, abs(r))
            if abs(mpmath.im(r)) <= tolerance * scale:
                real.append(mpmath.mpf(mpmath.re(r)))
            elif mpmath.im(r) > 0:
                upper.append(r)
        real.sort()
        upper.sort(key=lambda z: (mpmath.re(z), mpmath.im(z)))
        r1, r2 = spec.signature
        if len(real) != r1 or len(upper) != r2:
            raise PrecisionExhausted(
                f"{spec.name}: root signature ({len(real)}, {len(upper)}) != {spec.signature}"
            )
        ordered = [mpmath.mpc(r) for r in real]
        for z in upper:
            ordered.extend([z, mpmath.conj(z)])
        return tuple(ordered)


@lru_cache(maxsize=64)
def embedding_matrix(spec: FieldSpec, precision: int):
    """E[k][i] = value of basis element w_i at root k."""
    roots = ordered_roots(spec, precision)
    n = spec.degree
    coeffs = spec.basis_in_theta
    with mpmath.workprec(precision + 32):
        rows = []
        for r in roots:
            powers = [mpmath.mpc(1)]
            for _ in range(n - 1):
                powers.append(powers[-1] * r)
            rows.append([
                mpmath.fsum(mpmath.mpf(coeffs[j][i].numerator) / coeffs[j][i].denominator * powers[j]
                            for j in range(n))
                for i in range(n)
            ])
        return mpmath.matrix(rows)


def _evaluate(a: FieldElement, spec: FieldSpec, precision: int) -> List:
    matrix = embedding_matrix(spec, precision)
    n = spec.degree
    with mpmath.workprec(precision + 32):
        return [mpmath.fsum(matrix[k, i] * a.coords[i] for i in range(n) if a.coords[i])
                for k in range(n)]


def embeddings(a: FieldElement, spec: FieldSpec, precision: int = MIN_PRECISION) -> List:
    """
    Numeric conjugates of a.

    Precision doubles until the product of the conjugates agrees with the exact norm
    to relative error 2^(1 - precision/2).

    Args:
        a: Element
        spec: Field
        precision: Starting precision in bits (>= 53)

    Returns:
        List of n mpmath complex values in embedding order
    """
    precision = max(precision, MIN_PRECISION)
    exact = norm(a, spec)
    while precision <= MAX_PRECISION:
        values = _evaluate(a, spec, precision)
        with mpmath.workprec(precision + 32):
            approx = mpmath.re(mpmath.fprod(values))
            error = abs(approx - exact)
            if error <= mpmath.mpf(2) ** (1 - precision / 2) * max(1, abs(exact)):
                return values
        logger.warning(f"Embedding cross-check failed at {precision} bits, doubling")
        precision *= 2
    raise PrecisionExhausted(f"embeddings of {a} did not stabilise below {MAX_PRECISION} bits")


@lru_cache(maxsize=16)
def float_embedding_matrix(spec: FieldSpec) -> np.ndarray:
    """Complex128 embedding matrix computed at high precision."""
    matrix = embedding_matrix(spec, FLOAT_PRECISION)
    n = spec.degree
    return np.array([[complex(matrix[k, i]) for i in range(n)] for k in range(n)], dtype=complex)


@lru_cache(maxsize=16)
def minkowski_matrix(spec: FieldSpec) -> np.ndarray:
    """
    Real n x n matrix M with T2(a) = |M a|^2.

    Rows: one per real place, then sqrt(2)*Re and sqrt(2)*Im for each complex pair.
    """
    emb = float_embedding_matrix(spec)
    r1, r2 = spec.signature
    rows = [emb[k].real for k in range(r1)]
    for pair in range(r2):
        k = r1 + 2 * pair
        rows.append(np.sqrt(2.0) * emb[k].real)
        rows.append(np.sqrt(2.0) * emb[k].imag)
    return np.array(rows, dtype=float)


def place_indices(spec: FieldSpec) -> List[int]:
    """Index of one embedding per archimedean place."""
    r1, r2 = spec.signature
    return list(range(r1)) + [r1 + 2 * pair for pair in range(r2)]


def log_embedding(a: FieldElement, spec: FieldSpec, precision: int = 64) -> List:
    """Vector of (local degree) * log|a|_v over places (length r1 + r2)."""
    values = embeddings(a, spec, precision)
    r1, _ = spec.signature
    out = []
    with mpmath.workprec(max(precision, MIN_PRECISION) + 32):
        for k in place_indices(spec):
            weight = 1 if k < r1 else 2
            out.append(weight * mpmath.log(abs(values[k])))
    return out


def real_signs(a: FieldElement, spec: FieldSpec) -> Tuple[int, ...]:
    """Signs of a under the real embeddings (float first, exact-checked fallback)."""
    r1, _ = spec.signature
    if r1 == 0:
        return ()
    matrix = float_embedding_matrix(spec).real[:r1]
    coords = np.array([float(x) for x in a.coords])
    values = matrix @ coords
    margin = 1e-9 * (np.abs(matrix) @ np.abs(coords))
    if np.all(np.abs(values) > margin):
        return tuple(1 if v > 0 else -1 for v in values)
    values = embeddings(a, spec, 256)
    return tuple(1 if mpmath.re(values[k]) > 0 else -1 for k in range(r1))


def is_totally_positive(a: FieldElement, spec: FieldSpec) -> bool:
    return all(s > 0 for s in real_signs(a, spec))


def element_from_embeddings(values, spec: FieldSpec, precision: int) -> Optional[FieldElement]:
    """Round E^-1 * values to integer coordinates; None when far from integral."""
    matrix = embedding_matrix(spec, precision)
    with mpmath.workprec(precision + 32):
        vector = mpmath.matrix([[v] for v in values])
        coords = mpmath.lu_solve(matrix, vector)
        out = []
        for i in range(spec.degree):
            x = mpmath.re(coords[i])
            nearest = int(mpmath.nint(x))
            if abs(x - nearest) > mpmath.mpf('0.25'):
                return None
            out.append(nearest)
    return FieldElement(tuple(out))


def element_sqrt(a: FieldElement, spec: FieldSpec) -> Optional[FieldElement]:
    """
    Square root of a in O_K, or None.

    Tries every sign pattern of numeric square roots over the places (conjugate
    embeddings share a sign) and verifies candidates exactly.
    """
    if a.is_zero():
        return a
    r1, r2 = spec.signature
    precision = 128
    size = max(abs(float(mpmath.re(v))) + abs(float(mpmath.im(v))) for v in embeddings(a, spec))
    precision = max(precision, int(np.log2(size + 2)) * 2 + 64)
    values = embeddings(a, spec, precision)
    with mpmath.workprec(precision + 32):
        roots = [mpmath.sqrt(mpmath.mpc(v)) for v in values]
    for pattern in product((1, -1), repeat=r1 + r2 - 1):
        signs = (1,) + pattern
        candidate = []
        for k in range(r1):
            candidate.append(signs[k] * roots[k])
        for pair in range(r2):
            k = r1 + 2 * pair
            z = signs[r1 + pair] * roots[k]
            candidate.extend([z, mpmath.conj(z)])
        element = element_from_embeddings(candidate, spec, precision)
        if element is not None and element_mul(element, element, spec) == a:
            return element
    return None
