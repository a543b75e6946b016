"""
Field spec validation.

Shipped field data is never trusted: every structural invariant is re-checked when
a spec is loaded, and the unit condition of totally real fields is decided by
enumerating sign vectors of unit classes.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple

import mpmath
from sympy import Matrix, Poly, Symbol, factorint

from src.algebra.elements import (
    FieldElement, apply_automorphism, characteristic_polynomial, element_mul, norm, trace
)
from src.algebra.embeddings import log_embedding, real_signs
from src.algebra.field_spec import FieldSpec
from src.algebra.units import check_torsion_order, find_unit_square, unit_product
from src.errors import FNotSquarefree, StructuralFailure, UnitConditionFailed

logger = logging.getLogger(__name__)

REGULATOR_FLOOR = 1e-6


@dataclass
class ValidationReport:
    """Outcome of validate_field_spec."""

    name: str
    checks: Dict[str, bool] = field(default_factory=dict)
    regulator: float = 0.0
    totally_positive_classes: int = 0
    unit_condition_verdict: bool = True
    f: Optional[int] = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'checks': dict(self.checks),
            'regulator': f"{self.regulator:.6f}",
            'totally_positive_classes': self.totally_positive_classes,
            'unit_condition': self.unit_condition_verdict,
            'f': self.f,
        }

    def rows(self) -> List[Tuple[str, str]]:
        out = [(name, 'ok' if ok else 'FAILED') for name, ok in self.checks.items()]
        out.append(('regulator', f"{self.regulator:.6f}"))
        out.append(('unit_condition', str(self.unit_condition_verdict)))
        return out


def _basis_starts_with_one(spec: FieldSpec) -> bool:
    n = spec.degree
    return all(
        tuple(spec.mult_table[0][j]) == FieldElement.basis(j, n).coords for j in range(n)
    )


def _commutative(spec: FieldSpec) -> bool:
    n = spec.degree
    return all(spec.mult_table[i][j] == spec.mult_table[j][i] for i in range(n) for j in range(n))


def _associative(spec: FieldSpec) -> bool:
    n = spec.degree
    basis = [FieldElement.basis(i, n) for i in range(n)]
    products = [[FieldElement(tuple(spec.mult_table[i][j])) for j in range(n)] for i in range(n)]
    for i, j, k in product(range(n), repeat=3):
        left = element_mul(products[i][j], basis[k], spec)
        right = element_mul(basis[i], products[j][k], spec)
        if left != right:
            return False
    return True


def _automorphisms_are_ring_maps(spec: FieldSpec) -> bool:
    n = spec.degree
    basis = [FieldElement.basis(i, n) for i in range(n)]
    for index in range(len(spec.automorphisms)):
        if apply_automorphism(index, basis[0], spec) != basis[0]:
            return False
        images = [apply_automorphism(index, b, spec) for b in basis]
        for i in range(n):
            for j in range(i, n):
                product_image = apply_automorphism(index, FieldElement(tuple(spec.mult_table[i][j])), spec)
                if product_image != element_mul(images[i], images[j], spec):
                    return False
    return True


def _automorphisms_form_group(spec: FieldSpec) -> bool:
    n = spec.degree
    if len(spec.automorphisms) != n:
        return False
    identity = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    if spec.automorphisms[0] != identity:
        return False
    if len(set(spec.automorphisms)) != n:
        return False
    table = spec.composition_table
    return all(k >= 0 for row in table for k in row)


def discriminant_of_basis(spec: FieldSpec) -> int:
    """det(Tr(w_i w_j)), exact."""
    n = spec.degree
    gram = [[trace(FieldElement(tuple(spec.mult_table[i][j])), spec) for j in range(n)] for i in range(n)]
    return int(Matrix(gram).det())


def regulator(spec: FieldSpec) -> float:
    """|det| of the unit log matrix with the last place dropped."""
    r = spec.unit_rank
    if r == 0:
        return 1.0
    rows = [log_embedding(u, spec)[:r] for u in spec.fundamental_units]
    return float(abs(mpmath.det(mpmath.matrix(rows))))


def unit_sign_classes(spec: FieldSpec) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """
    Sign vectors of +-prod u_j^e_j over all 2^(r+1) classes.

    Returns:
        List of ((sign bit, e_1..e_r), sign vector)
    """
    n = spec.degree
    out = []
    for bits in product((0, 1), repeat=len(spec.fundamental_units) + 1):
        element = unit_product(bits[1:], spec)
        if bits[0]:
            element = element.scale(-1)
        out.append((bits, real_signs(element, spec)))
    return out


def check_unit_condition(spec: FieldSpec) -> Tuple[bool, int]:
    """
    Decide whether every totally positive unit is a square.

    Returns:
        (verdict, number of totally positive classes including the trivial one)
    """
    if spec.is_totally_complex:
        return True, 1
    positive = [bits for bits, signs in unit_sign_classes(spec) if all(s > 0 for s in signs)]
    return len(positive) == 1, len(positive)


def class_rep_norm_product(spec: FieldSpec) -> int:
    """f = product of |N(rep)|; raises FNotSquarefree unless odd, proper and squarefree."""
    f = 1
    for rep in spec.class_reps:
        value = abs(norm(rep, spec))
        if value <= 1 or value % 2 == 0:
            raise FNotSquarefree(f"class representative {rep} has norm {value}; reps must be odd and proper")
        f *= value
    if any(e > 1 for e in factorint(f).values()):
        raise FNotSquarefree(f"f = {f} is not squarefree")
    return f


def validate_field_spec(spec: FieldSpec) -> ValidationReport:
    """
    Run every structural check on a spec.

    Args:
        spec: Field spec to check

    Returns:
        ValidationReport

    Raises:
        StructuralFailure: First violated invariant
        UnitConditionFailed: Flag set on a totally real field with a nontrivial
            totally positive unit class
    """
    report = ValidationReport(name=spec.name)
    n = spec.degree

    def require(name: str, ok: bool, detail: str = ""):
        report.checks[name] = ok
        if not ok:
            logger.error(f"{spec.name}: check {name} failed {detail}")
            raise StructuralFailure(name, detail)

    r1, r2 = spec.signature
    require('signature', r1 + 2 * r2 == n and (r1 == n or r1 == 0),
            "Galois fields are totally real or totally complex")
    require('shape', len(spec.mult_table) == n and all(len(row) == n for row in spec.mult_table))
    require('basis_starts_with_one', _basis_starts_with_one(spec))
    require('commutative', _commutative(spec))
    require('associative', _associative(spec))
    require('automorphism_group', _automorphisms_form_group(spec))
    require('automorphisms_ring_maps', _automorphisms_are_ring_maps(spec))

    x = Symbol('x')
    poly = characteristic_polynomial(spec.primitive_element, spec)
    require('defining_polynomial', tuple(poly) == tuple(spec.defining_polynomial)
            and Poly(poly, x).is_sqf, f"charpoly {poly}")

    disc = discriminant_of_basis(spec)
    require('discriminant', disc == spec.discriminant, f"det(Tr) = {disc}, declared {spec.discriminant}")

    require('torsion', check_torsion_order(spec))
    require('unit_count', len(spec.fundamental_units) == spec.unit_rank,
            f"{len(spec.fundamental_units)} units for rank {spec.unit_rank}")
    for u in spec.fundamental_units:
        require('unit_norm', abs(norm(u, spec)) == 1, f"{u} has norm {norm(u, spec)}")

    report.regulator = regulator(spec)
    require('regulator', report.regulator > REGULATOR_FLOOR, f"regulator {report.regulator}")

    square = find_unit_square(spec)
    require('unit_saturation', square is None, f"class {square[0] if square else ''} is a square")

    verdict, positive = check_unit_condition(spec)
    report.unit_condition_verdict = verdict
    report.totally_positive_classes = positive
    if spec.unit_condition and not verdict:
        raise UnitConditionFailed(f"{spec.name}: {positive - 1} nontrivial totally positive unit classes")

    if spec.class_reps:
        report.f = class_rep_norm_product(spec)

    logger.info(f"{spec.name}: validation passed (regulator {report.regulator:.4f}, "
                f"unit condition {verdict})")
    return report
