"""
Presentation builder.

Turns a compact field description (generators with triangular monic relations, an
integral basis written as rational expressions, automorphisms as generator images,
units and torsion as expressions) into a FieldSpec. All arithmetic is exact: sympy
reduces expressions modulo the relations and the basis change is a rational matrix
inverse.
"""

import logging
from fractions import Fraction
from itertools import product
from typing import Dict, List, Sequence

from sympy import Matrix, Poly, QQ, Rational, Symbol, expand, reduced, sympify

from src.algebra.elements import FieldElement, characteristic_polynomial
from src.algebra.field_spec import FieldSpec
from src.errors import ConfigError, StructuralFailure

logger = logging.getLogger(__name__)


class Presentation:
    """Q-algebra Q[g_1..g_m] / (triangular monic relations) with a chosen integral basis."""

    def __init__(self, generators: Sequence[str], relations: Sequence[str],
                 integral_basis: Sequence[str]):
        self.symbols = [Symbol(g) for g in generators]
        self._locals = {g: s for g, s in zip(generators, self.symbols)}
        self.relations = [expand(self.parse(r)) for r in relations]
        if len(self.relations) != len(self.symbols):
            raise ConfigError("need exactly one relation per generator")

        self.degrees = []
        for k, (sym, rel) in enumerate(zip(self.symbols, self.relations)):
            poly = Poly(rel, sym)
            if poly.LC() != 1:
                raise ConfigError(f"relation {k} is not monic in {sym}")
            self.degrees.append(poly.degree())
            later = set(self.symbols[k + 1:])
            if rel.free_symbols & later:
                raise ConfigError(f"relation {k} is not triangular")

        self.lex_order = list(reversed(self.symbols))
        self.monomials = list(product(*[range(d) for d in self.degrees]))
        self.monomial_index = {m: i for i, m in enumerate(self.monomials)}
        self.degree = len(self.monomials)

        basis_vectors = [self.monomial_vector(self.parse(b)) for b in integral_basis]
        if len(basis_vectors) != self.degree:
            raise ConfigError(f"integral basis has {len(basis_vectors)} elements, expected {self.degree}")
        basis = Matrix([[Rational(v.numerator, v.denominator) for v in column]
                        for column in basis_vectors]).T
        if basis.det() == 0:
            raise ConfigError("integral basis is linearly dependent")
        self._basis_inverse = basis.inv()
        self.basis_expressions = [self.parse(b) for b in integral_basis]

    def parse(self, text: str):
        return sympify(text, locals=self._locals)

    def monomial_vector(self, expr) -> List[Fraction]:
        """Coordinates of expr in the monomial basis after reduction."""
        _, remainder = reduced(expand(expr), self.relations, *self.lex_order, order='lex', domain=QQ)
        vector = [Fraction(0)] * self.degree
        if remainder == 0:
            return vector
        poly = Poly(remainder, *self.symbols, domain=QQ)
        for exponents, coeff in poly.as_dict(native=False).items():
            coeff = Rational(coeff)
            vector[self.monomial_index[tuple(exponents)]] = Fraction(int(coeff.p), int(coeff.q))
        return vector

    def coordinates(self, expr, what: str = "expression") -> FieldElement:
        """Integral-basis coordinates of expr; StructuralFailure if not integral."""
        monomial = self.monomial_vector(expr)
        vector = Matrix([Rational(v.numerator, v.denominator) for v in monomial])
        coords = self._basis_inverse * vector
        out = []
        for value in coords:
            value = Rational(value)
            if value.q != 1:
                raise StructuralFailure("integrality", f"{what} is not in the integral basis span")
            out.append(int(value.p))
        return FieldElement(tuple(out))

    def substitute(self, expr, images: Sequence):
        return expr.subs(dict(zip(self.symbols, images)), simultaneous=True)


def _primitive_element(spec_stub: FieldSpec) -> FieldElement:
    """First basis element (or w_1 + k*w_j) whose characteristic polynomial is squarefree."""
    n = spec_stub.degree
    candidates = [FieldElement.basis(i, n) for i in range(1, n)]
    for j in range(2, n):
        for k in (1, 2, 3, -1):
            candidates.append(FieldElement.basis(1, n) + FieldElement.basis(j, n).scale(k))
    x = Symbol('x')
    for candidate in candidates:
        charpoly = characteristic_polynomial(candidate, spec_stub)
        if Poly(charpoly, x).is_sqf:
            return candidate
    raise StructuralFailure("primitive_element", "no candidate with squarefree characteristic polynomial")


def build_field_spec(data: Dict, validate: bool = True) -> FieldSpec:
    """
    Build a FieldSpec from the compact presentation layout.

    Args:
        data: Parsed JSON with keys name, generators, relations, integral_basis,
            automorphisms, units, torsion, signature, class_number, discriminant,
            unit_condition
        validate: Run validate_field_spec (with unit 2-saturation) before returning

    Returns:
        FieldSpec
    """
    try:
        presentation = Presentation(data['generators'], data['relations'], data['integral_basis'])
        n = presentation.degree
        logger.info(f"Building field {data.get('name')} of degree {n}")

        basis = presentation.basis_expressions
        mult_table = []
        for i in range(n):
            row = []
            for j in range(n):
                row.append(presentation.coordinates(basis[i] * basis[j], f"w{i}*w{j}").coords)
            mult_table.append(tuple(row))

        automorphisms = []
        for images in data['automorphisms']:
            parsed = [presentation.parse(im) for im in images]
            columns = [presentation.coordinates(presentation.substitute(b, parsed), "automorphism image").coords
                       for b in basis]
            automorphisms.append(tuple(tuple(columns[c][r] for c in range(n)) for r in range(n)))

        units = [presentation.coordinates(presentation.parse(u), "unit") for u in data['units']]
        torsion = data['torsion']
        torsion_generator = presentation.coordinates(presentation.parse(torsion['generator']), "torsion")

        stub = FieldSpec(
            name=data['name'],
            degree=n,
            defining_polynomial=(),
            mult_table=tuple(mult_table),
            automorphisms=tuple(automorphisms),
            signature=(int(data['signature'][0]), int(data['signature'][1])),
            torsion_order=int(torsion['order']),
            torsion_generator=torsion_generator,
            fundamental_units=tuple(units),
            class_number=int(data['class_number']),
            discriminant=int(data['discriminant']),
            unit_condition=bool(data['unit_condition']),
            primitive_element=FieldElement.basis(1, n),
        )
    except KeyError as e:
        raise ConfigError(f"presentation is missing key {e}") from e

    theta = _primitive_element(stub)
    poly = characteristic_polynomial(theta, stub)
    spec = FieldSpec(
        name=stub.name, degree=n, defining_polynomial=tuple(poly), mult_table=stub.mult_table,
        automorphisms=stub.automorphisms, signature=stub.signature,
        torsion_order=stub.torsion_order, torsion_generator=stub.torsion_generator,
        fundamental_units=stub.fundamental_units, class_number=stub.class_number,
        discriminant=stub.discriminant, unit_condition=stub.unit_condition,
        primitive_element=theta,
    )
    logger.info(f"{spec.name}: primitive element {theta}, defining polynomial {list(poly)}")

    if validate:
        from src.algebra.units import saturate_units
        from src.algebra.validation import validate_field_spec
        spec = saturate_units(spec)
        validate_field_spec(spec)
    return spec
