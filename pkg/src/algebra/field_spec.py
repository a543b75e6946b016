"""
FieldSpec: an explicitly presented Galois number field.

A FieldSpec is pure data (structure constants, automorphism matrices, units, class
number, discriminant) plus derived tables computed lazily. It is immutable and hashes
by identity so that caches keyed on a spec never compare large tables.
"""

import json
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix

from src.algebra.elements import FieldElement, element_mul, apply_automorphism
from src.errors import ConfigError

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """Integral basis presentation of a Galois field K of degree n (basis starts with 1)."""

    name: str
    degree: int
    defining_polynomial: Tuple[int, ...]
    mult_table: Tuple[Tuple[Tuple[int, ...], ...], ...]
    automorphisms: Tuple[IntMatrix, ...]
    signature: Tuple[int, int]
    torsion_order: int
    torsion_generator: FieldElement
    fundamental_units: Tuple[FieldElement, ...]
    class_number: int
    discriminant: int
    unit_condition: bool
    primitive_element: FieldElement
    class_reps: Tuple[FieldElement, ...] = field(default=())

    # Derived tables

    @cached_property
    def left_multiplication(self) -> Tuple[IntMatrix, ...]:
        """L_i with L_i[k][j] = coefficient of w_k in w_i * w_j."""
        n = self.degree
        return tuple(
            tuple(tuple(self.mult_table[i][j][k] for j in range(n)) for k in range(n))
            for i in range(n)
        )

    @property
    def is_totally_real(self) -> bool:
        return self.signature[1] == 0

    @property
    def is_totally_complex(self) -> bool:
        return self.signature[0] == 0

    @property
    def unit_rank(self) -> int:
        r1, r2 = self.signature
        return r1 + r2 - 1

    @cached_property
    def composition_table(self) -> Tuple[Tuple[int, ...], ...]:
        """composition_table[i][j] = k with sigma_i o sigma_j = sigma_k."""
        index = {matrix: k for k, matrix in enumerate(self.automorphisms)}
        table = []
        for a in self.automorphisms:
            row = []
            for b in self.automorphisms:
                product = _matmul(a, b)
                if product not in index:
                    row.append(-1)
                else:
                    row.append(index[product])
            table.append(tuple(row))
        return tuple(table)

    def compose(self, i: int, j: int) -> int:
        return self.composition_table[i][j]

    def inverse_index(self, i: int) -> int:
        row = self.composition_table[i]
        return row.index(0)

    def automorphism_order(self, i: int) -> int:
        k, order = i, 1
        while k != 0:
            k = self.compose(i, k)
            order += 1
            if order > self.degree:
                raise ValueError(f"automorphism {i} has no finite order within the group")
        return order

    def power_index(self, i: int, e: int) -> int:
        """Index of sigma_i ** e (e may be negative)."""
        if e < 0:
            i, e = self.inverse_index(i), -e
        k = 0
        for _ in range(e):
            k = self.compose(i, k)
        return k

    @cached_property
    def theta_powers(self) -> IntMatrix:
        """Columns are the coordinates of theta**0 .. theta**(n-1)."""
        n = self.degree
        powers = [FieldElement.one(n)]
        for _ in range(n - 1):
            powers.append(element_mul(powers[-1], self.primitive_element, self))
        return tuple(tuple(powers[c].coords[r] for c in range(n)) for r in range(n))

    @cached_property
    def basis_in_theta(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """Rational matrix C with w_i = sum_j C[j][i] theta**j."""
        inverse = Matrix(self.theta_powers).inv()
        n = self.degree
        return tuple(
            tuple(Fraction(int(inverse[r, c].p), int(inverse[r, c].q)) for c in range(n))
            for r in range(n)
        )

    def identity_element(self) -> FieldElement:
        return FieldElement.one(self.degree)

    def orbit(self, a: FieldElement) -> List[FieldElement]:
        return [apply_automorphism(i, a, self) for i in range(self.degree)]

    # Serialization

    def to_json(self) -> Dict:
        """Explicit layout; integers are decimal strings."""
        def s(values):
            if isinstance(values, (list, tuple)):
                return [s(v) for v in values]
            return str(int(values))

        return {
            'name': self.name,
            'degree': self.degree,
            'poly': s(self.defining_polynomial),
            'mult_table': s(self.mult_table),
            'automorphisms': s(self.automorphisms),
            'signature': list(self.signature),
            'torsion': {
                'order': self.torsion_order,
                'generator': s(self.torsion_generator.coords),
            },
            'units': [s(u.coords) for u in self.fundamental_units],
            'class_number': self.class_number,
            'discriminant': str(self.discriminant),
            'unit_condition': self.unit_condition,
            'primitive_element': s(self.primitive_element.coords),
            'class_reps': [s(r.coords) for r in self.class_reps],
        }

    def save(self, path: Path):
        Path(path).write_text(json.dumps(self.to_json(), indent=1))
        logger.info(f"Wrote field spec {self.name} to {path}")

    @classmethod
    def from_json(cls, data: Dict) -> 'FieldSpec':
        try:
            n = int(data['degree'])

            def vec(values) -> FieldElement:
                return FieldElement.of(int(v) for v in values)

            primitive = data.get('primitive_element')
            if primitive is None:
                primitive = [0, 1] + [0] * (n - 2)
            return cls(
                name=data.get('name', 'custom'),
                degree=n,
                defining_polynomial=tuple(int(c) for c in data['poly']),
                mult_table=tuple(
                    tuple(tuple(int(x) for x in cell) for cell in row) for row in data['mult_table']
                ),
                automorphisms=tuple(
                    tuple(tuple(int(x) for x in row) for row in matrix) for matrix in data['automorphisms']
                ),
                signature=(int(data['signature'][0]), int(data['signature'][1])),
                torsion_order=int(data['torsion']['order']),
                torsion_generator=vec(data['torsion']['generator']),
                fundamental_units=tuple(vec(u) for u in data['units']),
                class_number=int(data['class_number']),
                discriminant=int(data['discriminant']),
                unit_condition=bool(data['unit_condition']),
                primitive_element=vec(primitive),
                class_reps=tuple(vec(r) for r in data.get('class_reps', [])),
            )
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise ConfigError(f"Malformed field spec: {e}") from e

    def with_class_reps(self, reps: Sequence[FieldElement]) -> 'FieldSpec':
        return replace(self, class_reps=tuple(reps))


def _matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


def load_field_spec(path) -> FieldSpec:
    """
    Load a field spec file.

    Both the explicit layout and the compact presentation layout are accepted; the
    compact one is recognised by its 'generators' key.

    Args:
        path: JSON file path

    Returns:
        FieldSpec (not yet validated)
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Field spec file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"Field spec {path} is not valid JSON: {e}") from e

    if 'generators' in data:
        from src.algebra.presentation import build_field_spec
        return build_field_spec(data)
    return FieldSpec.from_json(data)
