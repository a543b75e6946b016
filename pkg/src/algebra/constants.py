"""
The modulus F = 2^(2h+3) * f * |D_K|.
"""

from dataclasses import dataclass

from src.algebra.field_spec import FieldSpec
from src.algebra.validation import class_rep_norm_product
from src.errors import FNotSquarefree


@dataclass(frozen=True)
class BigFConstant:
    """F and its three factors."""

    two_power: int
    f: int
    abs_discriminant: int

    @property
    def F(self) -> int:
        return self.two_power * self.f * self.abs_discriminant

    def to_dict(self):
        return {
            'F': self.F,
            'two_power': self.two_power,
            'f': self.f,
            'abs_discriminant': self.abs_discriminant,
        }


def compute_bigF(spec: FieldSpec) -> BigFConstant:
    """
    Compute F for a spec with class representatives.

    Raises:
        FNotSquarefree: reps missing, even, of norm 1, or with non-squarefree norm product
    """
    if not spec.class_reps:
        raise FNotSquarefree(f"{spec.name} has no class representatives; f is undefined")
    if len(spec.class_reps) != 2 * spec.class_number:
        raise FNotSquarefree(f"expected {2 * spec.class_number} class representatives, got {len(spec.class_reps)}")
    f = class_rep_norm_product(spec)
    return BigFConstant(two_power=2 ** (2 * spec.class_number + 3), f=f,
                        abs_discriminant=abs(spec.discriminant))
