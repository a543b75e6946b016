"""Exact arithmetic in explicitly presented Galois number fields."""

from .elements import FieldElement, Modulus8Class, apply_automorphism, element_mul, norm
from .field_spec import FieldSpec, load_field_spec
from .presets import load_preset, resolve_field

__all__ = [
    'FieldElement', 'Modulus8Class', 'FieldSpec', 'apply_automorphism', 'element_mul', 'norm',
    'load_field_spec', 'load_preset', 'resolve_field',
]
