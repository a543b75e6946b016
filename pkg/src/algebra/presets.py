"""
Shipped field presets.

Presets are stored in the compact presentation layout under src/algebra/data and are
built, saturated and validated on first load. Class representatives are attached
from the smallest split primes.
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, Optional

from src.algebra.field_spec import FieldSpec, load_field_spec
from src.algebra.validation import validate_field_spec
from src.errors import ConfigError

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / 'data'

PRESETS: Dict[str, str] = {
    'cubic9': 'cubic9.json',
    'quintic11': 'quintic11.json',
    'governing_e': 'governing_e.json',
}

ALIASES: Dict[str, str] = {
    'cubic': 'cubic9',
    'a': 'cubic9',
    'quintic': 'quintic11',
    'b': 'quintic11',
    'e': 'governing_e',
    'c': 'governing_e',
}


def preset_names():
    return sorted(PRESETS)


@lru_cache(maxsize=None)
def load_preset(name: str, with_class_reps: bool = True) -> FieldSpec:
    """
    Load a shipped preset by name or alias.

    Args:
        name: Preset name ('cubic9', 'quintic11', 'governing_e') or alias
        with_class_reps: Attach 2h class representatives

    Returns:
        Validated FieldSpec

    Raises:
        ConfigError: unknown preset
    """
    key = ALIASES.get(name.lower(), name.lower())
    if key not in PRESETS:
        raise ConfigError(f"unknown preset '{name}'; choose from {', '.join(preset_names())}")
    spec = load_field_spec(DATA_DIR / PRESETS[key])
    if with_class_reps and not spec.class_reps:
        from src.generators.principal import select_class_reps
        spec = select_class_reps(spec)
    logger.info(f"Loaded preset {spec.name} (degree {spec.degree}, D = {spec.discriminant})")
    return spec


def resolve_field(preset: Optional[str] = None, spec_path: Optional[Path] = None) -> FieldSpec:
    """Field from a preset name or a spec file; exactly one must be given."""
    if (preset is None) == (spec_path is None):
        raise ConfigError("give exactly one of a preset name or a field spec path")
    if preset is not None:
        return load_preset(preset)
    spec = load_field_spec(spec_path)
    validate_field_spec(spec)
    if not spec.class_reps:
        from src.generators.principal import select_class_reps
        spec = select_class_reps(spec)
    return spec
