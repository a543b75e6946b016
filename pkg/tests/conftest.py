"""
Shared fixtures.

Presets are built and validated once per session; building E takes a few seconds.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.algebra.elements import FieldElement
from src.algebra.presets import load_preset


@pytest.fixture(scope='session')
def cubic():
    return load_preset('cubic9')


@pytest.fixture(scope='session')
def quintic():
    return load_preset('quintic11')


@pytest.fixture(scope='session')
def governing_e():
    return load_preset('governing_e')


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def element():
    """Build an element from coordinates: element(1, 3, 0)."""
    def build(*coords):
        return FieldElement.of(coords)
    return build


@pytest.fixture
def odd_unramified(rng):
    """Draw an element whose norm is odd, not +-1 and prime to the discriminant."""
    from math import gcd

    from src.algebra.elements import norm
    from src.symbols.reciprocity import random_odd_class

    def draw(spec):
        while True:
            b = random_odd_class(spec, rng)
            value = abs(norm(b, spec))
            if value > 1 and gcd(value, spec.discriminant) == 1:
                return b
    return draw
