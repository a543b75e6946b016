"""
Spin configuration: the automorphism set S, the class function psi and F.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from src.algebra.constants import BigFConstant, compute_bigF
from src.algebra.elements import FieldElement, element_mul
from src.algebra.field_spec import FieldSpec
from src.errors import ConfigError

logger = logging.getLogger(__name__)

PSI_SAMPLES = 200


@dataclass(frozen=True, eq=False)
class PsiTable:
    """
    Class function on residues modulo `modulus`.

    Keys are coordinate vectors reduced into [0, modulus). Residues missing from the
    table take `default`. modulus = 1 is the trivial function.
    """

    name: str = 'trivial'
    modulus: int = 1
    values: Dict[Tuple[int, ...], int] = field(default_factory=dict)
    default: int = 1

    @classmethod
    def trivial(cls) -> 'PsiTable':
        return cls()

    @property
    def is_trivial(self) -> bool:
        return self.modulus == 1 and not self.values and self.default == 1

    def residue_key(self, a: FieldElement) -> Tuple[int, ...]:
        return tuple(x % self.modulus for x in a.coords)

    def __call__(self, a: FieldElement) -> int:
        if self.modulus == 1:
            return self.default
        return self.values.get(self.residue_key(a), self.default)

    def to_json(self) -> Dict:
        return {
            'name': self.name,
            'modulus': str(self.modulus),
            'default': self.default,
            'values': [{'residue': list(k), 'value': v} for k, v in sorted(self.values.items())],
        }

    @classmethod
    def load(cls, path) -> 'PsiTable':
        """Read a psi table from JSON; ConfigError when missing or malformed."""
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"psi table not found: {path}")
        try:
            data = json.loads(path.read_text())
            modulus = int(data['modulus'])
            values = {
                tuple(int(x) % modulus for x in entry['residue']): int(entry['value'])
                for entry in data.get('values', [])
            }
            table = cls(name=data.get('name', path.stem), modulus=modulus, values=values,
                        default=int(data.get('default', 1)))
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as e:
            raise ConfigError(f"malformed psi table {path}: {e}") from e
        if any(v not in (-1, 0, 1) for v in list(table.values.values()) + [table.default]):
            raise ConfigError(f"psi table {path} has values outside {{-1, 0, 1}}")
        return table


def check_S_valid(S: Iterable[int], spec: FieldSpec) -> bool:
    """sigma in S implies sigma^-1 not in S (so the identity and involutions are excluded)."""
    indices = list(S)
    if len(set(indices)) != len(indices):
        return False
    if any(i < 0 or i >= spec.degree for i in indices):
        return False
    chosen = set(indices)
    return all(spec.inverse_index(i) not in chosen for i in indices)


def psi_is_unit_square_invariant(psi: PsiTable, spec: FieldSpec, samples: int = PSI_SAMPLES,
                                 seed: int = 0) -> bool:
    """Sample psi(u^2 a) == psi(a) over random residues and every table key."""
    if psi.modulus == 1:
        return True
    rng = np.random.default_rng(seed)
    squares = [element_mul(u, u, spec) for u in spec.fundamental_units]
    points = [FieldElement.of(k) for k in psi.values]
    points += [FieldElement.of(rng.integers(0, psi.modulus, size=spec.degree)) for _ in range(samples)]
    for a in points:
        base = psi(a)
        for square in squares:
            if psi(element_mul(square, a, spec)) != base:
                logger.warning(f"psi {psi.name} is not unit-square invariant at {a}")
                return False
    return True


@dataclass(frozen=True, eq=False)
class SpinConfig:
    """S, psi and F for joint spins."""

    S: Tuple[int, ...]
    psi: PsiTable
    F: Optional[BigFConstant] = None

    @property
    def t(self) -> int:
        return len(self.S)

    @classmethod
    def build(cls, S: Sequence[int], spec: FieldSpec, psi: Optional[PsiTable] = None,
              allow_empty: bool = False) -> 'SpinConfig':
        """
        Validate S and psi against a field and attach F.

        Raises:
            ConfigError: S empty (unless allowed) or violating the inverse condition,
                psi modulus not dividing F, or psi not invariant under unit squares
        """
        S = tuple(int(i) for i in S)
        if not S and not allow_empty:
            raise ConfigError("S must be a non-empty set of automorphism indices")
        if not check_S_valid(S, spec):
            raise ConfigError(f"S = {list(S)} contains an automorphism together with its inverse")
        psi = psi or PsiTable.trivial()
        F = compute_bigF(spec) if spec.class_reps else None
        if psi.modulus != 1:
            if F is None or F.F % psi.modulus:
                raise ConfigError(f"psi modulus {psi.modulus} does not divide F")
            if not psi_is_unit_square_invariant(psi, spec):
                raise ConfigError(f"psi table {psi.name} is not invariant under unit squares")
        return cls(S=S, psi=psi, F=F)

    def to_dict(self) -> Dict:
        return {
            'S': list(self.S),
            'psi': self.psi.name,
            'F': self.F.to_dict() if self.F else None,
        }
