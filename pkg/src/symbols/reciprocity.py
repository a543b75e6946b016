"""
Empirical reciprocity tables.

mu_2(alpha, beta) depends only on alpha, beta mod 8. We sample coprime odd pairs per
mod-8 cell, compute (alpha/beta)(beta/alpha)mu_inf(alpha, beta), and require every cell
to be constant. The same CellTable also reconstructs the correction factors of the
spin factorization identity.
"""

import json
import logging
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path
from typing import Callable, Dict, List, Optional, Set, Tuple

import numpy as np

from src.algebra.elements import FieldElement, Modulus8Class, norm
from src.algebra.field_spec import FieldSpec
from src.errors import ConfigError, InconsistentCell, UnpopulatedCell
from src.symbols.residue import hilbert_infinity, residue_symbol

logger = logging.getLogger(__name__)

MIN_SAMPLES_PER_CELL = 20
LIFT_SPREAD = 2
# lift redraws per side when a label refines the cell
LABEL_TRIES = 64

CellKey = Tuple[str, str]


@dataclass
class CellTable:
    """Map from a pair of mod-8 classes to a sign, with sample counts."""

    name: str
    values: Dict[CellKey, int] = field(default_factory=dict)
    counts: Dict[CellKey, int] = field(default_factory=dict)

    def record(self, key: CellKey, value: int):
        """Add one observation; InconsistentCell if it disagrees with earlier ones."""
        previous = self.values.get(key)
        if previous is not None and previous != value:
            raise InconsistentCell(f"{self.name}: cell {key} saw {previous} and {value}")
        self.values[key] = value
        self.counts[key] = self.counts.get(key, 0) + 1

    def record_sample(self, sample: 'CellSample'):
        for value in sample.values:
            self.record(sample.key, value)

    def lookup(self, key: CellKey) -> int:
        if key not in self.values:
            raise UnpopulatedCell(f"{self.name}: cell {key} was never observed")
        return self.values[key]

    @property
    def cell_count(self) -> int:
        return len(self.values)

    @property
    def min_samples(self) -> int:
        return min(self.counts.values()) if self.counts else 0

    def to_json(self) -> Dict:
        return {
            'name': self.name,
            'cells': [
                {'alpha': a, 'beta': b, 'value': v, 'samples': self.counts[(a, b)]}
                for (a, b), v in sorted(self.values.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Dict) -> 'CellTable':
        table = cls(name=data.get('name', 'table'))
        for cell in data['cells']:
            key = (cell['alpha'], cell['beta'])
            table.values[key] = int(cell['value'])
            table.counts[key] = int(cell['samples'])
        return table


class ReciprocityTable(CellTable):
    """
    mu_2 restricted to observed cells.

    Usage:
        table = derive_mu2_table(spec, cells=60)
        table.save(Path('output/mu2.json'))
        assert check_reciprocity(a, b, ReciprocityTable.load(Path('output/mu2.json')), spec)
    """

    def mu2(self, a: FieldElement, b: FieldElement) -> int:
        """
        mu_2(a, b) from the cell of (a mod 8, b mod 8).

        Raises:
            UnpopulatedCell: the cell was never sampled
        """
        return self.lookup(cell_key(a, b))

    def save(self, path: Path):
        Path(path).write_text(json.dumps(self.to_json(), indent=1))

    @classmethod
    def load(cls, path: Path) -> 'ReciprocityTable':
        """
        Read a table written by save.

        Args:
            path: JSON file

        Returns:
            ReciprocityTable with the saved values and sample counts

        Raises:
            ConfigError: the file does not exist
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"reciprocity table not found: {path}")
        base = CellTable.from_json(json.loads(path.read_text()))
        return cls(name=base.name, values=base.values, counts=base.counts)


def cell_key(a: FieldElement, b: FieldElement) -> CellKey:
    return Modulus8Class.of(a).key, Modulus8Class.of(b).key


def random_odd_class(spec: FieldSpec, rng: np.random.Generator) -> FieldElement:
    """Random representative in [0, 8)^n of a class with odd norm."""
    while True:
        coords = FieldElement.of(rng.integers(0, 8, size=spec.degree))
        if norm(coords, spec) % 2 == 1:
            return coords


def random_lift(base: FieldElement, spec: FieldSpec, rng: np.random.Generator,
                spread: int = LIFT_SPREAD) -> FieldElement:
    """base + 8x with x in [-spread, spread]^n."""
    shift = FieldElement.of(rng.integers(-spread, spread + 1, size=spec.degree))
    return base + shift.scale(8)


def admissible_pair(a: FieldElement, b: FieldElement, spec: FieldSpec) -> bool:
    """Nonzero, odd, coprime norms, coprime to the discriminant."""
    na, nb = abs(norm(a, spec)), abs(norm(b, spec))
    if na == 0 or nb == 0:
        return False
    if na % 2 == 0 or nb % 2 == 0:
        return False
    if gcd(na, nb) != 1:
        return False
    return gcd(na * nb, spec.discriminant) == 1


@dataclass
class CellSample:
    """Observations on distinct lift pairs of one cell."""

    key: CellKey
    values: List[int]
    pairs: List[Tuple[Tuple[int, ...], Tuple[int, ...]]]


def _labelled_lift(base: FieldElement, target: Optional[str], label: Optional[Callable[[FieldElement], str]],
                   spec: FieldSpec, rng: np.random.Generator, tries: int) -> Optional[FieldElement]:
    for _ in range(tries):
        x = random_lift(base, spec, rng)
        if target is None or label(x) == target:
            return x
    return None


def sample_cell(a0: FieldElement, b0: FieldElement, spec: FieldSpec, rng: np.random.Generator,
                observe: Callable[[FieldElement, FieldElement], Optional[int]],
                samples: int = MIN_SAMPLES_PER_CELL, max_attempts: int = 400,
                label: Optional[Callable[[FieldElement], str]] = None) -> Optional[CellSample]:
    """
    Observe a cell on distinct admissible lift pairs (a0 + 8x, b0 + 8y).

    Every pair is observed at most once, so `samples` values come from `samples`
    different pairs.

    Args:
        a0, b0: Odd class representatives
        spec: Field
        rng: Random generator
        observe: Value on a pair; None marks the pair unusable
        samples: Distinct pairs required
        max_attempts: Pair draws before giving up
        label: Refinement of the mod-8 class of one element (e.g. its sign vector).
            Each side keeps the label of its first usable lift and redraws lifts
            until the label matches.

    Returns:
        CellSample keyed by the (refined) cell, or None when fewer than `samples`
        distinct pairs were usable

    Usage:
        sample = sample_cell(a0, b0, spec, rng, lambda a, b: reciprocity_defect(a, b, spec))
    """
    targets: Tuple[Optional[str], Optional[str]] = (None, None)
    seen: Set[Tuple[Tuple[int, ...], Tuple[int, ...]]] = set()
    sample = CellSample(key=cell_key(a0, b0), values=[], pairs=[])
    tries = LABEL_TRIES if label is not None else 1

    for _ in range(max_attempts):
        if len(sample.values) >= samples:
            break
        a = _labelled_lift(a0, targets[0], label, spec, rng, tries)
        b = _labelled_lift(b0, targets[1], label, spec, rng, tries)
        if a is None or b is None:
            continue
        pair = (a.coords, b.coords)
        if pair in seen:
            continue
        seen.add(pair)
        if not admissible_pair(a, b, spec):
            continue
        value = observe(a, b)
        if value is None:
            continue
        if label is not None and targets[0] is None:
            targets = (label(a), label(b))
            sample.key = (f"{sample.key[0]}|{targets[0]}", f"{sample.key[1]}|{targets[1]}")
        sample.values.append(value)
        sample.pairs.append(pair)

    if len(sample.values) < samples:
        logger.warning(f"cell {sample.key}: only {len(sample.values)} distinct usable pairs in "
                       f"{max_attempts} draws, dropping cell")
        return None
    return sample


def reciprocity_defect(a: FieldElement, b: FieldElement, spec: FieldSpec) -> int:
    """(a/b)(b/a) mu_inf(a, b)."""
    return residue_symbol(a, b, spec) * residue_symbol(b, a, spec) * hilbert_infinity(a, b, spec)


def derive_mu2_table(spec: FieldSpec, samples: int = MIN_SAMPLES_PER_CELL, cells: int = 50,
                     seed: int = 0, max_attempts: int = 400) -> ReciprocityTable:
    """
    Sample mu_2 over random mod-8 cells.

    Args:
        spec: Field
        samples: Distinct lift pairs per cell (>= 20)
        cells: Number of random cell pairs
        seed: RNG seed
        max_attempts: Pair draws per cell before the cell is dropped

    Returns:
        ReciprocityTable with every populated cell at `samples` agreeing observations
        on distinct pairs

    Raises:
        ConfigError: samples below the per-cell minimum
        InconsistentCell: two samples of one cell disagree
    """
    if samples < MIN_SAMPLES_PER_CELL:
        raise ConfigError(f"samples must be at least {MIN_SAMPLES_PER_CELL}")
    rng = np.random.default_rng(seed)
    table = ReciprocityTable(name=f"mu2:{spec.name}")
    logger.info(f"Deriving mu2 for {spec.name}: {cells} cells x {samples} samples")

    for index in range(cells):
        a0 = random_odd_class(spec, rng)
        b0 = random_odd_class(spec, rng)
        sample = sample_cell(a0, b0, spec, rng, lambda a, b: reciprocity_defect(a, b, spec),
                             samples=samples, max_attempts=max_attempts)
        if sample is None:
            continue
        table.record_sample(sample)
        logger.debug(f"cell {index}: {sample.key} -> {sample.values[0]}")

    logger.info(f"mu2 table for {spec.name}: {table.cell_count} cells populated")
    return table


def check_reciprocity(a: FieldElement, b: FieldElement, table: ReciprocityTable, spec: FieldSpec) -> bool:
    """
    (a/b) == mu_2 * mu_inf * (b/a).

    Raises:
        UnpopulatedCell: the pair's cell is not in the table
    """
    mu2 = table.mu2(a, b)
    left = residue_symbol(a, b, spec)
    right = mu2 * hilbert_infinity(a, b, spec) * residue_symbol(b, a, spec)
    return left == right
