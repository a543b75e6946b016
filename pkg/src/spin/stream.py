"""
Spin streams over completely split primes.

For each split p the generator pi of the first prime above p is found once; the
conjugates sigma_i(pi) generate the rest of the orbit. Work is split into prime
ranges that run in a process pool and are merged back in prime order.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import prod
from typing import ClassVar, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.elements import apply_automorphism
from src.algebra.field_spec import FieldSpec
from src.config import get_settings
from src.errors import CeilingExceeded
from src.generators.principal import canonical_generator
from src.primes.factorization import conjugate_prime, factor_rational_prime, split_prime_stream
from src.spin.config import SpinConfig
from src.spin.spins import s_from_generator, spins_from_factorization

logger = logging.getLogger(__name__)

CHUNKS_PER_WORKER = 8


@dataclass
class SpinRecord:
    """Spins of one degree-one prime ideal."""

    p: int
    orbit_index: int
    ideal_key: str
    generator: Tuple[int, ...]
    spins: Tuple[int, ...]
    s: int
    b16: Optional[int] = None

    @property
    def degenerate(self) -> bool:
        return any(v == 0 for v in self.spins)

    @property
    def pattern(self) -> Tuple[int, ...]:
        return self.spins

    @staticmethod
    def columns(t: int) -> List[str]:
        """CSV columns of a stream over |S| = t automorphisms."""
        return (['p', 'orbit_index', 'ideal_key', 'generator_coords']
                + [f'spin_sigma_{k}' for k in range(1, t + 1)] + ['s_value', 'b16'])

    def to_dict(self) -> Dict:
        row = {
            'p': self.p,
            'orbit_index': self.orbit_index,
            'ideal_key': self.ideal_key,
            'generator_coords': ' '.join(str(x) for x in self.generator),
        }
        for k, value in enumerate(self.spins, start=1):
            row[f'spin_sigma_{k}'] = value
        row['s_value'] = self.s
        row['b16'] = self.b16
        return row


def records_for_prime(p: int, config: SpinConfig, spec: FieldSpec) -> List[SpinRecord]:
    """SpinRecords for the n primes above a completely split p, in orbit order."""
    base = factor_rational_prime(p, spec)[0]
    pi = canonical_generator(base.lattice, spec)
    fast = spec.is_totally_real and spec.unit_condition
    out = []
    for i in range(spec.degree):
        P = conjugate_prime(base, i, spec)
        generator = apply_automorphism(i, pi, spec)
        factors = [(P, 1)]
        spins = tuple(spins_from_factorization(generator, factors, config.S, spec))
        if fast:
            s = config.psi(generator) * prod(spins)
        else:
            s = s_from_generator(generator, factors, config, spec)
        out.append(SpinRecord(p=p, orbit_index=i, ideal_key=P.lattice.key_string,
                              generator=generator.coords, spins=spins, s=s))
    return out


def _records_for_range(task) -> List[SpinRecord]:
    lo, hi, config, spec = task
    out = []
    for p, _ in split_prime_stream(hi, spec, start=lo):
        out.extend(records_for_prime(p, config, spec))
    return out


def _ranges(X: int, pieces: int) -> List[Tuple[int, int]]:
    edges = np.linspace(3, X + 1, pieces + 1).astype(int)
    return [(int(lo), int(hi) - 1) for lo, hi in zip(edges[:-1], edges[1:]) if hi - 1 >= lo]


def spin_stream(X: int, config: SpinConfig, spec: FieldSpec, threads: int = 1) -> Iterator[SpinRecord]:
    """
    One SpinRecord per prime ideal above each completely split p <= X.

    Args:
        X: Norm bound
        config: S, psi, F
        spec: Field
        threads: Worker processes (1 runs serially)

    Yields:
        SpinRecord in (p, orbit index) order

    Raises:
        CeilingExceeded: X above the configured norm ceiling
    """
    ceiling = get_settings().norm_ceiling
    if X > ceiling:
        raise CeilingExceeded(f"X = {X} exceeds the norm ceiling {ceiling}")
    if X < 3:
        return
    logger.info(f"Streaming spins on {spec.name} up to {X} with S = {list(config.S)}, {threads} worker(s)")
    if threads <= 1:
        for p, _ in split_prime_stream(X, spec):
            yield from records_for_prime(p, config, spec)
        return
    tasks = [(lo, hi, config, spec) for lo, hi in _ranges(X, threads * CHUNKS_PER_WORKER)]
    with ProcessPoolExecutor(max_workers=threads) as executor:
        for chunk in executor.map(_records_for_range, tasks):
            yield from chunk


@dataclass
class PrimeSumPoint:
    """Partial sum of s over prime ideals of norm <= checkpoint."""

    checkpoint: int
    total: int
    count: int

    COLUMNS: ClassVar[List[str]] = ['checkpoint', 'value', 'count', 'ratio']

    @property
    def ratio(self) -> float:
        return self.total / self.count if self.count else 0.0

    def to_dict(self) -> Dict:
        return {'checkpoint': self.checkpoint, 'value': self.total, 'count': self.count, 'ratio': self.ratio}


def dyadic_checkpoints(X: int, start: int = 1024) -> List[int]:
    points = []
    x = start
    while x < X:
        points.append(x)
        x *= 2
    points.append(X)
    return points


def spin_prime_sums(X: int, config: SpinConfig, spec: FieldSpec, checkpoints: Optional[Sequence[int]] = None,
                    threads: int = 1) -> List[PrimeSumPoint]:
    """Running sums of s over split prime ideals at each checkpoint (default dyadic)."""
    checkpoints = sorted(checkpoints or dyadic_checkpoints(X))
    points = []
    total = count = 0
    index = 0
    for record in spin_stream(X, config, spec, threads):
        while index < len(checkpoints) and record.p > checkpoints[index]:
            points.append(PrimeSumPoint(checkpoints[index], total, count))
            index += 1
        total += record.s
        count += 1
    while index < len(checkpoints):
        points.append(PrimeSumPoint(checkpoints[index], total, count))
        index += 1
    return points


@dataclass
class SplittingReport:
    """Spin values against the decomposition of sigma(P) in K(sqrt(pi))."""

    checked: int = 0
    agreements: int = 0
    # sigma(P) dividing pi: ramified in K(sqrt(pi)), spin 0
    zeros: int = 0
    # sigma(P) with two roots of X^2 - pi, and sigma with spin +1
    split: int = 0
    positive: int = 0

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.agreements == self.checked and self.split == self.positive

    def to_dict(self) -> Dict:
        return {'checked': self.checked, 'agreements': self.agreements, 'zeros': self.zeros,
                'split': self.split, 'positive': self.positive}


def count_square_roots(residue: int, p: int) -> int:
    """Number of x in F_p with x^2 = residue, by enumerating F_p."""
    x = np.arange(p, dtype=np.int64)
    return int(np.count_nonzero((x * x - residue) % p == 0))


def spin_splitting_check(X: int, spec: FieldSpec, samples: int = 100, seed: int = 0) -> SplittingReport:
    """
    Confirm spin(sigma, P) = 1 exactly when sigma(P) splits in K(sqrt(pi)).

    For P of degree one, the primes of K(sqrt(pi)) above sigma(P) correspond to the
    roots of X^2 - pi in O_K / sigma(P) = F_p: two roots split, one ramifies, none stays
    inert. The residue of pi is taken as sigma^-1(pi) mod P, through the automorphism
    matrices rather than the conjugate ideal, and the roots are counted by enumeration.

    Args:
        X: Bound on the split primes p
        spec: Field
        samples: Split primes sampled (all of them when fewer)
        seed: Sampling seed

    Returns:
        SplittingReport; `passed` also requires the number of split sigma(P) to equal
        the number of spins +1
    """
    rng = np.random.default_rng(seed)
    primes = [p for p, _ in split_prime_stream(X, spec)]
    if len(primes) > samples:
        primes = sorted(int(p) for p in rng.choice(primes, size=samples, replace=False))
    report = SplittingReport()
    for p in primes:
        base = factor_rational_prime(p, spec)[0]
        pi = canonical_generator(base.lattice, spec)
        for i in range(1, spec.degree):
            value = spins_from_factorization(pi, [(base, 1)], [i], spec)[0]
            residue = base.residue_int(apply_automorphism(spec.inverse_index(i), pi, spec))
            roots = count_square_roots(residue, p)
            expected = {2: 1, 1: 0, 0: -1}[roots]
            report.checked += 1
            report.agreements += int(value == expected)
            report.zeros += int(roots == 1)
            report.split += int(roots == 2)
            report.positive += int(value == 1)
    logger.info(f"splitting check on {spec.name}: {report.agreements}/{report.checked} agree")
    return report
