"""
Type I and type II sums of joint spins.

A(X) = sum of s_a over principal odd ideals a with N(a) <= X, (a, F) = 1 and m | a.
B(x, y) = sum over a, b of v_a w_b s_ab for bounded coefficient sequences v, w.
Both are exact: s_a is an integer and the ideals are enumerated exactly, so a chunked
parallel evaluation reproduces the serial one.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, ClassVar, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.algebra.elements import FieldElement, element_mul
from src.algebra.field_spec import FieldSpec
from src.algebra.units import torsion_elements, unit_class_representatives
from src.config import get_settings
from src.errors import CeilingExceeded, ConfigError
from src.generators.enumeration import enumerate_ideals_by_factorization, enumerate_principal_odd_ideals
from src.generators.principal import canonical_element
from src.primes.factorization import conjugate_prime, factor_ideal
from src.primes.ideals import IdealLattice
from src.spin.config import SpinConfig
from src.spin.spins import s_from_generator
from src.spin.stream import dyadic_checkpoints
from src.symbols.residue import Factorization, ideal_factorization

logger = logging.getLogger(__name__)

METHODS = ('ideals', 'box')
CHUNK_SIZE = 2000

Coefficients = Union[Mapping[str, complex], Callable[[str], complex], None]


def factorization_key(factors: Factorization) -> str:
    """Canonical string of a prime factorization, e.g. '7[1,3]^2*13[1,5]' ('1' for O_K)."""
    parts = []
    for P, e in factors:
        label = f"{P.p}[{','.join(str(c) for c in P.g_factor)}]"
        parts.append(label if e == 1 else f"{label}^{e}")
    return '*'.join(parts) or '1'


@dataclass
class PrincipalIdeal:
    """Odd principal ideal with a generator and its prime factorization."""

    norm: int
    key: str
    generator: FieldElement
    factors: Factorization

    @classmethod
    def of(cls, norm: int, generator: FieldElement, factors: Factorization) -> 'PrincipalIdeal':
        factors = sorted(factors, key=lambda item: (item[0].p, item[0].g_factor))
        return cls(norm, factorization_key(factors), generator, factors)

    def has_factor(self, P, e: int) -> bool:
        return any(Q.key == P.key and k >= e for Q, k in self.factors)


def _check_ceiling(X: int):
    ceiling = get_settings().norm_ceiling
    if X > ceiling:
        raise CeilingExceeded(f"norm bound {X} exceeds the norm ceiling {ceiling}")


def max_abs_s(spec: FieldSpec) -> int:
    """Number of terms in s_a, hence a bound for |s_a|."""
    if spec.is_totally_real and spec.unit_condition:
        return 1
    return len(torsion_elements(spec)) * len(unit_class_representatives(spec))


def bigF_value(config: SpinConfig) -> int:
    return config.F.F if config.F is not None else 1


def principal_ideals_up_to(X: int, spec: FieldSpec, coprime_to: int = 1, method: str = 'ideals',
                           include_unit: bool = True) -> List[PrincipalIdeal]:
    """
    Odd principal ideals of norm <= X coprime to 2 D_K and coprime_to, sorted by (norm, key).

    Args:
        X: Norm bound
        spec: Field
        coprime_to: Extra integer the norms must be coprime to
        method: 'ideals' (prime power products) or 'box' (generator box scan)
        include_unit: Include O_K itself

    Raises:
        ConfigError: unknown method
        CeilingExceeded: the box is too large ('box' only)
    """
    if method not in METHODS:
        raise ConfigError(f"unknown enumeration method '{method}'; choose from {', '.join(METHODS)}")
    n = spec.degree
    out: List[PrincipalIdeal] = []
    if include_unit and X >= 1:
        out.append(PrincipalIdeal.of(1, FieldElement.one(n), []))
    excluded = 2 * abs(spec.discriminant) * coprime_to
    if method == 'ideals':
        for record in enumerate_ideals_by_factorization(X, spec, coprime_to=coprime_to):
            out.append(PrincipalIdeal.of(record.norm, record.generator, list(record.factors)))
    else:
        for ideal, generator in enumerate_principal_odd_ideals(X, spec, coprime_to=excluded):
            out.append(PrincipalIdeal.of(ideal.norm, generator, ideal_factorization(generator, spec)))
    out.sort(key=lambda a: (a.norm, a.key))
    return out


def _s_values(task) -> List[int]:
    items, config, spec = task
    return [s_from_generator(g, factors, config, spec) for g, factors in items]


def evaluate_s(items: Sequence[Tuple[FieldElement, Factorization]], config: SpinConfig, spec: FieldSpec,
               threads: int = 1) -> List[int]:
    """s for each (generator, factorization), serially or in chunks over a process pool."""
    if threads <= 1 or len(items) <= CHUNK_SIZE:
        return _s_values((items, config, spec))
    tasks = [(items[k:k + CHUNK_SIZE], config, spec) for k in range(0, len(items), CHUNK_SIZE)]
    out: List[int] = []
    with ProcessPoolExecutor(max_workers=threads) as executor:
        for chunk in executor.map(_s_values, tasks):
            out.extend(chunk)
    return out


def check_modulus_ideal(m: IdealLattice, config: SpinConfig, spec: FieldSpec) -> Factorization:
    """
    Factor m after checking it is odd, coprime to F and to sigma(m) for sigma in S.

    Raises:
        ConfigError: m violates one of the conditions
    """
    if m.norm == 1:
        return []
    F = bigF_value(config)
    if m.norm % 2 == 0 or gcd(m.norm, F) != 1:
        raise ConfigError(f"m of norm {m.norm} must be odd and coprime to F = {F}")
    factors = factor_ideal(m, spec)
    keys = {P.key for P, _ in factors}
    for i in config.S:
        if any(conjugate_prime(P, i, spec).key in keys for P, _ in factors):
            raise ConfigError(f"m is not coprime to sigma{i}(m)")
    return factors


@dataclass
class SumPoint:
    """Running sum at a checkpoint."""

    checkpoint: int
    value: int
    count: int
    bound: int

    COLUMNS: ClassVar[List[str]] = ['checkpoint', 'value', 'count', 'bound', 'ratio']

    @property
    def ratio(self) -> float:
        return self.value / self.bound if self.bound else 0.0

    def to_dict(self) -> Dict:
        return {'checkpoint': self.checkpoint, 'value': self.value, 'count': self.count,
                'bound': self.bound, 'ratio': self.ratio}


@dataclass
class Type1Result:
    points: List[SumPoint]
    # A(X; rho): final sum split by the generator class modulo `breakdown_modulus`
    breakdown: Dict[str, int] = field(default_factory=dict)
    breakdown_modulus: Optional[int] = None

    @property
    def total(self) -> int:
        return self.points[-1].value if self.points else 0


def residue_class_key(generator: FieldElement, modulus: int, spec: FieldSpec) -> str:
    rep = canonical_element(generator, spec)
    return ' '.join(str(x % modulus) for x in rep.coords)


def type1_sum(X: int, m: Optional[IdealLattice], config: SpinConfig, spec: FieldSpec,
              checkpoints: Optional[Sequence[int]] = None, method: str = 'ideals',
              breakdown_modulus: Optional[int] = None, threads: int = 1) -> Type1Result:
    """
    Running sums A(c) = sum of s_a over N(a) <= c, (a, F) = 1, m | a.

    Args:
        X: Largest norm
        m: Modulus ideal (None for O_K)
        config: S, psi, F
        spec: Field
        checkpoints: Norm bounds to report (default dyadic up to X)
        method: Ideal enumeration route
        breakdown_modulus: Also split the final sum by generator class modulo this integer
        threads: Worker processes

    Raises:
        CeilingExceeded: X above the norm ceiling
        ConfigError: m not odd or not coprime to F and its S-conjugates
    """
    _check_ceiling(X)
    m = m or IdealLattice.unit(spec.degree)
    m_factors = check_modulus_ideal(m, config, spec)
    F = bigF_value(config)
    ideals = [a for a in principal_ideals_up_to(X, spec, coprime_to=F, method=method)
              if all(a.has_factor(P, e) for P, e in m_factors)]
    logger.info(f"type I sum on {spec.name}: {len(ideals)} ideals with N <= {X}, N(m) = {m.norm}")
    values = evaluate_s([(a.generator, a.factors) for a in ideals], config, spec, threads)

    checkpoints = sorted(checkpoints or dyadic_checkpoints(X))
    scale = max_abs_s(spec)
    points = []
    total = count = index = 0
    for a, s in zip(ideals, values):
        while index < len(checkpoints) and a.norm > checkpoints[index]:
            points.append(SumPoint(checkpoints[index], total, count, count * scale))
            index += 1
        total += s
        count += 1
    while index < len(checkpoints):
        points.append(SumPoint(checkpoints[index], total, count, count * scale))
        index += 1

    result = Type1Result(points=points, breakdown_modulus=breakdown_modulus)
    if breakdown_modulus:
        for a, s in zip(ideals, values):
            key = residue_class_key(a.generator, breakdown_modulus, spec)
            result.breakdown[key] = result.breakdown.get(key, 0) + s
    return result


def unimodular_sequence(keys: Sequence[str], seed: int) -> Dict[str, complex]:
    """Seeded values exp(2 pi i u), u uniform, one per key."""
    rng = np.random.default_rng(seed)
    phases = rng.random(len(keys))
    return dict(zip(keys, np.exp(2j * np.pi * phases).tolist()))


def _coefficients(seq: Coefficients, ideals: Sequence[PrincipalIdeal], seed: int) -> List[complex]:
    if seq is None:
        table = unimodular_sequence([a.key for a in ideals], seed)
        return [table[a.key] for a in ideals]
    if callable(seq):
        return [complex(seq(a.key)) for a in ideals]
    return [complex(seq.get(a.key, 0)) for a in ideals]


def _merge(left: Factorization, right: Factorization) -> Factorization:
    merged: Dict = {}
    for P, e in list(left) + list(right):
        previous = merged.get(P.key)
        merged[P.key] = (P, e + (previous[1] if previous else 0))
    return [merged[k] for k in sorted(merged)]


@dataclass
class Type2Result:
    x: int
    y: int
    value: complex
    pairs: int
    bound: int

    COLUMNS: ClassVar[List[str]] = ['x', 'y', 'value_real', 'value_imag', 'abs_value', 'pairs', 'bound', 'ratio']

    @property
    def normalized(self) -> float:
        return abs(self.value) / self.pairs if self.pairs else 0.0

    def to_dict(self) -> Dict:
        return {'x': self.x, 'y': self.y, 'value_real': self.value.real, 'value_imag': self.value.imag,
                'abs_value': abs(self.value), 'pairs': self.pairs, 'bound': self.bound,
                'ratio': self.normalized}


def type2_sum(x: int, y: int, v_seq: Coefficients, w_seq: Coefficients, config: SpinConfig,
              spec: FieldSpec, seed: int = 0, method: str = 'ideals', threads: int = 1) -> Type2Result:
    """
    B(x, y) = sum over N(a) <= x, N(b) <= y of v_a w_b s_ab.

    Args:
        x, y: Norm bounds
        v_seq, w_seq: Coefficients keyed by ideal HNF string (mapping or callable);
            None draws seeded unimodular values
        config: S, psi, F
        spec: Field
        seed: Seed for drawn coefficients (w uses seed + 1)

    Raises:
        CeilingExceeded: x * y above the norm ceiling
    """
    _check_ceiling(x * y)
    F = bigF_value(config)
    left = principal_ideals_up_to(x, spec, coprime_to=F, method=method)
    right = principal_ideals_up_to(y, spec, coprime_to=F, method=method)
    v = _coefficients(v_seq, left, seed)
    w = _coefficients(w_seq, right, seed + 1)

    items = []
    weights = []
    for a, va in zip(left, v):
        if va == 0:
            continue
        for b, wb in zip(right, w):
            if wb == 0:
                continue
            items.append((element_mul(a.generator, b.generator, spec), _merge(a.factors, b.factors)))
            weights.append(va * wb)
    values = evaluate_s(items, config, spec, threads)
    total = sum((c * s for c, s in zip(weights, values)), 0j)
    pairs = len(left) * len(right)
    logger.info(f"type II sum on {spec.name}: x = {x}, y = {y}, {pairs} pairs, |B| = {abs(total):.3f}")
    return Type2Result(x=x, y=y, value=total, pairs=pairs, bound=pairs * max_abs_s(spec))
