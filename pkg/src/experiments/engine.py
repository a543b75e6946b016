"""
Experiment engine.

Each run_* method drives one experiment over a loaded field and returns an
ExperimentResult: the CSV rows, a summary echoed into the CSV header, and the
acceptance checks that decide the exit code.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from src.algebra.elements import Modulus8Class, apply_automorphism
from src.algebra.field_spec import FieldSpec
from src.algebra.validation import validate_field_spec
from src.classgroup.ranks import ClassData, class_numbers_minus_4p, primes_1_mod_4
from src.errors import ConfigError, InsufficientWitnesses
from src.generators.principal import canonical_generator
from src.primes.factorization import factor_rational_prime, splits_completely
from src.primes.ideals import IdealLattice
from src.sieve.charsum import (
    CharSumReport, CharSumScanConfig, charsum_scan, naive_window_max, odd_squarefree, scan_moduli
)
from src.sieve.sums import SumPoint, Type2Result, type1_sum, type2_sum
from src.spin.config import SpinConfig
from src.spin.stream import PrimeSumPoint, SpinRecord, spin_prime_sums, spin_stream
from src.symbols.reciprocity import (
    admissible_pair, check_reciprocity, derive_mu2_table, random_lift
)
from src.symbols.residue import residue_symbol_prime
from .statistics import PatternStatistics, ProportionEstimate, StatisticsCalculator

logger = logging.getLogger(__name__)

ClassStore = Callable[[Sequence[int]], Dict[int, int]]
ClassSink = Callable[[List[ClassData]], object]

VALIDATE_COLUMNS = ['check', 'result']
DENSITY_TABLE_COLUMNS = ['k', 'expected'] + ProportionEstimate.COLUMNS
GOVERN16_COLUMNS = ['p', 'pi_cell', 's', 'b16', 'h', 'generator']
CELL_COLUMNS = ['modulus', 'cells', 'sampled_cells', 'constant_cells', 'insufficient_cells', 'constant']
WITNESS_COLUMNS = ['residue', 'p', 'p_prime', 'b16_p', 'b16_p_prime']
BREAKDOWN_COLUMNS = ['residue', 'value']


@dataclass
class ExperimentResult:
    """Rows, summary and acceptance checks of one run."""

    name: str
    rows: List[Dict]
    # CSV header, written even when there are no rows
    columns: List[str]
    summary: Dict = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    # secondary tables written next to the main CSV, keyed by suffix
    tables: Dict[str, List[Dict]] = field(default_factory=dict)
    table_columns: Dict[str, List[str]] = field(default_factory=dict)
    # raw records for the results store
    records: List = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def add_table(self, suffix: str, rows: List[Dict], columns: List[str]):
        """Attach a secondary table with its header."""
        self.tables[suffix] = rows
        self.table_columns[suffix] = list(columns)

    def to_dict(self) -> Dict:
        """Convert to dictionary for display."""
        return {
            'name': self.name,
            'rows': len(self.rows),
            'summary': dict(self.summary),
            'checks': {k: 'ok' if v else 'FAILED' for k, v in self.checks.items()},
        }


def order_four_automorphisms(spec: FieldSpec) -> List[int]:
    return [i for i in range(spec.degree) if spec.automorphism_order(i) == 4]


class ExperimentEngine:
    """
    Runs experiments on one field.

    Each run is deterministic given the engine seed; worker pools merge results in
    input order.
    """

    def __init__(
        self,
        spec: FieldSpec,
        seed: int = 0,
        threads: int = 1,
        class_store: Optional[ClassStore] = None,
        class_sink: Optional[ClassSink] = None
    ):
        """
        Initialize engine.

        Args:
            spec: Field (for class-group runs, the governing field E)
            seed: Seed for every random choice
            threads: Worker processes
            class_store: Optional lookup returning cached h(-4p) by p (e.g. the results store)
            class_sink: Optional callback receiving newly computed ClassData
        """
        self.spec = spec
        self.seed = seed
        self.threads = threads
        self.class_store = class_store
        self.class_sink = class_sink
        self.stats = StatisticsCalculator()

    # Field and symbols

    def run_validate(self, reciprocity_pairs: int = 0, cells: int = 60) -> ExperimentResult:
        """
        Validate the field, optionally followed by a reciprocity suite.

        Args:
            reciprocity_pairs: Random pairs checked against a freshly derived mu_2 table (0 skips)
            cells: Cells sampled for the table

        Returns:
            ExperimentResult with one row per field check

        Usage:
            result = ExperimentEngine(load_preset('governing_e')).run_validate(reciprocity_pairs=2000)
            assert result.passed
        """
        report = validate_field_spec(self.spec)
        rows = [{'check': name, 'result': value} for name, value in report.rows()]
        result = ExperimentResult(name='validate', rows=rows, columns=VALIDATE_COLUMNS,
                                  summary=report.to_dict(), checks={'field': report.passed})
        if reciprocity_pairs:
            failures = self.reciprocity_suite(reciprocity_pairs, cells)
            result.summary['reciprocity_pairs'] = reciprocity_pairs
            result.summary['reciprocity_failures'] = failures
            result.checks['reciprocity'] = failures == 0
        return result

    def reciprocity_suite(self, pairs: int, cells: int = 60) -> int:
        """
        Check (a/b) = mu_2 mu_inf (b/a) on random coprime odd pairs.

        Args:
            pairs: Admissible pairs to check
            cells: Cells sampled for the mu_2 table

        Returns:
            Number of violating pairs

        Raises:
            ConfigError: no cell could be populated, or too few admissible pairs were found
        """
        table = derive_mu2_table(self.spec, cells=cells, seed=self.seed)
        keys = sorted(table.values)
        if not keys:
            raise ConfigError(f"no reciprocity cell could be populated on {self.spec.name}")
        rng = np.random.default_rng(self.seed + 1)
        failures = checked = attempts = 0
        while checked < pairs and attempts < 50 * pairs:
            attempts += 1
            ka, kb = keys[int(rng.integers(len(keys)))]
            a = random_lift(Modulus8Class.from_key(ka).lift(), self.spec, rng)
            b = random_lift(Modulus8Class.from_key(kb).lift(), self.spec, rng)
            if not admissible_pair(a, b, self.spec):
                continue
            checked += 1
            failures += int(not check_reciprocity(a, b, table, self.spec))
        logger.info(f"reciprocity suite on {self.spec.name}: {failures} failures in {checked} pairs")
        if checked < pairs:
            raise ConfigError(f"only {checked} admissible pairs found in {attempts} attempts")
        return failures

    # Spins

    def run_spins(self, X: int, config: SpinConfig, checkpoints: Optional[Sequence[int]] = None) -> ExperimentResult:
        """
        SpinRecords over split primes up to X.

        Args:
            X: Norm bound
            config: S, psi and F
            checkpoints: Also tabulate prime sums of s at these bounds ('prime_sums' table)

        Returns:
            ExperimentResult with one row per record and the records themselves
        """
        records = list(spin_stream(X, config, self.spec, self.threads))
        rows = [r.to_dict() for r in records]
        total = sum(r.s for r in records)
        degenerate = sum(1 for r in records if r.degenerate)
        result = ExperimentResult(
            name='spins',
            rows=rows,
            columns=SpinRecord.columns(config.t),
            summary={'X': X, 'S': list(config.S), 'records': len(records), 'sum_s': total,
                     'degenerate': degenerate},
            records=records,
        )
        if checkpoints:
            points = spin_prime_sums(X, config, self.spec, checkpoints, self.threads)
            result.add_table('prime_sums', [p.to_dict() for p in points], PrimeSumPoint.COLUMNS)
        return result

    def run_density(self, X: int, config: SpinConfig, tolerance: Optional[float] = None) -> ExperimentResult:
        """
        Frequencies of the spin sign patterns over S, with a chi-square test.

        Args:
            X: Norm bound
            config: S (t = |S| patterns of length t)
            tolerance: Required max |frequency - 1/2^t| (None: report only)

        Returns:
            ExperimentResult with one row per sign pattern
        """
        patterns = [r.pattern for r in spin_stream(X, config, self.spec, self.threads)]
        statistics = self.stats.pattern_statistics(patterns, config.t)
        result = ExperimentResult(name='density', rows=statistics.rows(), columns=PatternStatistics.ROW_COLUMNS,
                                  summary={'X': X, 'S': list(config.S), **statistics.to_dict()})
        if tolerance is not None:
            result.checks['density'] = statistics.max_deviation <= tolerance
        return result

    # Class groups

    def class_numbers(self, primes: Sequence[int]) -> Dict[int, int]:
        """
        h(-4p), from the class store where cached and computed in one batch otherwise.

        Args:
            primes: Primes p = 1 mod 4

        Returns:
            Map p -> h(-4p); freshly computed values go to the class sink
        """
        known = dict(self.class_store(primes)) if self.class_store else {}
        missing = [p for p in primes if p not in known]
        if missing:
            fresh = class_numbers_minus_4p(missing)
            known.update(fresh)
            if self.class_sink:
                self.class_sink([ClassData(p=p, h=h) for p, h in fresh.items()])
        return known

    def _split_in_E(self, p: int) -> bool:
        # complete splitting forces p = 1 mod 8 (zeta_8 in E)
        return p % 8 == 1 and splits_completely(p, self.spec)

    def class_data(self, X: int, with_splitting: bool = True) -> List[ClassData]:
        primes = primes_1_mod_4(X).tolist()
        numbers = self.class_numbers(primes)
        return [ClassData(p=p, h=numbers[p], split_in_E=self._split_in_E(p) if with_splitting else None)
                for p in primes]

    def run_classrank(self, X: int, governing: bool = True, tolerance: float = 0.02) -> ExperimentResult:
        """
        ClassData for p = 1 mod 4 up to X, rank densities and (optionally) the 8-rank check.

        Args:
            X: Prime bound
            governing: Also require 8 | h(-4p) exactly when p splits completely in the field
            tolerance: Allowed deviation of the 2^k | h densities from 2^(1-k)
        """
        data = self.class_data(X, with_splitting=governing)
        rows = [d.to_dict() for d in data]
        result = ExperimentResult(name='classrank', rows=rows, columns=ClassData.COLUMNS,
                                  summary={'X': X, 'primes': len(data)})
        result.checks['rk2'] = all(d.rk2 == 1 for d in data)
        result.checks['monotone'] = all(d.rk4 >= d.rk8 >= d.rk16 for d in data)
        densities = []
        for k in (2, 3, 4):
            estimate = self.stats.proportion(sum(d.rank(k) for d in data), len(data))
            densities.append({'k': k, 'expected': 2.0 ** (1 - k), **estimate.to_dict()})
            result.summary[f'freq_{2 ** k}'] = round(estimate.value, 5)
        result.add_table('densities', densities, DENSITY_TABLE_COLUMNS)
        if data and X >= 10 ** 5:
            result.checks['densities'] = all(abs(row['frequency'] - row['expected']) <= tolerance
                                             for row in densities)
        if governing:
            exceptions = [d.p for d in data if d.split_in_E != (d.rk8 == 1)]
            result.summary['governing_exceptions'] = len(exceptions)
            if exceptions:
                logger.warning(f"8-rank governing check failed for p = {exceptions[:10]}")
            result.checks['eight_rank_governing'] = not exceptions
        return result

    def _split_class_data(self, X: int) -> List[ClassData]:
        primes = [p for p in primes_1_mod_4(X).tolist() if self._split_in_E(p)]
        numbers = self.class_numbers(primes)
        return [ClassData(p=p, h=numbers[p], split_in_E=True) for p in primes]

    def run_govern16(self, X: int, moduli: Sequence[int] = (16, 32), order4_choice: int = 0,
                     min_cell_samples: int = 5) -> ExperimentResult:
        """
        16-rank against the symbol (r(pi) / pi) over primes splitting completely in E.

        For each candidate modulus F' the product b16 * s (b16 as +-1) is tested for
        constancy on the residue classes of pi mod F'.

        Args:
            X: Prime bound
            moduli: Candidate moduli F'
            order4_choice: Which order-4 automorphism (by increasing index) plays r
            min_cell_samples: Cells with fewer primes are labelled insufficient
        """
        candidates = order_four_automorphisms(self.spec)
        if not candidates:
            raise ConfigError(f"{self.spec.name} has no automorphism of order 4")
        if not 0 <= order4_choice < len(candidates):
            raise ConfigError(f"order4_choice must be below {len(candidates)}")
        r = candidates[order4_choice]
        data = self._split_class_data(X)
        rows = []
        for d in data:
            P = factor_rational_prime(d.p, self.spec)[0]
            pi = canonical_generator(P.lattice, self.spec)
            s = residue_symbol_prime(apply_automorphism(r, pi, self.spec), P)
            rows.append({'p': d.p, 'pi_cell': Modulus8Class.of(pi).key, 's': s, 'b16': d.rk16,
                         'h': d.h, 'generator': ' '.join(str(x) for x in pi.coords)})

        estimate = self.stats.proportion(sum(d.rk16 for d in data), len(data))
        result = ExperimentResult(name='govern16', rows=rows, columns=GOVERN16_COLUMNS,
                                  summary={'X': X, 'r': r, 'split_primes': len(data),
                                           'b16_density': round(estimate.value, 5)})
        result.add_table('cells', [self._cell_constancy(rows, m, min_cell_samples) for m in moduli], CELL_COLUMNS)
        result.checks['s_nonzero'] = all(row['s'] != 0 for row in rows)
        result.checks['eight_rank_prefilter'] = all(d.rk8 == 1 for d in data)
        if X >= 10 ** 5:
            result.checks['b16_density'] = 0.45 <= estimate.value <= 0.55
        return result

    @staticmethod
    def _cell_constancy(rows: List[Dict], modulus: int, min_samples: int) -> Dict:
        cells: Dict[Tuple[int, ...], set] = {}
        sizes: Dict[Tuple[int, ...], int] = {}
        for row in rows:
            key = tuple(int(x) % modulus for x in row['generator'].split())
            cells.setdefault(key, set()).add(row['s'] * (1 if row['b16'] else -1))
            sizes[key] = sizes.get(key, 0) + 1
        sampled = [k for k in cells if sizes[k] >= min_samples]
        constant = [k for k in sampled if len(cells[k]) == 1]
        return {
            'modulus': modulus,
            'cells': len(cells),
            'sampled_cells': len(sampled),
            'constant_cells': len(constant),
            'insufficient_cells': len(cells) - len(sampled),
            'constant': bool(sampled) and len(constant) == len(sampled),
        }

    def run_nogoverning_witness(self, M: int, X: int, witnesses: int = 10) -> ExperimentResult:
        """
        Pairs p = p' mod M, both split completely in E, with different 16-rank.

        Raises:
            ConfigError: M < 8
            InsufficientWitnesses: fewer than `witnesses` pairs up to X
        """
        if M < 8:
            raise ConfigError(f"modulus M = {M} must be at least 8")
        data = self._split_class_data(X)
        by_class: Dict[int, Dict[int, List[int]]] = {}
        for d in data:
            by_class.setdefault(d.p % M, {0: [], 1: []})[d.rk16].append(d.p)
        rows = []
        for residue in sorted(by_class):
            ranks = by_class[residue]
            for p, q in zip(ranks[1], ranks[0]):
                rows.append({'residue': residue, 'p': p, 'p_prime': q, 'b16_p': 1, 'b16_p_prime': 0})
        rows.sort(key=lambda row: (min(row['p'], row['p_prime']), row['residue']))
        logger.info(f"nogoverning: {len(rows)} witness pairs mod {M} up to {X}")
        if len(rows) < witnesses:
            raise InsufficientWitnesses(f"only {len(rows)} witness pairs mod {M} up to {X}, need {witnesses}")
        return ExperimentResult(name='nogoverning', rows=rows, columns=WITNESS_COLUMNS,
                                summary={'M': M, 'X': X, 'split_primes': len(data), 'pairs': len(rows)},
                                checks={'witnesses': True})

    # Sieve

    def run_type1(self, X: int, config: SpinConfig, m: Optional[IdealLattice] = None,
                  checkpoints: Optional[Sequence[int]] = None, method: str = 'ideals',
                  breakdown_modulus: Optional[int] = None, max_ratio: Optional[float] = None) -> ExperimentResult:
        """
        Type I running sums with the normalised ratio at each checkpoint.

        Args:
            X: Norm bound
            config: S, psi and F
            m: Modulus ideal (None for O_K)
            checkpoints: Norm bounds to report (default dyadic up to X)
            method: Ideal enumeration route, 'ideals' or 'box'
            breakdown_modulus: Also tabulate the final sum by generator class modulo this integer
            max_ratio: Required |A(X)| / bound at the last checkpoint, with ratios
                decreasing across checkpoints (None: report only)

        Returns:
            ExperimentResult with one row per checkpoint
        """
        outcome = type1_sum(X, m, config, self.spec, checkpoints, method, breakdown_modulus, self.threads)
        rows = [p.to_dict() for p in outcome.points]
        result = ExperimentResult(name='type1', rows=rows, columns=SumPoint.COLUMNS,
                                  summary={'X': X, 'S': list(config.S), 'method': method, 'total': outcome.total})
        result.checks['bounded'] = all(abs(p.value) <= p.bound for p in outcome.points)
        if max_ratio is not None and outcome.points:
            result.checks['decreasing'] = self.stats.decreasing([p.ratio for p in outcome.points])
            result.checks['final_ratio'] = abs(outcome.points[-1].ratio) < max_ratio
        if breakdown_modulus is not None:
            result.add_table('breakdown', [{'residue': k, 'value': v} for k, v in sorted(outcome.breakdown.items())],
                             BREAKDOWN_COLUMNS)
        return result

    def run_type2(self, x: int, y: int, config: SpinConfig, seeds: Sequence[int] = (0,),
                  max_ratio: Optional[float] = None, method: str = 'ideals') -> ExperimentResult:
        """
        Bilinear sums with seeded unimodular coefficients.

        Args:
            x, y: Norm bounds of the two variables
            config: S, psi and F
            seeds: Coefficient seeds, offset by the engine seed
            max_ratio: Required |B(x, y)| / bound for every seed (None: report only)
            method: Ideal enumeration route

        Returns:
            ExperimentResult with one row per seed
        """
        rows = []
        for seed in seeds:
            outcome = type2_sum(x, y, None, None, config, self.spec, seed=self.seed + seed, method=method,
                                threads=self.threads)
            rows.append({'seed': seed, **outcome.to_dict()})
        result = ExperimentResult(name='type2', rows=rows, columns=['seed'] + Type2Result.COLUMNS,
                                  summary={'x': x, 'y': y, 'S': list(config.S)})
        result.checks['bounded'] = all(row['abs_value'] <= row['bound'] + 1e-9 for row in rows)
        if max_ratio is not None:
            result.checks['cancellation'] = all(row['ratio'] < max_ratio for row in rows)
        return result

    def run_charsum(self, moduli: Optional[Sequence[int]] = None, q_range: Tuple[int, int] = (1000, 100_000),
                    samples: int = 50, n: int = 3, k: int = 1, l: int = 0,
                    verify_up_to: int = 0) -> ExperimentResult:
        """
        Character-sum scan over given moduli, or a seeded sample of odd squarefree q in q_range.

        Args:
            moduli: Moduli q to scan (None: sample from q_range)
            q_range: Range of the sampled moduli
            samples: Number of sampled moduli
            n: Degree parameter, windows of length q^(1/n)
            k, l: Progression kx + l
            verify_up_to: Compare against the naive windowed maximum for every odd
                squarefree q up to this bound (0 skips)

        Returns:
            ExperimentResult with one CharSumReport row per modulus
        """
        if moduli is None:
            moduli = sample_squarefree(q_range, samples, self.seed)
        summary = scan_moduli(moduli, n=n, k=k, l=l)
        rows = [r.to_dict() for r in summary.reports]
        result = ExperimentResult(name='charsum', rows=rows, columns=CharSumReport.COLUMNS,
                                  summary={'n': n, 'k': k, 'l': l, 'moduli': len(rows),
                                           'median_exponent': round(summary.median_exponent, 5),
                                           'max_exponent': round(summary.max_exponent, 5)})
        if verify_up_to:
            mismatches = []
            for q in odd_squarefree(3, verify_up_to):
                if k % q == 0:
                    continue
                scan_config = CharSumScanConfig(q=q, n=n, k=k, l=l)
                if charsum_scan(scan_config).max != naive_window_max(scan_config):
                    mismatches.append(q)
            result.summary['oracle_mismatches'] = len(mismatches)
            result.checks['prefix_sum_oracle'] = not mismatches
        return result


def sample_squarefree(q_range: Tuple[int, int], samples: int, seed: int = 0) -> List[int]:
    """Up to `samples` distinct odd squarefree q > 1 drawn uniformly from q_range, sorted."""
    lo, hi = q_range
    rng = np.random.default_rng(seed)
    chosen = set()
    attempts = 0
    while len(chosen) < samples and attempts < 50 * samples:
        attempts += 1
        q = int(rng.integers(lo, hi + 1)) | 1
        if q > 1 and all(e == 1 for e in factorint(q).values()):
            chosen.add(q)
    return sorted(chosen)
