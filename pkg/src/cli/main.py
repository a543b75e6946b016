"""
Command-line experiment runner.

Usage:
    python -m src.cli.main density --preset cubic9 --max-norm 1000000 --set-S 1
    python -m src.cli.main govern16 --preset governing_e --max-norm 1000000 --moduli 16,32

Every subcommand writes one CSV (plus secondary tables next to it) whose header
lines, prefixed '#', echo the configuration and the run summary.
Exit codes: 0 success, 1 failed check or library failure, 2 configuration error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd

from src.algebra.elements import FieldElement
from src.algebra.field_spec import FieldSpec
from src.algebra.presets import resolve_field
from src.config import configure_logging, get_settings
from src.database.connection import get_db_manager
from src.database.schema import RunStatus
from src.database.store import ResultsStore
from src.errors import ConfigError, SpinLabError
from src.experiments.engine import ExperimentEngine, ExperimentResult
from src.primes.ideals import ideal_of_element
from src.spin.config import PsiTable, SpinConfig
from .models import (
    CharSumParams, ClassRankParams, ExperimentConfig, ExportParams, Govern16Params,
    NoGoverningParams, SpinParams, Type1Params, Type2Params, ValidateParams, parse_params
)

logger = logging.getLogger(__name__)

DEFAULT_PRESETS = {
    'classrank': 'governing_e',
    'govern16': 'governing_e',
    'nogoverning': 'governing_e',
    'charsum': 'cubic9',
}

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


def int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(' ', '').split(',') if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def int_pair(text: str) -> Tuple[int, int]:
    values = int_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected two integers lo,hi, got '{text}'")
    return values[0], values[1]


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors raised as ConfigError instead of exiting."""

    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_argument_group('field')
    source.add_argument('--preset', help='shipped preset (cubic9, quintic11, governing_e)')
    source.add_argument('--spec', dest='spec_path', type=Path, help='field spec JSON')
    run = common.add_argument_group('run')
    run.add_argument('--seed', type=int, default=0)
    run.add_argument('--threads', type=int, default=None, help='worker processes (default SPIN_THREADS)')
    run.add_argument('--out', type=Path, help='output CSV (default SPIN_OUTPUT_DIR/<subcommand>.csv)')
    run.add_argument('--db', action='store_true', help='record the run in the results store')
    run.add_argument('--db-url', help='results store URL (default SPIN_DB_URL)')

    spin = argparse.ArgumentParser(add_help=False)
    spin.add_argument('--max-norm', type=int, required=True)
    spin.add_argument('--set-S', dest='S', type=int_list, required=True, help='automorphism indices, e.g. 1,2')
    spin.add_argument('--psi', type=Path, help='psi table JSON (default trivial)')
    spin.add_argument('--checkpoints', type=int_list)

    parser = ArgumentParser(prog='spinlab', description='Spin symbol experiments')
    sub = parser.add_subparsers(dest='command', required=True, parser_class=ArgumentParser)

    p = sub.add_parser('validate', parents=[common], help='validate a field and its reciprocity law')
    p.add_argument('--reciprocity-pairs', type=int, default=0)
    p.add_argument('--cells', type=int, default=60)

    sub.add_parser('spins', parents=[common, spin], help='spin records of split primes')

    p = sub.add_parser('density', parents=[common, spin], help='frequencies of spin sign patterns')
    p.add_argument('--tolerance', type=float)

    p = sub.add_parser('type1', parents=[common, spin], help='Type I sums of s over principal ideals')
    p.add_argument('--modulus', type=int_list, help='generator coordinates of the modulus ideal m')
    p.add_argument('--method', default='ideals', choices=['ideals', 'box'])
    p.add_argument('--breakdown-modulus', type=int)
    p.add_argument('--max-ratio', type=float)

    p = sub.add_parser('type2', parents=[common], help='Type II bilinear sums')
    p.add_argument('--x', type=int, required=True)
    p.add_argument('--y', type=int, required=True)
    p.add_argument('--set-S', dest='S', type=int_list, required=True)
    p.add_argument('--psi', type=Path)
    p.add_argument('--seeds', type=int_list)
    p.add_argument('--max-ratio', type=float)
    p.add_argument('--method', default='ideals', choices=['ideals', 'box'])

    p = sub.add_parser('charsum', parents=[common], help='short real character sums')
    p.add_argument('--moduli', type=int_list)
    p.add_argument('--q-range', type=int_pair)
    p.add_argument('--samples', type=int)
    p.add_argument('--n', type=int)
    p.add_argument('--k', type=int)
    p.add_argument('--l', type=int)
    p.add_argument('--verify-up-to', type=int)

    p = sub.add_parser('classrank', parents=[common], help='2-power ranks of Cl(-4p)')
    p.add_argument('--max-norm', dest='max_p', type=int, required=True)
    p.add_argument('--no-governing', dest='governing', action='store_false')
    p.add_argument('--tolerance', type=float)

    p = sub.add_parser('govern16', parents=[common], help='16-rank against (r(pi)/pi)')
    p.add_argument('--max-norm', dest='max_p', type=int, required=True)
    p.add_argument('--moduli', type=int_list)
    p.add_argument('--order4-choice', type=int)
    p.add_argument('--min-cell-samples', type=int)

    p = sub.add_parser('nogoverning', parents=[common], help='witness pairs against a 16-rank governing field')
    p.add_argument('--modulus', type=int, required=True)
    p.add_argument('--max-norm', dest='max_p', type=int, required=True)
    p.add_argument('--witnesses', type=int)

    sub.add_parser('export-spec', parents=[common], help='write a preset in the explicit JSON layout')
    return parser


def _spin_config(params, spec: FieldSpec) -> SpinConfig:
    psi = PsiTable.load(params.psi) if params.psi else None
    return SpinConfig.build(params.S, spec, psi)


def _modulus_ideal(coords: Optional[List[int]], spec: FieldSpec):
    if not coords:
        return None
    if len(coords) == 1:
        element = FieldElement.rational(coords[0], spec.degree)
    elif len(coords) == spec.degree:
        element = FieldElement.of(coords)
    else:
        raise ConfigError(f"--modulus needs 1 or {spec.degree} coordinates, got {len(coords)}")
    if element.is_zero():
        raise ConfigError("--modulus must be nonzero")
    return ideal_of_element(element, spec)


def run_validate(engine: ExperimentEngine, params: ValidateParams) -> ExperimentResult:
    return engine.run_validate(params.reciprocity_pairs, params.cells)


def run_spins(engine: ExperimentEngine, params: SpinParams) -> ExperimentResult:
    return engine.run_spins(params.max_norm, _spin_config(params, engine.spec), params.checkpoints)


def run_density(engine: ExperimentEngine, params: SpinParams) -> ExperimentResult:
    return engine.run_density(params.max_norm, _spin_config(params, engine.spec), params.tolerance)


def run_type1(engine: ExperimentEngine, params: Type1Params) -> ExperimentResult:
    config = _spin_config(params, engine.spec)
    return engine.run_type1(params.max_norm, config, _modulus_ideal(params.modulus, engine.spec),
                            params.checkpoints, params.method, params.breakdown_modulus, params.max_ratio)


def run_type2(engine: ExperimentEngine, params: Type2Params) -> ExperimentResult:
    return engine.run_type2(params.x, params.y, _spin_config(params, engine.spec), params.seeds,
                            params.max_ratio, params.method)


def run_charsum(engine: ExperimentEngine, params: CharSumParams) -> ExperimentResult:
    return engine.run_charsum(params.moduli, params.q_range, params.samples, params.n, params.k,
                              params.l, params.verify_up_to)


def run_classrank(engine: ExperimentEngine, params: ClassRankParams) -> ExperimentResult:
    return engine.run_classrank(params.max_p, params.governing, params.tolerance)


def run_govern16(engine: ExperimentEngine, params: Govern16Params) -> ExperimentResult:
    return engine.run_govern16(params.max_p, params.moduli, params.order4_choice, params.min_cell_samples)


def run_nogoverning(engine: ExperimentEngine, params: NoGoverningParams) -> ExperimentResult:
    return engine.run_nogoverning_witness(params.modulus, params.max_p, params.witnesses)


SUBCOMMANDS: Dict[str, Tuple[type, Optional[Callable]]] = {
    'validate': (ValidateParams, run_validate),
    'spins': (SpinParams, run_spins),
    'density': (SpinParams, run_density),
    'type1': (Type1Params, run_type1),
    'type2': (Type2Params, run_type2),
    'charsum': (CharSumParams, run_charsum),
    'classrank': (ClassRankParams, run_classrank),
    'govern16': (Govern16Params, run_govern16),
    'nogoverning': (NoGoverningParams, run_nogoverning),
    'export-spec': (ExportParams, None),
}


def _comment_lines(params: ExperimentConfig, spec: FieldSpec, result: ExperimentResult) -> List[str]:
    config = params.model_dump(mode='json', exclude={'db', 'db_url', 'out', 'threads'})
    lines = [f"# subcommand: {result.name}", f"# field: {spec.name}"]
    lines += [f"# {key}: {value}" for key, value in config.items() if value is not None]
    lines += [f"# {key}: {value}" for key, value in result.summary.items()]
    lines += [f"# check {key}: {'ok' if ok else 'FAILED'}" for key, ok in result.checks.items()]
    return lines


def write_csv(rows: List[Dict], columns: List[str], path: Path, comments: List[str]):
    """
    Write a table after its '#' comment lines.

    Args:
        rows: Table rows
        columns: Header, in output order; no rows gives a header-only table
        path: Output file (parent directories are created)
        comments: Lines already starting with '#'
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    df = pd.DataFrame(rows, columns=columns)
    with open(path, 'w', newline='') as handle:
        for line in comments:
            handle.write(line + '\n')
        df.to_csv(handle, index=False, lineterminator='\n')
    logger.info(f"Wrote {len(df)} rows to {path}")


def write_result(result: ExperimentResult, params: ExperimentConfig, spec: FieldSpec, path: Path) -> List[Path]:
    """
    Write the main table to path and each secondary table next to it.

    Args:
        result: Finished run
        params: Validated parameters, echoed into the comment header
        spec: Field of the run
        path: Main CSV; secondary tables go to <stem>_<suffix>.csv

    Returns:
        Paths written, main table first
    """
    comments = _comment_lines(params, spec, result)
    write_csv(result.rows, result.columns, path, comments)
    written = [path]
    for suffix, rows in result.tables.items():
        extra = path.with_name(f"{path.stem}_{suffix}{path.suffix or '.csv'}")
        write_csv(rows, result.table_columns[suffix], extra, comments)
        written.append(extra)
    return written


def _open_store(params: ExperimentConfig) -> Optional[ResultsStore]:
    if not params.db:
        return None
    return ResultsStore(get_db_manager(params.db_url))


def execute(args: argparse.Namespace) -> int:
    """Run one parsed subcommand and return its exit code."""
    settings = get_settings()
    model, handler = SUBCOMMANDS[args.command]
    values = {k: v for k, v in vars(args).items() if k != 'command'}
    if values.get('preset') is None and values.get('spec_path') is None:
        values['preset'] = DEFAULT_PRESETS.get(args.command, 'cubic9')
    values['threads'] = values.get('threads') or settings.threads
    params = parse_params(model, **values)
    spec = resolve_field(params.preset if params.spec_path is None else None, params.spec_path)

    if handler is None:
        spec.save(params.out)
        print(f"✅ Exported {spec.name} to {params.out}")
        return EXIT_OK

    out = params.out or settings.output_dir / f"{args.command}.csv"
    store = _open_store(params)
    run_id = None
    if store:
        run_id = store.start_run(args.command, params.model_dump(mode='json'), spec.name, params.seed)
    engine = ExperimentEngine(
        spec, seed=params.seed, threads=params.threads,
        class_store=store.cached_class_numbers if store else None,
        class_sink=(lambda data: store.save_class_data(data, spec.name)) if store else None,
    )
    try:
        result = handler(engine, params)
    except ConfigError:
        if store:
            store.finish_run(run_id, RunStatus.CONFIG_ERROR)
        raise
    except SpinLabError:
        if store:
            store.finish_run(run_id, RunStatus.FAILED)
        raise

    written = write_result(result, params, spec, out)
    if store:
        if result.records:
            store.save_spin_records(run_id, result.records)
        store.finish_run(run_id, RunStatus.PASSED if result.passed else RunStatus.FAILED, str(out))

    print(f"{'✅' if result.passed else '❌'} {result.name}: {len(result.rows)} rows -> {', '.join(map(str, written))}")
    for key, ok in result.checks.items():
        if not ok:
            print(f"  ❌ check failed: {key}")
    return EXIT_OK if result.passed else EXIT_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    """
    Command-line entry point.

    Args:
        argv: Arguments without the program name (default sys.argv[1:])

    Returns:
        0 when every check passed, 1 on a failed check or computation error,
        2 on invalid configuration

    Usage:
        python scripts/run_experiment.py spins --preset cubic9 --max-norm 100000
    """
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        return execute(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        print(f"❌ Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SpinLabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == '__main__':
    sys.exit(main())
