"""
Results store operations.

Records runs and their spin records, and caches ClassData so govern16 and
nogoverning runs reuse h(-4p) across invocations.
"""

import json
import logging
from datetime import datetime
from typing import Dict, Iterable, Optional, Sequence

from src.classgroup.ranks import ClassData
from src.spin.stream import SpinRecord
from .connection import DatabaseManager
from .schema import ClassDataRow, ExperimentRun, RunStatus, SpinRecordRow

logger = logging.getLogger(__name__)

# SQLite limits bound parameters per statement
QUERY_CHUNK = 500


class ResultsStore:
    """
    Persistence of runs, spin records and cached class data.

    Usage:
        store = ResultsStore(get_db_manager('sqlite:///data/spin_results.db'))
        run_id = store.start_run('spins', {'max_norm': 10000}, preset='cubic9')
        store.save_spin_records(run_id, records)
        store.finish_run(run_id, RunStatus.PASSED, output_path='output/spins.csv')
    """

    def __init__(self, db_manager: DatabaseManager):
        """
        Open the store, creating missing tables.

        Args:
            db_manager: Connection to the results database
        """
        self.db = db_manager
        self.db.init_db()

    def start_run(self, subcommand: str, config: Dict, preset: Optional[str] = None, seed: int = 0) -> int:
        """
        Record the start of a run.

        Args:
            subcommand: CLI subcommand name
            config: Run parameters, stored as sorted JSON
            preset: Preset name when the field came from one
            seed: RNG seed of the run

        Returns:
            Id of the new run row
        """
        with self.db.get_session_context() as session:
            run = ExperimentRun(subcommand=subcommand, preset=preset, seed=seed,
                                config_json=json.dumps(config, sort_keys=True, default=str))
            session.add(run)
            session.flush()
            run_id = run.id
        logger.info(f"Started run {run_id} ({subcommand})")
        return run_id

    def finish_run(self, run_id: int, status: RunStatus, output_path: Optional[str] = None):
        """
        Close a run with its final status.

        Args:
            run_id: Id returned by start_run
            status: Final status
            output_path: CSV the run wrote, if any
        """
        with self.db.get_session_context() as session:
            run = session.query(ExperimentRun).filter_by(id=run_id).first()
            if run is None:
                logger.warning(f"Run {run_id} not found")
                return
            run.status = status
            run.output_path = output_path
            run.finished_at = datetime.utcnow()

    def save_spin_records(self, run_id: int, records: Iterable[SpinRecord]) -> int:
        """
        Store the spin records of a run.

        Args:
            run_id: Owning run
            records: Records from a spin stream

        Returns:
            Number of rows written
        """
        rows = [
            SpinRecordRow(run_id=run_id, p=r.p, orbit_index=r.orbit_index, ideal_key=r.ideal_key,
                          generator=' '.join(str(x) for x in r.generator),
                          spins=' '.join(str(v) for v in r.spins), s=r.s, b16=r.b16)
            for r in records
        ]
        with self.db.get_session_context() as session:
            session.add_all(rows)
        logger.info(f"Saved {len(rows)} spin records for run {run_id}")
        return len(rows)

    def cached_class_numbers(self, primes: Sequence[int]) -> Dict[int, int]:
        """
        Look up cached class numbers.

        Args:
            primes: Primes p to look up

        Returns:
            Map p -> h(-4p) for the primes already cached; missing primes are absent
        """
        found: Dict[int, int] = {}
        primes = list(primes)
        with self.db.get_session_context() as session:
            for start in range(0, len(primes), QUERY_CHUNK):
                chunk = primes[start:start + QUERY_CHUNK]
                for row in session.query(ClassDataRow.p, ClassDataRow.h).filter(ClassDataRow.p.in_(chunk)):
                    found[row.p] = row.h
        logger.debug(f"class cache: {len(found)} of {len(primes)} primes")
        return found

    def save_class_data(self, data: Iterable[ClassData], field_name: Optional[str] = None) -> int:
        """
        Insert or update class data rows by p.

        Args:
            data: Class data to cache
            field_name: Governing field the split_in_E flags refer to

        Returns:
            Number of rows merged
        """
        count = 0
        with self.db.get_session_context() as session:
            for d in data:
                session.merge(ClassDataRow(p=d.p, h=d.h, two_part=d.two_part, rk2=d.rk2, rk4=d.rk4,
                                           rk8=d.rk8, rk16=d.rk16, split_in_E=d.split_in_E,
                                           field_name=field_name))
                count += 1
        logger.info(f"Cached {count} class-group rows")
        return count

    def load_class_data(self, p: int) -> Optional[ClassData]:
        """
        Cached class data of one prime.

        Ranks are recomputed from h by ClassData, so only p, h and the splitting flag
        are read back.

        Returns:
            ClassData, or None when p is not cached
        """
        with self.db.get_session_context() as session:
            row = session.query(ClassDataRow).filter_by(p=p).first()
            if row is None:
                return None
            return ClassData(p=row.p, h=row.h, split_in_E=row.split_in_E)
