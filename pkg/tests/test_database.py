"""Tests for the results store."""

import pytest

from src.classgroup.ranks import ClassData
from src.database import DatabaseManager, ResultsStore
from src.database.schema import ClassDataRow, ExperimentRun, RunStatus, SpinRecordRow
from src.spin.stream import SpinRecord


@pytest.fixture
def store():
    return ResultsStore(DatabaseManager('sqlite://'))


def test_run_lifecycle(store):
    run_id = store.start_run('spins', {'max_norm': 1000, 'S': [1]}, preset='cubic9', seed=3)
    store.finish_run(run_id, RunStatus.PASSED, 'output/spins.csv')
    with store.db.get_session_context() as session:
        run = session.query(ExperimentRun).filter_by(id=run_id).one()
        assert run.subcommand == 'spins'
        assert run.status == RunStatus.PASSED
        assert run.output_path == 'output/spins.csv'
        assert run.finished_at is not None
        assert '"max_norm": 1000' in run.config_json


def test_finish_unknown_run_is_ignored(store):
    store.finish_run(999, RunStatus.FAILED)


def test_spin_records(store):
    run_id = store.start_run('spins', {})
    records = [
        SpinRecord(p=19, orbit_index=i, ideal_key=f'19,{i};0,1', generator=(2, i, 1), spins=(-1,), s=-1)
        for i in range(3)
    ]
    assert store.save_spin_records(run_id, records) == 3
    with store.db.get_session_context() as session:
        rows = session.query(SpinRecordRow).filter_by(run_id=run_id).order_by(SpinRecordRow.orbit_index).all()
        assert [r.generator for r in rows] == ['2 0 1', '2 1 1', '2 2 1']
        assert {r.spins for r in rows} == {'-1'}
        run = session.query(ExperimentRun).filter_by(id=run_id).one()
        assert len(run.spin_records) == 3


def test_class_data_cache(store):
    data = [ClassData(p=17, h=4, split_in_E=False), ClassData(p=41, h=8, split_in_E=True)]
    assert store.save_class_data(data, 'governing_e') == 2
    assert store.cached_class_numbers([5, 17, 41]) == {17: 4, 41: 8}
    loaded = store.load_class_data(41)
    assert loaded.h == 8 and loaded.rk8 == 1 and loaded.split_in_E
    assert store.load_class_data(5) is None


def test_class_data_upsert(store):
    store.save_class_data([ClassData(p=13, h=2)])
    store.save_class_data([ClassData(p=13, h=2, split_in_E=False)])
    with store.db.get_session_context() as session:
        assert session.query(ClassDataRow).count() == 1


def test_cached_lookup_chunks(store):
    primes = list(range(1, 4001, 4))
    store.save_class_data([ClassData(p=p, h=1) for p in primes[:10]])
    assert len(store.cached_class_numbers(primes)) == 10


def test_tables_created(store):
    assert store.db.table_names() == ['class_data', 'experiment_runs', 'spin_records']


def test_file_store_creates_directory(tmp_path):
    db_file = tmp_path / 'nested' / 'results.db'
    manager = DatabaseManager(f"sqlite:///{db_file}")
    manager.init_db()
    assert db_file.parent.is_dir()
    assert 'class_data' in manager.table_names()
