"""
Results store connection

One engine per store URL. SQLite files get their parent directory created; in-memory
SQLite ('sqlite://') shares a single connection so every session sees the same tables.
"""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional

from sqlalchemy import create_engine, inspect
from sqlalchemy.engine import make_url
from sqlalchemy.orm import Session, sessionmaker
from sqlalchemy.pool import StaticPool

from src.config import get_settings
from .schema import Base

logger = logging.getLogger(__name__)


def _sqlite_file(url: str) -> Optional[Path]:
    """Path of a file-backed SQLite database, None for anything else."""
    parsed = make_url(url)
    if parsed.get_backend_name() != 'sqlite' or parsed.database in (None, '', ':memory:'):
        return None
    return Path(parsed.database)


class DatabaseManager:
    """
    Engine and session factory for the results store.

    Supports SQLite files, in-memory SQLite and any other SQLAlchemy URL.
    """

    def __init__(self, database_url: Optional[str] = None):
        """
        Initialize the store connection.

        Args:
            database_url: SQLAlchemy URL. If None, uses SPIN_DB_URL from the settings
                          (default sqlite:///data/spin_results.db)
        """
        self.database_url = database_url or get_settings().db_url

        if self.database_url.startswith('sqlite'):
            path = _sqlite_file(self.database_url)
            if path is not None:
                path.parent.mkdir(parents=True, exist_ok=True)
            self.engine = create_engine(self.database_url,
                                        connect_args={'check_same_thread': False},
                                        poolclass=StaticPool)
        else:
            self.engine = create_engine(self.database_url, pool_pre_ping=True)

        self._sessions = sessionmaker(bind=self.engine, autoflush=False, expire_on_commit=False)
        logger.info(f"Results store at {self.database_url.split('@')[-1]}")

    def init_db(self):
        """
        Create missing tables.

        Existing tables and their rows are left alone, so this is safe to call on
        every run.
        """
        Base.metadata.create_all(bind=self.engine)
        logger.debug(f"Tables: {', '.join(self.table_names())}")

    def table_names(self) -> List[str]:
        """
        Tables present in the store.

        Returns:
            Sorted table names
        """
        return sorted(inspect(self.engine).get_table_names())

    @contextmanager
    def get_session_context(self) -> Iterator[Session]:
        """
        Session as a context manager, committed on success.

        Yields:
            SQLAlchemy Session object

        Raises:
            Whatever the block raised, after rolling the session back

        Usage:
            with db_manager.get_session_context() as session:
                session.add(ExperimentRun(subcommand='spins', preset='cubic9'))
        """
        session = self._sessions()
        try:
            yield session
            session.commit()
        except Exception:
            session.rollback()
            raise
        finally:
            session.close()


_db_manager = None


def get_db_manager(database_url: Optional[str] = None) -> DatabaseManager:
    """
    Process-wide database manager.

    Args:
        database_url: Store URL; a URL different from the current manager's replaces it

    Returns:
        DatabaseManager instance
    """
    global _db_manager
    if _db_manager is None or (database_url is not None and database_url != _db_manager.database_url):
        _db_manager = DatabaseManager(database_url)
    return _db_manager


def init_db(database_url: Optional[str] = None) -> DatabaseManager:
    """
    Create the results store tables.

    Args:
        database_url: Store URL (optional)

    Returns:
        The manager of the initialized store
    """
    db_manager = get_db_manager(database_url)
    db_manager.init_db()
    return db_manager
