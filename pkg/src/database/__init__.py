"""Results store for Spin Symbols Lab"""

from .connection import DatabaseManager, get_db_manager, init_db
from .store import ResultsStore

__all__ = ['DatabaseManager', 'get_db_manager', 'init_db', 'ResultsStore']
