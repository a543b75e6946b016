"""
Process settings

Reads environment variables (optionally from a .env file) once and exposes them as
a Settings object. Experiment parameters live in src/cli/models.py.
"""

import os
import logging
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


@dataclass(frozen=True)
class Settings:
    """Environment-derived defaults."""

    db_url: str
    threads: int
    enum_ceiling: int
    norm_ceiling: int
    output_dir: Path
    log_level: str

    @classmethod
    def from_env(cls) -> 'Settings':
        """
        Read SPIN_* variables from the environment (after .env is loaded).

        Returns:
            Settings with defaults for every unset variable
        """
        db_url = os.getenv('SPIN_DB_URL')
        if db_url is None:
            db_url = f"sqlite:///{Path('./data/spin_results.db')}"
        return cls(
            db_url=db_url,
            threads=int(os.getenv('SPIN_THREADS', '1')),
            enum_ceiling=int(os.getenv('SPIN_ENUM_CEILING', str(20_000_000))),
            norm_ceiling=int(os.getenv('SPIN_NORM_CEILING', str(10_000_000))),
            output_dir=Path(os.getenv('SPIN_OUTPUT_DIR', './output')),
            log_level=os.getenv('SPIN_LOG_LEVEL', 'INFO').upper(),
        )


_settings = None


def get_settings() -> Settings:
    """Return the process-wide settings, reading the environment on first use."""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def configure_logging(level: str = None):
    """Configure root logging the way every entry point does."""
    level = level or get_settings().log_level
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=LOG_FORMAT)
