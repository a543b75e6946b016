"""
Database schema for Spin Symbols Lab

SQLAlchemy ORM models for the results store: experiment runs, cached class-group
data for h(-4p), and spin records.
"""

from datetime import datetime
from sqlalchemy import (
    Column, Integer, String, Boolean, DateTime, Text, ForeignKey, Index,
    CheckConstraint, Enum
)
from sqlalchemy.orm import declarative_base, relationship
import enum

Base = declarative_base()


class RunStatus(enum.Enum):
    """Outcome of an experiment run (mirrors the CLI exit code)."""
    RUNNING = "running"
    PASSED = "passed"        # exit 0
    FAILED = "failed"        # exit 1
    CONFIG_ERROR = "config"  # exit 2


class ExperimentRun(Base):
    """One CLI invocation."""

    __tablename__ = 'experiment_runs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    subcommand = Column(String(30), nullable=False, index=True)
    preset = Column(String(100), nullable=True)
    config_json = Column(Text, nullable=False)
    seed = Column(Integer, nullable=False, default=0)
    status = Column(Enum(RunStatus), nullable=False, default=RunStatus.RUNNING)
    output_path = Column(String(500), nullable=True)

    started_at = Column(DateTime, default=datetime.utcnow, nullable=False)
    finished_at = Column(DateTime, nullable=True)

    spin_records = relationship('SpinRecordRow', back_populates='run', cascade='all, delete-orphan')

    def __repr__(self):
        return f"<ExperimentRun(subcommand='{self.subcommand}', status={self.status.value})>"


class ClassDataRow(Base):
    """Cached 2-power data of Cl(-4p), keyed by p."""

    __tablename__ = 'class_data'

    p = Column(Integer, primary_key=True)
    h = Column(Integer, nullable=False)
    two_part = Column(Integer, nullable=False)
    rk2 = Column(Integer, nullable=False)
    rk4 = Column(Integer, nullable=False)
    rk8 = Column(Integer, nullable=False)
    rk16 = Column(Integer, nullable=False)
    # depends on the governing field; None when not computed
    split_in_E = Column(Boolean, nullable=True)
    field_name = Column(String(100), nullable=True)

    __table_args__ = (
        CheckConstraint('p % 4 = 1', name='check_p_one_mod_four'),
        CheckConstraint('h > 0', name='check_h_positive'),
        Index('ix_class_data_rk16', 'rk16'),
    )

    def __repr__(self):
        return f"<ClassDataRow(p={self.p}, h={self.h})>"


class SpinRecordRow(Base):
    """Spins of one split prime ideal, tied to the run that produced them."""

    __tablename__ = 'spin_records'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey('experiment_runs.id'), nullable=False)

    p = Column(Integer, nullable=False, index=True)
    orbit_index = Column(Integer, nullable=False)
    ideal_key = Column(Text, nullable=False)
    generator = Column(Text, nullable=False)
    spins = Column(String(200), nullable=False)
    s = Column(Integer, nullable=False)
    b16 = Column(Integer, nullable=True)

    run = relationship('ExperimentRun', back_populates='spin_records')

    __table_args__ = (
        Index('ix_spin_run_p', 'run_id', 'p'),
    )

    def __repr__(self):
        return f"<SpinRecordRow(p={self.p}, orbit={self.orbit_index}, s={self.s})>"
