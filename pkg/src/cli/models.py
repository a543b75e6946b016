"""
Experiment parameter models.

ExperimentConfig holds what every subcommand shares (field, seed, threads, output);
each subcommand adds its own parameters. Validation errors surface as ConfigError
(exit code 2).
"""

from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from src.config import get_settings
from src.errors import ConfigError


class ExperimentConfig(BaseModel):
    """Field selection and run plumbing shared by all subcommands."""
    preset: Optional[str] = None
    spec_path: Optional[Path] = None
    seed: int = 0
    threads: int = Field(default=1, ge=1)
    out: Optional[Path] = None
    db: bool = False
    db_url: Optional[str] = None

    model_config = {'extra': 'forbid'}

    @model_validator(mode='after')
    def one_field_source(self):
        if self.preset is not None and self.spec_path is not None:
            raise ValueError("give either --preset or --spec, not both")
        if self.spec_path is not None and not self.spec_path.exists():
            raise ValueError(f"field spec {self.spec_path} does not exist")
        return self


class NormBoundMixin(BaseModel):
    max_norm: int = Field(ge=1)

    @field_validator('max_norm')
    @classmethod
    def within_ceiling(cls, value: int) -> int:
        ceiling = get_settings().norm_ceiling
        if value > ceiling:
            raise ValueError(f"max norm {value} exceeds SPIN_NORM_CEILING = {ceiling}")
        return value


class SpinParams(ExperimentConfig, NormBoundMixin):
    """Parameters of spins, density and type1 runs."""
    S: List[int] = Field(min_length=1)
    psi: Optional[Path] = None
    checkpoints: Optional[List[int]] = None
    tolerance: Optional[float] = Field(default=None, gt=0)

    @field_validator('psi')
    @classmethod
    def psi_exists(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not value.exists():
            raise ValueError(f"psi table {value} does not exist")
        return value

    @field_validator('checkpoints')
    @classmethod
    def positive_checkpoints(cls, value: Optional[List[int]]) -> Optional[List[int]]:
        if value is not None and any(c < 1 for c in value):
            raise ValueError("checkpoints must be positive")
        return sorted(value) if value else value


class Type1Params(SpinParams):
    modulus: Optional[List[int]] = None
    method: str = 'ideals'
    breakdown_modulus: Optional[int] = Field(default=None, ge=2)
    max_ratio: Optional[float] = Field(default=None, gt=0)

    @field_validator('method')
    @classmethod
    def known_method(cls, value: str) -> str:
        if value not in ('ideals', 'box'):
            raise ValueError(f"method must be 'ideals' or 'box', got '{value}'")
        return value


class Type2Params(ExperimentConfig):
    x: int = Field(ge=1)
    y: int = Field(ge=1)
    S: List[int] = Field(min_length=1)
    psi: Optional[Path] = None
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    max_ratio: Optional[float] = Field(default=None, gt=0)
    method: str = 'ideals'

    @model_validator(mode='after')
    def product_within_ceiling(self):
        ceiling = get_settings().norm_ceiling
        if self.x * self.y > ceiling:
            raise ValueError(f"x * y = {self.x * self.y} exceeds SPIN_NORM_CEILING = {ceiling}")
        return self


class ValidateParams(ExperimentConfig):
    reciprocity_pairs: int = Field(default=0, ge=0)
    cells: int = Field(default=60, ge=1)


class CharSumParams(ExperimentConfig):
    moduli: Optional[List[int]] = None
    q_range: Tuple[int, int] = (1000, 100_000)
    samples: int = Field(default=50, ge=1)
    n: int = Field(default=3, ge=1)
    k: int = Field(default=1, ge=1)
    l: int = 0
    verify_up_to: int = Field(default=0, ge=0)

    @field_validator('q_range')
    @classmethod
    def ordered_range(cls, value: Tuple[int, int]) -> Tuple[int, int]:
        if value[0] < 3 or value[1] < value[0]:
            raise ValueError(f"q range {value} must satisfy 3 <= lo <= hi")
        return value


class ClassRankParams(ExperimentConfig):
    max_p: int = Field(ge=5)
    governing: bool = True
    tolerance: float = Field(default=0.02, gt=0)


class Govern16Params(ExperimentConfig):
    max_p: int = Field(ge=17)
    moduli: List[int] = Field(default_factory=lambda: [16, 32])
    order4_choice: int = Field(default=0, ge=0)
    min_cell_samples: int = Field(default=5, ge=1)


class NoGoverningParams(ExperimentConfig):
    modulus: int = Field(ge=8)
    max_p: int = Field(ge=17)
    witnesses: int = Field(default=10, ge=1)


class ExportParams(ExperimentConfig):
    out: Path


def parse_params(model: type, **values) -> BaseModel:
    """
    Build a parameter model, mapping pydantic validation errors to ConfigError.

    Raises:
        ConfigError: any invalid value
    """
    try:
        return model(**{k: v for k, v in values.items() if v is not None})
    except ValidationError as e:
        messages = '; '.join(f"{'.'.join(str(x) for x in err['loc']) or 'config'}: {err['msg']}"
                             for err in e.errors())
        raise ConfigError(messages) from e
