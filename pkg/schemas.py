# schemas.py
from pathlib import Path
from fractions import Fraction
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, field_validator

from rauzy_engine import Side, StopWhen

Subcommand = Literal[
    "classify", "induce", "symmetrize", "thin-check", "orbit", "render", "verify", "scan", "log",
]
OutputFormat = Literal["json", "svg", "ascii"]

DEFAULT_HEIGHT = 50
DEFAULT_SAMPLES = 1000
DEFAULT_SEED = 7
MAX_SEED = 2**64 - 1


class CommandConfig(BaseModel):
    """Validated CLI invocation; one per run."""

    model_config = ConfigDict(extra="forbid")

    subcommand: Subcommand
    params: Optional[str] = None
    trace: Optional[Path] = None
    point: Optional[str] = None
    side: Side = "right"
    stop: StopWhen = "symmetric"
    max_steps: int = 10_000
    max_size: int = 10_000
    max_generalized: int = 12
    epsilon: str = "0"
    periods: int = 3
    digits: int = 6
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    height: int = DEFAULT_HEIGHT
    workers: int = 1
    thin: bool = False
    edges: bool = False
    format: OutputFormat = "json"
    command_filter: Optional[Subcommand] = None
    last: Optional[int] = None
    output: Optional[Path] = None
    output_dir: Path = Path("./out")
    log_file: Optional[Path] = None
    quiet: bool = False
    no_log: bool = False

    @field_validator("max_steps", "max_generalized", "samples", "periods")
    @classmethod
    def _non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("caps must be non-negative")
        return v

    @field_validator("max_size", "height", "workers", "last")
    @classmethod
    def _positive(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("digits")
    @classmethod
    def _digits(cls, v: int) -> int:
        if not (0 <= v <= 60):
            raise ValueError("digits must lie in [0, 60]")
        return v

    @field_validator("seed")
    @classmethod
    def _seed_range(cls, v: int) -> int:
        if not (0 <= v <= MAX_SEED):
            raise ValueError("seed must be a 64-bit unsigned integer")
        return v

    @field_validator("epsilon")
    @classmethod
    def _epsilon(cls, v: str) -> str:
        try:
            e = Fraction(v)
        except (ValueError, ZeroDivisionError) as ex:
            raise ValueError(f"epsilon must be an exact rational: {v!r}") from ex
        if not (0 <= e <= 1):
            raise ValueError("epsilon must lie in [0, 1]")
        return v


class CaseModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    index: int
    branch: Optional[Literal["a", "b", "between"]] = None


class SymmetrizationReport(BaseModel):
    """One engine-versus-matrix comparison, as written to JSON."""

    model_config = ConfigDict(extra="forbid")

    params: List[object]
    case: Optional[CaseModel]
    counts: dict
    matrix: Optional[List[List[int]]]
    predicted: Literal["symmetric", "hole", "degenerate"]
    engine: Literal["symmetric", "hole", "degenerate"]
    engine_params: Optional[List[object]]
    agree: bool
    generalized_iterations: int
    ordinary_iterations: int
    route: str = ""
    findings: List[str] = []

    @field_validator("matrix")
    @classmethod
    def _square(cls, v):
        if v is not None and (len(v) != 4 or any(len(r) != 4 for r in v)):
            raise ValueError("transition matrix must be 4x4")
        return v


class VerifySummary(BaseModel):
    model_config = ConfigDict(extra="forbid")

    samples: int
    seed: int
    height: int
    agreements: int = 0
    symmetric: int = 0
    holes: int = 0
    degenerate: int = 0
    max_generalized: int = 0
    case_counts: dict = {}
    mismatches: List[SymmetrizationReport] = []
    findings: List[str] = []
    thin: Optional[bool] = None
    passed: bool = True

    @field_validator("agreements")
    @classmethod
    def _agreements_le_samples(cls, v: int, info) -> int:
        samples = info.data.get("samples", 0)
        if v > samples:
            raise ValueError("agreements cannot exceed samples")
        return v
