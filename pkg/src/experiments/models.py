"""Experiment grid configuration and per-run records."""

import hashlib
import json
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.optimizer.models import PRESETS, SsaParams, StrategyToggles, TelemetryLevel
from src.problems import registry
from src.problems.uav import DEFAULT_INTERIOR, CostWeights
from src.rng.streams import derive_stream_id

SCHEMA_VERSION = 1
DEFAULT_REFERENCE = "GeoSSA"

# Grid extent, destination and report options; changing them keeps existing runs valid
RUN_HASH_EXCLUDE = {"algorithms", "problems", "repetitions", "output_dir", "workers", "reference", "alpha"}

RUNS_COLUMNS = [
    "algorithm",
    "problem",
    "repetition",
    "seed",
    "stream_id",
    "best_fitness",
    "evaluations",
    "numeric_guard_events",
    "wall_time",
    "best_position",
]
FAILURES_COLUMNS = ["algorithm", "problem", "repetition", "stream_id", "error_type", "message"]
CONVERGENCE_COLUMNS = ["t", "best_fitness", "diversity", "exploration_pct"]
FEASIBILITY_COLUMNS = [
    "algorithm",
    "problem",
    "repetition",
    "raw_objective",
    "penalized_objective",
    "max_violation",
    "feasible",
    "singular",
]


class ParamOverrides(BaseModel):
    """Optional ``SsaParams`` overrides from the ``params`` block."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    pd_fraction: float | None = Field(default=None, gt=0.0, lt=1.0)
    sd_fraction: float | None = Field(default=None, gt=0.0, lt=1.0)
    st: float | None = Field(default=None, ge=0.5, le=1.0)
    epsilon: float | None = Field(default=None, gt=0.0)
    per_coordinate_walk: bool | None = None

    def as_dict(self) -> dict[str, Any]:
        return self.model_dump(exclude_none=True)


class UavSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    interior: int = Field(default=DEFAULT_INTERIOR, ge=1)
    weights: CostWeights = Field(default_factory=CostWeights)


class ExperimentConfig(BaseModel):
    """One experiment grid: algorithms x problems x repetitions."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    algorithms: list[str] = Field(..., min_length=1, description="Preset names")
    problems: list[str] = Field(..., min_length=1, description="Problem references")
    n: int = Field(default=30, ge=2, description="Population size")
    T: int = Field(default=500, ge=1, description="Iterations per run")
    repetitions: int = Field(default=30, ge=1)
    base_seed: int = Field(default=42, ge=0, le=2**64 - 1)
    output_dir: Path = Field(default=Path("results"))
    telemetry_level: TelemetryLevel = TelemetryLevel.CURVE_AND_DIVERSITY
    workers: int = Field(default=1, ge=1)
    reference: str = DEFAULT_REFERENCE
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    snapshot_every: int = Field(default=50, ge=1)
    params: ParamOverrides = Field(default_factory=ParamOverrides)
    uav: UavSettings = Field(default_factory=UavSettings)

    @field_validator("algorithms")
    @classmethod
    def _known_presets(cls, value: list[str]) -> list[str]:
        for name in value:
            if name not in PRESETS:
                raise ValueError(
                    f"unknown algorithm preset '{name}' (valid: {', '.join(PRESETS)})"
                )
        if len(set(value)) != len(value):
            raise ValueError("algorithm names must be unique")
        return value

    @field_validator("problems")
    @classmethod
    def _known_problems(cls, value: list[str]) -> list[str]:
        expanded: list[str] = []
        for reference in value:
            for item in registry.expand_reference(reference):
                normalized = registry.validate_reference(item)
                if normalized not in expanded:
                    expanded.append(normalized)
        return expanded

    @model_validator(mode="before")
    @classmethod
    def _default_reference(cls, data: Any) -> Any:
        # Without an explicit reference, GeoSSA if present, else the first algorithm
        if isinstance(data, dict) and data.get("reference") is None:
            algorithms = data.get("algorithms")
            if isinstance(algorithms, list) and algorithms:
                data = dict(data)
                data["reference"] = (
                    DEFAULT_REFERENCE if DEFAULT_REFERENCE in algorithms else algorithms[0]
                )
        return data

    @model_validator(mode="after")
    def _reference_in_grid(self) -> "ExperimentConfig":
        if self.reference not in self.algorithms:
            raise ValueError(
                f"reference '{self.reference}' is not one of the algorithms {self.algorithms}"
            )
        return self

    def ssa_params(self) -> SsaParams:
        return SsaParams(n=self.n, T=self.T, **self.params.as_dict())

    def toggles(self, algorithm: str) -> StrategyToggles:
        return PRESETS[algorithm]

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """Copy with CLI overrides applied; ``None`` values are ignored."""
        updates = {k: v for k, v in overrides.items() if v is not None}
        if not updates:
            return self
        data = self.model_dump(exclude_unset=True)
        data.update(updates)
        return ExperimentConfig.model_validate(data)

    def run_hash(self) -> str:
        """sha256 of the settings that shape each run (n, T, seed, params, telemetry, uav)."""
        data = self.model_dump(mode="json", exclude=RUN_HASH_EXCLUDE)
        return hashlib.sha256(json.dumps(data, sort_keys=True).encode("utf-8")).hexdigest()

    def grid(self) -> list[tuple[str, str, int]]:
        """All (algorithm, problem, repetition) cells in canonical order."""
        return [
            (algorithm, problem, repetition)
            for algorithm in self.algorithms
            for problem in self.problems
            for repetition in range(self.repetitions)
        ]


class RunRecord(BaseModel):
    """Outcome of one (algorithm, problem, repetition) cell.

    ``stream_id`` is reconstructible from the labels; ``seed`` is the grid's
    base seed.
    """

    model_config = ConfigDict(frozen=True)

    algorithm: str
    problem: str
    repetition: int = Field(ge=0)
    seed: int
    stream_id: int
    best_fitness: float
    best_position: list[float]
    wall_time: float = Field(ge=0.0)
    evaluations: int = Field(ge=0)
    numeric_guard_events: int = 0

    @property
    def key(self) -> tuple[str, str, int]:
        return self.algorithm, self.problem, self.repetition

    def stream_matches_labels(self) -> bool:
        return self.stream_id == derive_stream_id(self.algorithm, self.problem, self.repetition)

    def to_row(self) -> dict[str, Any]:
        row = self.model_dump()
        row["best_position"] = ";".join(repr(float(v)) for v in self.best_position)
        return row

    @classmethod
    def from_row(cls, row: dict[str, Any]) -> "RunRecord":
        data = dict(row)
        text = str(data.get("best_position", "") or "")
        data["best_position"] = [float(v) for v in text.split(";") if v]
        return cls.model_validate(data)
