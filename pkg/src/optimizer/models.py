"""Data models for the sparrow optimizer."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class InvalidPopulationError(ValueError):
    """Raised when a population would have fewer than two members."""


class InvalidParameterError(ValueError):
    """Raised for out-of-range optimizer parameters."""


class ObjectiveEvaluationError(RuntimeError):
    """Raised when the objective fails during a run; carries iteration context."""

    def __init__(self, message: str, iteration: int, member: int | None = None) -> None:
        super().__init__(message)
        self.iteration = iteration
        self.member = member


@dataclass(frozen=True)
class SearchSpace:
    """Axis-aligned box of feasible positions."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower, dtype=float).reshape(-1)
        upper = np.asarray(self.upper, dtype=float).reshape(-1)
        if lower.size < 1:
            raise ValueError("Search space must have at least one dimension")
        if lower.shape != upper.shape:
            raise ValueError(
                f"Bound lengths differ: lower has {lower.size}, upper has {upper.size}"
            )
        if not np.all(lower < upper):
            bad = np.flatnonzero(~(lower < upper)).tolist()
            raise ValueError(f"lower must be strictly below upper in every dimension; bad: {bad}")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, dim: int, low: float, high: float) -> "SearchSpace":
        """Box with the same scalar bounds in every dimension."""
        return cls(np.full(dim, float(low)), np.full(dim, float(high)))

    @property
    def dim(self) -> int:
        return int(self.lower.size)

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> bool:
        """True if every coordinate lies inside the closed box."""
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass
class Individual:
    """One sparrow: a position and its cached fitness."""

    position: np.ndarray
    fitness: float = float("inf")
    evaluated: bool = False


@dataclass
class Population:
    """The flock, stored as a position matrix plus a fitness vector."""

    positions: np.ndarray  # shape (n, dim)
    fitness: np.ndarray = field(default=None)  # type: ignore[assignment]
    evaluated: np.ndarray = field(default=None)  # type: ignore[assignment]
    sorted_by_fitness: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.positions = np.array(self.positions, dtype=float, ndmin=2)
        n = self.positions.shape[0]
        if self.fitness is None:
            self.fitness = np.full(n, np.inf)
        if self.evaluated is None:
            self.evaluated = np.zeros(n, dtype=bool)
        if self.sorted_by_fitness is None:
            self.sorted_by_fitness = np.arange(n)

    @property
    def size(self) -> int:
        return int(self.positions.shape[0])

    @property
    def dim(self) -> int:
        return int(self.positions.shape[1])

    @property
    def members(self) -> list[Individual]:
        return [self.individual(i) for i in range(self.size)]

    def individual(self, index: int) -> Individual:
        return Individual(
            position=self.positions[index].copy(),
            fitness=float(self.fitness[index]),
            evaluated=bool(self.evaluated[index]),
        )

    def rank(self) -> np.ndarray:
        """Sort member indices by fitness, ties broken by member index."""
        self.sorted_by_fitness = np.argsort(self.fitness, kind="stable")
        return self.sorted_by_fitness


class InitStrategy(str, Enum):
    """How the initial flock is placed."""

    PSEUDO_RANDOM = "pseudo_random"
    GOOD_NODES = "good_nodes"


class ProducerStrategy(str, Enum):
    """Producer position update."""

    ORIGINAL = "original"
    SINE_COSINE = "sine_cosine"


class EdgeStrategy(str, Enum):
    """Danger-aware (edge) sparrow update."""

    ORIGINAL = "original"
    TRIANGULAR_WALK = "triangular_walk"


class StrategyToggles(BaseModel):
    """Which of the three GeoSSA strategies are switched on."""

    model_config = ConfigDict(frozen=True)

    init: InitStrategy = InitStrategy.GOOD_NODES
    producer: ProducerStrategy = ProducerStrategy.SINE_COSINE
    edge: EdgeStrategy = EdgeStrategy.TRIANGULAR_WALK

    @property
    def label(self) -> str:
        for name, toggles in PRESETS.items():
            if toggles == self:
                return name
        return f"{self.init.value}+{self.producer.value}+{self.edge.value}"


PRESETS: dict[str, StrategyToggles] = {
    "SSA": StrategyToggles(
        init=InitStrategy.PSEUDO_RANDOM,
        producer=ProducerStrategy.ORIGINAL,
        edge=EdgeStrategy.ORIGINAL,
    ),
    "GeoSSA": StrategyToggles(
        init=InitStrategy.GOOD_NODES,
        producer=ProducerStrategy.SINE_COSINE,
        edge=EdgeStrategy.TRIANGULAR_WALK,
    ),
    # Ablations: each drops one strategy from GeoSSA
    "GeoSSA1": StrategyToggles(
        init=InitStrategy.PSEUDO_RANDOM,
        producer=ProducerStrategy.SINE_COSINE,
        edge=EdgeStrategy.TRIANGULAR_WALK,
    ),
    "GeoSSA2": StrategyToggles(
        init=InitStrategy.GOOD_NODES,
        producer=ProducerStrategy.ORIGINAL,
        edge=EdgeStrategy.TRIANGULAR_WALK,
    ),
    "GeoSSA3": StrategyToggles(
        init=InitStrategy.GOOD_NODES,
        producer=ProducerStrategy.SINE_COSINE,
        edge=EdgeStrategy.ORIGINAL,
    ),
}


def resolve_preset(name: str) -> StrategyToggles:
    """Look up a named preset.

    Raises:
        KeyError: If the name is not a known preset
    """
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(
            f"Unknown algorithm preset '{name}'. Valid presets: {', '.join(PRESETS)}"
        ) from None


class SsaParams(BaseModel):
    """Optimizer hyperparameters."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(default=30, ge=2, description="Population size")
    T: int = Field(default=500, ge=0, description="Number of generations")
    pd_fraction: float = Field(default=0.3, gt=0.0, lt=1.0, description="Producer share")
    sd_fraction: float = Field(default=0.2, gt=0.0, lt=1.0, description="Danger-aware share")
    st: float = Field(default=0.7, ge=0.5, le=1.0, description="Safety threshold ST")
    epsilon: float = Field(default=1e-50, gt=0.0, description="Division guard")
    seed: int = Field(default=0, ge=0, le=2**64 - 1)

    # Triangular-walk draws once per sparrow unless set
    per_coordinate_walk: bool = False
    # Overrides the good-nodes prime (smallest prime >= 2*dim + 3)
    generating_prime: int | None = Field(default=None, ge=2)

    @property
    def producer_count(self) -> int:
        """round(pd_fraction * n), at least 1. Python rounding, so exact halves go to even."""
        return max(1, int(round(self.pd_fraction * self.n)))

    @property
    def danger_count(self) -> int:
        return max(1, int(np.ceil(self.sd_fraction * self.n)))


class TelemetryLevel(str, Enum):
    """How much per-iteration data a run keeps."""

    CURVE = "curve"
    CURVE_AND_DIVERSITY = "curve_and_diversity"
    FULL = "full"


@dataclass
class IterationTelemetry:
    """Per-iteration record."""

    t: int
    best_fitness: float
    diversity: float
    exploration_pct: float
    exploitation_pct: float
    snapshot: np.ndarray | None = None


@dataclass
class RunResult:
    """Outcome of one optimizer run."""

    best_position: np.ndarray
    best_fitness: float
    curve: list[IterationTelemetry]
    evaluations: int
    seed: int
    stream_id: int = 0
    initial_best_fitness: float = float("inf")
    numeric_guard_events: int = 0
    algorithm: str = ""

    @property
    def best_curve(self) -> np.ndarray:
        return np.array([row.best_fitness for row in self.curve])
