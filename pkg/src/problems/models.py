"""Uniform objective contract shared by benchmark, UAV and engineering problems."""

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from src.optimizer.models import SearchSpace
from src.rng.streams import RngStream

ObjectiveFunction = Callable[[np.ndarray, RngStream | None], float]


class ProblemFamily(str, Enum):
    """Where a problem comes from."""

    BENCHMARK = "benchmark"
    UAV = "uav"
    ENGINEERING = "engineering"


@dataclass(frozen=True)
class ObjectiveProblem:
    """A named objective over a search space.

    ``function`` receives the position and, for stochastic objectives, a
    random stream owned by the calling run. Evaluation must be reentrant.
    """

    name: str
    space: SearchSpace
    function: ObjectiveFunction
    family: ProblemFamily = ProblemFamily.BENCHMARK
    stochastic: bool = False
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.space.dim

    def evaluate(self, x: np.ndarray, stream: RngStream | None = None) -> float:
        return float(self.function(np.asarray(x, dtype=float), stream))

    def __call__(self, x: np.ndarray, stream: RngStream | None = None) -> float:
        return self.evaluate(x, stream)
