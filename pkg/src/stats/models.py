"""Data models for the statistical comparison harness."""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd


class InsufficientDataError(ValueError):
    """Raised when a statistic needs more samples than were given."""


class InvalidShapeError(ValueError):
    """Raised for ragged or mismatched inputs."""


class IncompleteMatrixError(ValueError):
    """Raised when a run matrix has missing (algorithm, problem, repetition) cells."""

    def __init__(self, missing: list[tuple[str, str, int]]) -> None:
        self.missing = missing
        preview = ", ".join(f"{a}/{p}/{r}" for a, p, r in missing[:10])
        more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
        super().__init__(f"Run matrix is missing {len(missing)} cell(s): {preview}{more}")


@dataclass
class RunMatrix:
    """Final best fitness indexed by [algorithm][problem][repetition]."""

    algorithms: list[str]
    problems: list[str]
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        expected = (len(self.algorithms), len(self.problems))
        if self.values.ndim != 3 or self.values.shape[:2] != expected:
            raise InvalidShapeError(
                f"Run matrix values have shape {self.values.shape}, expected {expected} + (reps,)"
            )
        if np.isnan(self.values).any():
            missing = [
                (self.algorithms[a], self.problems[p], int(r))
                for a, p, r in zip(*np.nonzero(np.isnan(self.values)), strict=True)
            ]
            raise IncompleteMatrixError(missing)

    @property
    def repetitions(self) -> int:
        return int(self.values.shape[2])

    def samples(self, algorithm: str, problem: str) -> np.ndarray:
        return self.values[self.algorithms.index(algorithm), self.problems.index(problem)]

    def subset(self, algorithms: list[str]) -> "RunMatrix":
        """Matrix restricted to ``algorithms``, in the given order."""
        rows = [self.algorithms.index(a) for a in algorithms]
        return RunMatrix(list(algorithms), list(self.problems), self.values[rows])

    @classmethod
    def from_records(
        cls,
        records: pd.DataFrame,
        algorithms: list[str] | None = None,
        problems: list[str] | None = None,
        repetitions: int | None = None,
    ) -> "RunMatrix":
        """Build a matrix from rows with (algorithm, problem, repetition, best_fitness).

        Raises:
            IncompleteMatrixError: If any expected cell has no record
        """
        algorithms = algorithms or list(dict.fromkeys(records["algorithm"]))
        problems = problems or list(dict.fromkeys(records["problem"]))
        if repetitions is None:
            repetitions = int(records["repetition"].max()) + 1 if len(records) else 0

        values = np.full((len(algorithms), len(problems), repetitions), np.nan)
        a_index = {a: i for i, a in enumerate(algorithms)}
        p_index = {p: i for i, p in enumerate(problems)}
        for row in records.itertuples(index=False):
            a, p, r = a_index.get(row.algorithm), p_index.get(row.problem), int(row.repetition)
            if a is not None and p is not None and 0 <= r < repetitions:
                values[a, p, r] = row.best_fitness

        return cls(algorithms, problems, values)


@dataclass
class WilcoxonResult:
    """Two-sided paired signed-rank test outcome."""

    statistic: float  # W+, sum of ranks of positive differences
    p_value: float
    n_effective: int
    zero_differences: int
    degenerate: bool
    method: str  # "exact" or "normal"


@dataclass
class WinTieLoss:
    wins: int = 0
    ties: int = 0
    losses: int = 0

    @property
    def total(self) -> int:
        return self.wins + self.ties + self.losses

    def as_tuple(self) -> tuple[int, int, int]:
        return self.wins, self.ties, self.losses

    def __str__(self) -> str:
        return f"{self.wins}/{self.ties}/{self.losses}"


@dataclass
class FriedmanResult:
    """Per-problem average ranks (rows: problems, columns: algorithms) and AFV."""

    ranks: pd.DataFrame
    afv: pd.Series
    final_rank: pd.Series


@dataclass
class StatReport:
    """All comparison tables for one run matrix."""

    reference: str
    alpha: float
    summary: pd.DataFrame
    wilcoxon: pd.DataFrame
    friedman: FriedmanResult
    wtl: dict[str, WinTieLoss] = field(default_factory=dict)
    oe: dict[str, float] = field(default_factory=dict)
