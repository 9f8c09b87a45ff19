"""Per-iteration telemetry: convergence, diversity, exploration share, search history."""

import numpy as np

from src.optimizer.models import IterationTelemetry, Population, TelemetryLevel


def population_diversity(pop: Population | np.ndarray) -> float:
    """Median-deviation diversity.

    Div = (1/dim) * sum_j (1/n) * sum_i |median_j - x_ij|
    """
    positions = pop.positions if isinstance(pop, Population) else np.asarray(pop, dtype=float)
    positions = np.atleast_2d(positions)
    if positions.shape[0] < 1:
        raise ValueError("Diversity needs at least one member")
    median = np.median(positions, axis=0)
    return float(np.mean(np.abs(positions - median)))


def explore_exploit_split(div_t: float, div_max: float) -> tuple[float, float]:
    """Exploration and exploitation percentages relative to the running maximum diversity."""
    if div_max <= 0.0:
        return 0.0, 100.0
    exploration = min(100.0, max(0.0, 100.0 * div_t / div_max))
    return exploration, 100.0 - exploration


class TelemetryRecorder:
    """Collects one ``IterationTelemetry`` row per iteration.

    The running maximum diversity starts from the initial population so the
    first iteration's exploration share is measured against it.
    """

    def __init__(
        self, level: TelemetryLevel, total_iterations: int, snapshot_every: int = 50
    ) -> None:
        self.level = level
        self.total_iterations = total_iterations
        self.snapshot_every = max(1, snapshot_every)
        self.div_max = 0.0
        self.rows: list[IterationTelemetry] = []

    def observe_initial(self, pop: Population) -> None:
        self.div_max = population_diversity(pop)

    def _wants_snapshot(self, t: int) -> bool:
        if self.level is not TelemetryLevel.FULL:
            return False
        return t == 1 or t == self.total_iterations or t % self.snapshot_every == 0

    def record(self, t: int, best_fitness: float, pop: Population) -> IterationTelemetry:
        diversity = population_diversity(pop)
        self.div_max = max(self.div_max, diversity)
        exploration, exploitation = explore_exploit_split(diversity, self.div_max)

        row = IterationTelemetry(
            t=t,
            best_fitness=best_fitness,
            diversity=diversity,
            exploration_pct=exploration,
            exploitation_pct=exploitation,
            snapshot=pop.positions.copy() if self._wants_snapshot(t) else None,
        )
        self.rows.append(row)
        return row
