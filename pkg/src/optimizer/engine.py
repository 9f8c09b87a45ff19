"""Sparrow search main loop.

One run is strictly sequential. Each generation ranks the flock, moves the
producers, then the scroungers, then a random subset of danger-aware
sparrows; every candidate is clamped, evaluated and kept only if it improves
on the member it came from.
"""

import logging
import math

import numpy as np

from src.optimizer.initialization import init_good_nodes, init_pseudo_random
from src.optimizer.models import (
    EdgeStrategy,
    InitStrategy,
    ObjectiveEvaluationError,
    Population,
    ProducerStrategy,
    RunResult,
    SsaParams,
    StrategyToggles,
    TelemetryLevel,
)
from src.optimizer.telemetry import TelemetryRecorder
from src.optimizer.updates import (
    NumericGuard,
    clamp_to_bounds,
    edge_update_original,
    edge_update_triangular,
    producer_update_original,
    producer_update_sine_cosine,
    scrounger_update,
)
from src.problems.models import ObjectiveProblem
from src.rng.streams import RngStream

logger = logging.getLogger(__name__)

NOISE_PHASE = "objective-noise"


class SparrowOptimizer:
    """SSA and its GeoSSA variants, selected by ``StrategyToggles``."""

    def __init__(
        self,
        problem: ObjectiveProblem,
        params: SsaParams,
        toggles: StrategyToggles,
        telemetry_level: TelemetryLevel = TelemetryLevel.CURVE_AND_DIVERSITY,
        snapshot_every: int = 50,
    ) -> None:
        self.problem = problem
        self.params = params
        self.toggles = toggles
        self.telemetry_level = telemetry_level
        self.snapshot_every = snapshot_every

        self._space = problem.space
        self._noise: RngStream | None = None
        self._evaluations = 0
        self._guard = NumericGuard()
        self._best_position = np.zeros(problem.dim)
        self._best_fitness = math.inf

    def _evaluate(self, x: np.ndarray, t: int, member: int) -> float:
        try:
            value = self.problem.evaluate(x, self._noise)
        except Exception as e:
            raise ObjectiveEvaluationError(
                f"Objective '{self.problem.name}' failed at iteration {t}, member {member}: {e}",
                iteration=t,
                member=member,
            ) from e
        self._evaluations += 1
        # NaN never wins a comparison; treat it as the worst possible value
        return value if not math.isnan(value) else math.inf

    def _try_move(self, pop: Population, index: int, candidate: np.ndarray, t: int) -> None:
        candidate = clamp_to_bounds(candidate, self._space)
        fitness = self._evaluate(candidate, t, index)
        if fitness < pop.fitness[index]:
            pop.positions[index] = candidate
            pop.fitness[index] = fitness
            if fitness < self._best_fitness:
                self._best_fitness = fitness
                self._best_position = candidate.copy()

    def _initialize(self, stream: RngStream) -> Population:
        if self.toggles.init is InitStrategy.GOOD_NODES:
            pop = init_good_nodes(self._space, self.params.n, prime=self.params.generating_prime)
        else:
            pop = init_pseudo_random(self._space, self.params.n, stream)

        for i in range(pop.size):
            pop.positions[i] = clamp_to_bounds(pop.positions[i], self._space)
            pop.fitness[i] = self._evaluate(pop.positions[i], 0, i)
            pop.evaluated[i] = True

        leader = int(np.argmin(pop.fitness))
        self._best_fitness = float(pop.fitness[leader])
        self._best_position = pop.positions[leader].copy()
        return pop

    def _iterate(self, pop: Population, t: int, stream: RngStream) -> None:
        params = self.params
        n = pop.size
        order = pop.rank()
        worst_index = int(order[-1])
        worst = pop.positions[worst_index].copy()
        worst_fitness = float(pop.fitness[worst_index])
        producers = min(params.producer_count, n)

        for rank, index in enumerate(order[:producers], start=1):
            x = pop.positions[index]
            if self.toggles.producer is ProducerStrategy.SINE_COSINE:
                candidate = producer_update_sine_cosine(
                    x, self._best_position, t, params, stream
                )
            else:
                candidate = producer_update_original(x, rank, t, params, stream)
            self._try_move(pop, int(index), candidate, t)

        producer_slice = order[:producers]
        producer_best = pop.positions[producer_slice[np.argmin(pop.fitness[producer_slice])]].copy()

        for rank, index in enumerate(order[producers:], start=producers + 1):
            candidate = scrounger_update(
                pop.positions[index], rank, producer_best, worst, n, stream
            )
            self._try_move(pop, int(index), candidate, t)

        danger = min(params.danger_count, n)
        for index in stream.choice_without_replacement(n, danger):
            x = pop.positions[index]
            if self.toggles.edge is EdgeStrategy.TRIANGULAR_WALK:
                candidate = edge_update_triangular(
                    x,
                    producer_best,
                    t,
                    params.T,
                    stream,
                    per_coordinate=params.per_coordinate_walk,
                )
            else:
                candidate = edge_update_original(
                    x,
                    self._best_position,
                    worst,
                    float(pop.fitness[index]),
                    self._best_fitness,
                    worst_fitness,
                    params,
                    stream,
                    guard=self._guard,
                )
            self._try_move(pop, int(index), candidate, t)

    def run(self, stream: RngStream) -> RunResult:
        """Execute one run.

        Args:
            stream: Stream owned by this run

        Returns:
            Best-so-far position and fitness plus the per-iteration curve

        Raises:
            ObjectiveEvaluationError: If the objective raises during the run
        """
        self._evaluations = 0
        self._guard = NumericGuard()
        self._noise = stream.spawn(NOISE_PHASE) if self.problem.stochastic else None

        pop = self._initialize(stream)
        initial_best = self._best_fitness

        recorder = TelemetryRecorder(self.telemetry_level, self.params.T, self.snapshot_every)
        recorder.observe_initial(pop)

        for t in range(1, self.params.T + 1):
            self._iterate(pop, t, stream)
            recorder.record(t, self._best_fitness, pop)

        if self._guard.events:
            logger.debug(
                f"{self.problem.name}: {self._guard.events} numeric guard event(s) "
                f"in {self.toggles.label} run"
            )

        return RunResult(
            best_position=self._best_position.copy(),
            best_fitness=self._best_fitness,
            curve=recorder.rows,
            evaluations=self._evaluations,
            seed=stream.seed,
            stream_id=stream.stream_id,
            initial_best_fitness=initial_best,
            numeric_guard_events=self._guard.events,
            algorithm=self.toggles.label,
        )


def run_optimizer(
    problem: ObjectiveProblem,
    params: SsaParams,
    toggles: StrategyToggles,
    stream: RngStream,
    telemetry_level: TelemetryLevel = TelemetryLevel.CURVE_AND_DIVERSITY,
    snapshot_every: int = 50,
) -> RunResult:
    """Run SSA/GeoSSA once on ``problem``; see ``SparrowOptimizer``."""
    optimizer = SparrowOptimizer(
        problem,
        params,
        toggles,
        telemetry_level=telemetry_level,
        snapshot_every=snapshot_every,
    )
    return optimizer.run(stream)
