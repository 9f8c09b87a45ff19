"""Grid execution: every (algorithm, problem, repetition) cell in its own stream.

Runs are independent. With ``workers > 1`` they are dispatched to a process
pool; results are collected in the parent, which is the only writer of the
output tree, and sorted before the summary files are written.
"""

import json
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from src import __version__
from src.experiments.logging import StructuredLogger
from src.experiments.models import SCHEMA_VERSION, ExperimentConfig, RunRecord
from src.experiments.monitoring import GridMonitor
from src.experiments.reports import (
    emit_reports,
    matrix_from_records,
    read_feasibility,
    read_metadata,
    read_runs,
    write_convergence,
    write_failures,
    write_feasibility,
    write_metadata,
    write_runs,
    write_snapshots,
)
from src.optimizer.engine import run_optimizer
from src.optimizer.models import IterationTelemetry, SsaParams, StrategyToggles, TelemetryLevel
from src.problems import engineering, registry
from src.problems.coefficients import coefficient_tables, file_checksum
from src.problems.models import ProblemFamily
from src.problems.uav import CostWeights, terrain_checksum
from src.rng.streams import derive_stream_id, stream_for_run
from src.stats.models import InsufficientDataError, RunMatrix

logger = StructuredLogger(__name__)


class ResumeMismatchError(ValueError):
    """Existing results were produced with different run settings."""


@dataclass(frozen=True)
class RunTask:
    """Everything a worker needs to execute one cell. Must stay picklable."""

    algorithm: str
    problem: str
    repetition: int
    base_seed: int
    params: SsaParams
    toggles: StrategyToggles
    telemetry_level: TelemetryLevel
    snapshot_every: int
    interior: int
    weights: CostWeights
    base_dir: Path | None = None

    @property
    def cell(self) -> str:
        return f"{self.algorithm}/{self.problem}/{self.repetition}"


@dataclass
class RunOutcome:
    task: RunTask
    record: RunRecord | None = None
    curve: list[IterationTelemetry] = field(default_factory=list)
    failure: dict[str, Any] | None = None
    feasibility: dict[str, Any] | None = None


@dataclass
class GridResult:
    """Records and artifacts of one ``run_grid`` call."""

    config: ExperimentConfig
    output_dir: Path
    records: list[RunRecord]
    failures: list[dict[str, Any]]
    matrix: RunMatrix | None = None
    report_paths: list[Path] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0


def _failure_row(task: RunTask, error: BaseException) -> dict[str, Any]:
    return {
        "algorithm": task.algorithm,
        "problem": task.problem,
        "repetition": task.repetition,
        "stream_id": derive_stream_id(task.algorithm, task.problem, task.repetition),
        "error_type": type(error).__name__,
        "message": str(error),
    }


def execute_run(task: RunTask) -> RunOutcome:
    """Run one cell. Errors are returned in the outcome, never raised.

    The problem is resolved here rather than shipped from the parent because
    objective closures cannot be pickled.
    """
    stream = stream_for_run(task.base_seed, (task.algorithm, task.problem, task.repetition))
    started = time.perf_counter()
    try:
        problem = registry.resolve(
            task.problem,
            interior=task.interior,
            weights=task.weights,
            base_dir=task.base_dir,
        )
        result = run_optimizer(
            problem,
            task.params,
            task.toggles,
            stream,
            telemetry_level=task.telemetry_level,
            snapshot_every=task.snapshot_every,
        )
    except Exception as e:
        logger.error(
            f"Run {task.cell} failed: {e}",
            exc_info=True,
            algorithm=task.algorithm,
            problem=task.problem,
            repetition=task.repetition,
        )
        return RunOutcome(task=task, failure=_failure_row(task, e))
    wall_time = time.perf_counter() - started

    record = RunRecord(
        algorithm=task.algorithm,
        problem=task.problem,
        repetition=task.repetition,
        seed=task.base_seed,
        stream_id=stream.stream_id,
        best_fitness=float(result.best_fitness),
        best_position=[float(v) for v in result.best_position],
        wall_time=wall_time,
        evaluations=result.evaluations,
        numeric_guard_events=result.numeric_guard_events,
    )

    feasibility = None
    if problem.family is ProblemFamily.ENGINEERING:
        report = engineering.evaluate(problem.name, result.best_position)
        feasibility = {
            "algorithm": task.algorithm,
            "problem": task.problem,
            "repetition": task.repetition,
            "raw_objective": report.raw_objective,
            "penalized_objective": report.penalized_objective,
            "max_violation": report.max_violation,
            "feasible": report.feasible,
            "singular": report.singular,
        }

    return RunOutcome(task=task, record=record, curve=result.curve, feasibility=feasibility)


def build_tasks(
    config: ExperimentConfig,
    skip: set[tuple[str, str, int]] | None = None,
    base_dir: Path | None = None,
) -> list[RunTask]:
    params = config.ssa_params()
    skip = skip or set()
    return [
        RunTask(
            algorithm=algorithm,
            problem=problem,
            repetition=repetition,
            base_seed=config.base_seed,
            params=params,
            toggles=config.toggles(algorithm),
            telemetry_level=config.telemetry_level,
            snapshot_every=config.snapshot_every,
            interior=config.uav.interior,
            weights=config.uav.weights,
            base_dir=base_dir,
        )
        for algorithm, problem, repetition in config.grid()
        if (algorithm, problem, repetition) not in skip
    ]


def _checksums(config: ExperimentConfig, base_dir: Path | None) -> dict[str, str]:
    checksums = {
        "benchmark_constants": coefficient_tables().checksum,
        "terrain_default": terrain_checksum(),
    }
    for problem in config.problems:
        if problem.startswith(f"{registry.UAV_PREFIX}:"):
            path = Path(problem.split(":", 1)[1])
            if not path.is_absolute() and base_dir is not None:
                path = base_dir / path
            if path.exists():
                checksums[problem] = file_checksum(path)
    return checksums


def build_metadata(
    config: ExperimentConfig,
    records: list[RunRecord],
    failures: list[dict[str, Any]],
    base_dir: Path | None = None,
) -> dict[str, Any]:
    """Grid metadata. Contains nothing time-dependent so reruns match byte for byte."""
    cells = [
        {
            "algorithm": algorithm,
            "problem": problem,
            "repetition": repetition,
            "stream_id": derive_stream_id(algorithm, problem, repetition),
        }
        for algorithm, problem, repetition in config.grid()
    ]
    stream_ids = [cell["stream_id"] for cell in cells]
    return {
        "schema_version": SCHEMA_VERSION,
        "code_version": __version__,
        "config_hash": config.run_hash(),
        "config": config.model_dump(mode="json"),
        "checksums": _checksums(config, base_dir),
        "runs": {"expected": len(cells), "completed": len(records), "failed": len(failures)},
        "streams": {
            "base_seed": config.base_seed,
            "distinct": len(set(stream_ids)) == len(stream_ids),
            "records_match_labels": all(r.stream_matches_labels() for r in records),
            "cells": cells,
        },
    }


def _check_resumable(config: ExperimentConfig, output_dir: Path) -> None:
    try:
        metadata = read_metadata(output_dir)
    except json.JSONDecodeError as e:
        raise ResumeMismatchError(f"Cannot resume: unreadable metadata in {output_dir}: {e}") from e
    if not metadata:
        return
    stored = metadata.get("config_hash")
    if stored is None:
        logger.warning("No config hash recorded; resuming without a settings check", output_dir=str(output_dir))
        return
    if stored != config.run_hash():
        raise ResumeMismatchError(
            f"Cannot resume: runs in {output_dir} were written with different settings "
            "(n, T, base_seed, params, telemetry or uav). Use a new output directory."
        )


def run_grid(
    config: ExperimentConfig,
    resume: bool = False,
    base_dir: Path | None = None,
    monitor: GridMonitor | None = None,
) -> GridResult:
    """Execute the whole grid and write its outputs under ``config.output_dir``.

    Args:
        config: Validated experiment config
        resume: Keep records already in ``runs.csv`` instead of re-running them
        base_dir: Directory relative terrain paths are resolved against
        monitor: Progress tracker; a fresh one is created if omitted

    Returns:
        Records, failures and (when every cell succeeded) the run matrix

    Raises:
        ResumeMismatchError: If resuming over results written with other run settings
    """
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    grid_keys = set(config.grid())

    records: list[RunRecord] = []
    feasibility: list[dict[str, Any]] = []
    if resume:
        _check_resumable(config, output_dir)
        records = [r for r in read_runs(output_dir) if r.key in grid_keys]
        done = {r.key for r in records}
        feasibility = [
            row
            for row in read_feasibility(output_dir)
            if (row["algorithm"], row["problem"], int(row["repetition"])) in done
        ]
        logger.info(f"Resuming grid: {len(records)} run(s) already complete", output_dir=str(output_dir))

    tasks = build_tasks(config, skip={r.key for r in records}, base_dir=base_dir)
    monitor = monitor or GridMonitor(total_runs=len(grid_keys))
    monitor.stats.total_runs = len(grid_keys)
    if records:
        monitor.record_skip(len(records))

    failures: list[dict[str, Any]] = []

    def collect(outcome: RunOutcome) -> None:
        task = outcome.task
        if outcome.failure is not None:
            failures.append(outcome.failure)
            monitor.record_failure(task.cell, outcome.failure["error_type"], outcome.failure["message"])
            return
        record = outcome.record
        records.append(record)
        write_convergence(
            output_dir, task.algorithm, task.problem, task.repetition, outcome.curve,
            config.telemetry_level,
        )
        if config.telemetry_level is TelemetryLevel.FULL:
            write_snapshots(output_dir, task.algorithm, task.problem, task.repetition, outcome.curve)
        if outcome.feasibility is not None:
            feasibility.append(outcome.feasibility)
        monitor.record_run(task.cell, record.evaluations, record.wall_time)

    logger.info(
        f"Running {len(tasks)} of {len(grid_keys)} run(s) with {config.workers} worker(s)",
        algorithms=config.algorithms,
        problems=len(config.problems),
        repetitions=config.repetitions,
        base_seed=config.base_seed,
    )

    if config.workers == 1 or len(tasks) <= 1:
        for task in tasks:
            collect(execute_run(task))
    else:
        with ProcessPoolExecutor(max_workers=min(config.workers, len(tasks))) as executor:
            future_to_task = {executor.submit(execute_run, task): task for task in tasks}
            for future in as_completed(future_to_task):
                task = future_to_task[future]
                try:
                    outcome = future.result()
                except Exception as e:
                    outcome = RunOutcome(task=task, failure=_failure_row(task, e))
                collect(outcome)

    write_runs(output_dir, records)
    write_failures(output_dir, failures)
    write_feasibility(output_dir, feasibility)
    write_metadata(output_dir, build_metadata(config, records, failures, base_dir))

    result = GridResult(config=config, output_dir=output_dir, records=records, failures=failures)
    if not failures:
        result.matrix = matrix_from_records(
            records, config.algorithms, config.problems, config.repetitions
        )
        try:
            result.report_paths = emit_reports(
                result.matrix, config.reference, output_dir, alpha=config.alpha
            )
        except InsufficientDataError as e:
            logger.warning(f"Report tables skipped: {e}", repetitions=config.repetitions)
    else:
        logger.warning(
            f"{len(failures)} run(s) failed; report tables not written",
            failures=len(failures),
        )

    monitor.finalize()
    return result


def best_record(records: list[RunRecord], algorithm: str, problem: str) -> RunRecord | None:
    """Lowest-fitness record for one (algorithm, problem), ties broken by repetition."""
    candidates = [r for r in records if r.algorithm == algorithm and r.problem == problem]
    if not candidates:
        return None
    return min(candidates, key=lambda r: (r.best_fitness, r.repetition))
