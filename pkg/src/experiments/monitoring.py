"""Progress and health tracking for experiment grids."""

import logging
from collections.abc import Callable
from datetime import datetime, timezone
from typing import Any

UTC = timezone.utc

logger = logging.getLogger(__name__)

ProgressHandler = Callable[[int, int], None]


class GridStats:
    """Statistics for one grid execution."""

    def __init__(self, total_runs: int = 0) -> None:
        self.total_runs = total_runs
        self.runs_completed = 0
        self.runs_skipped = 0
        self.evaluations = 0
        self.wall_time = 0.0
        self.errors: list[dict[str, Any]] = []
        self.start_time = datetime.now(UTC)
        self.end_time: datetime | None = None

    @property
    def runs_failed(self) -> int:
        return len(self.errors)

    def record_run(self, evaluations: int, wall_time: float) -> None:
        self.runs_completed += 1
        self.evaluations += evaluations
        self.wall_time += wall_time

    def record_skip(self, count: int = 1) -> None:
        self.runs_skipped += count

    def record_error(self, cell: str, error_type: str, error: str) -> None:
        """Record a failed run."""
        self.errors.append(
            {
                "cell": cell,
                "error_type": error_type,
                "error": error,
                "timestamp": datetime.now(UTC).isoformat(),
            }
        )

    def finalize(self) -> None:
        """Mark the grid as complete."""
        self.end_time = datetime.now(UTC)

    def to_dict(self) -> dict[str, Any]:
        duration = ((self.end_time or datetime.now(UTC)) - self.start_time).total_seconds()
        return {
            "total_runs": self.total_runs,
            "runs_completed": self.runs_completed,
            "runs_skipped": self.runs_skipped,
            "runs_failed": self.runs_failed,
            "evaluations": self.evaluations,
            "run_seconds": round(self.wall_time, 2),
            "duration_seconds": round(duration, 2),
            "errors": self.errors,
            "start_time": self.start_time.isoformat(),
            "end_time": self.end_time.isoformat() if self.end_time else None,
        }


class GridMonitor:
    """Tracks grid progress and reports overall health.

    A grid is "degraded" once its failure rate reaches ``error_threshold`` and
    "unhealthy" if runs were attempted but none completed.
    """

    def __init__(self, total_runs: int = 0, error_threshold: float = 0.1) -> None:
        self.error_threshold = error_threshold
        self.stats = GridStats(total_runs)
        self._progress_handlers: list[ProgressHandler] = []

    def register_progress_handler(self, handler: ProgressHandler) -> None:
        """Register a callback receiving (finished, total) after each run."""
        self._progress_handlers.append(handler)

    def _notify(self) -> None:
        finished = self.stats.runs_completed + self.stats.runs_failed + self.stats.runs_skipped
        for handler in self._progress_handlers:
            try:
                handler(finished, self.stats.total_runs)
            except Exception as e:
                logger.error(f"Error in progress handler: {e}")

    def record_run(self, cell: str, evaluations: int, wall_time: float) -> None:
        self.stats.record_run(evaluations, wall_time)
        logger.debug(f"Run {cell} completed: {evaluations} evaluations in {wall_time:.2f}s")
        self._notify()

    def record_skip(self, count: int = 1) -> None:
        self.stats.record_skip(count)
        self._notify()

    def record_failure(self, cell: str, error_type: str, error: str) -> None:
        self.stats.record_error(cell, error_type, error)
        logger.error(f"Run {cell} failed: {error_type}: {error}")
        self._notify()

    def finalize(self) -> None:
        self.stats.finalize()
        metrics = self.get_metrics()
        logger.info(
            f"Grid finished: {metrics['runs_completed']} completed, "
            f"{metrics['runs_skipped']} resumed, {metrics['runs_failed']} failed",
            extra=metrics,
        )

    def get_metrics(self) -> dict[str, Any]:
        stats = self.stats.to_dict()
        attempted = stats["runs_completed"] + stats["runs_failed"]
        error_rate = stats["runs_failed"] / attempted if attempted else 0.0
        return {
            "total_runs": stats["total_runs"],
            "runs_completed": stats["runs_completed"],
            "runs_skipped": stats["runs_skipped"],
            "runs_failed": stats["runs_failed"],
            "error_rate": round(error_rate, 4),
            "evaluations": stats["evaluations"],
            "run_seconds": stats["run_seconds"],
            "duration_seconds": stats["duration_seconds"],
        }

    def get_health_status(self) -> dict[str, Any]:
        metrics = self.get_metrics()
        status = "healthy"
        issues = []

        if metrics["runs_failed"] and metrics["error_rate"] >= self.error_threshold:
            status = "degraded"
            issues.append(f"High failure rate: {metrics['error_rate']:.1%}")

        if metrics["runs_failed"] > 0 and metrics["runs_completed"] == 0:
            status = "unhealthy"
            issues.append("No runs completed successfully")

        return {"status": status, "metrics": metrics, "issues": issues}
