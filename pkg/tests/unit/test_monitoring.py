"""Unit tests for grid progress monitoring."""

from typing import get_type_hints
from unittest.mock import Mock

import pytest

from src.experiments.monitoring import GridMonitor, GridStats, ProgressHandler


@pytest.fixture
def monitor():
    """Create test monitor for a ten-run grid."""
    return GridMonitor(total_runs=10, error_threshold=0.1)


class TestGridStats:
    """Test suite for GridStats."""

    def test_init(self):
        """Test stats initialization."""
        stats = GridStats(total_runs=4)
        assert stats.total_runs == 4
        assert stats.runs_completed == 0
        assert stats.runs_failed == 0
        assert stats.end_time is None

    def test_record_run(self):
        """Test accumulating evaluations and run time."""
        stats = GridStats()
        stats.record_run(100, 0.5)
        stats.record_run(50, 0.25)
        assert stats.runs_completed == 2
        assert stats.evaluations == 150
        assert stats.wall_time == pytest.approx(0.75)

    def test_record_error(self):
        """Test recording a failed run."""
        stats = GridStats()
        stats.record_error("SSA/F1/0", "ObjectiveEvaluationError", "boom")
        assert stats.runs_failed == 1
        assert stats.errors[0]["cell"] == "SSA/F1/0"
        assert "timestamp" in stats.errors[0]

    def test_to_dict(self):
        """Test serialization after finalize."""
        stats = GridStats(total_runs=1)
        stats.record_run(10, 1.234)
        stats.finalize()
        data = stats.to_dict()
        assert data["run_seconds"] == 1.23
        assert data["end_time"] is not None
        assert data["duration_seconds"] >= 0.0


class TestGridMonitor:
    """Test suite for GridMonitor."""

    def test_progress_handler(self, monitor):
        """Test handlers receive (finished, total) after each run."""
        handler = Mock()
        monitor.register_progress_handler(handler)

        monitor.record_skip(3)
        monitor.record_run("SSA/F1/3", 100, 0.1)
        monitor.record_failure("SSA/F1/4", "ValueError", "bad")

        assert [c.args for c in handler.call_args_list] == [(3, 10), (4, 10), (5, 10)]

    def test_failing_handler_is_contained(self, monitor):
        """Test that a broken handler does not stop the grid."""
        monitor.register_progress_handler(Mock(side_effect=RuntimeError("display gone")))
        monitor.record_run("SSA/F1/0", 10, 0.1)
        assert monitor.stats.runs_completed == 1

    def test_metrics(self, monitor):
        """Test metric aggregation."""
        for r in range(9):
            monitor.record_run(f"SSA/F1/{r}", 10, 0.1)
        monitor.record_failure("SSA/F1/9", "ValueError", "bad")

        metrics = monitor.get_metrics()
        assert metrics["runs_completed"] == 9
        assert metrics["runs_failed"] == 1
        assert metrics["error_rate"] == 0.1
        assert metrics["evaluations"] == 90

    def test_health_healthy(self, monitor):
        """Test healthy status without failures."""
        monitor.record_run("SSA/F1/0", 10, 0.1)
        health = monitor.get_health_status()
        assert health["status"] == "healthy"
        assert health["issues"] == []

    def test_health_degraded(self, monitor):
        """Test degraded status above the failure threshold."""
        monitor.record_run("SSA/F1/0", 10, 0.1)
        monitor.record_failure("SSA/F1/1", "ValueError", "bad")
        health = monitor.get_health_status()
        assert health["status"] == "degraded"
        assert "High failure rate" in health["issues"][0]

    def test_health_unhealthy(self, monitor):
        """Test unhealthy status when nothing completed."""
        monitor.record_failure("SSA/F1/0", "ValueError", "bad")
        assert monitor.get_health_status()["status"] == "unhealthy"

    def test_skips_do_not_count_as_attempts(self, monitor):
        """Test that resumed runs leave the error rate alone."""
        monitor.record_skip(5)
        assert monitor.get_metrics()["error_rate"] == 0.0
        assert monitor.get_health_status()["status"] == "healthy"

    def test_finalize_logs_summary(self, monitor, caplog):
        """Test the closing summary line."""
        monitor.record_run("SSA/F1/0", 10, 0.1)
        with caplog.at_level("INFO", logger="src.experiments.monitoring"):
            monitor.finalize()
        assert "Grid finished: 1 completed" in caplog.text
        assert monitor.stats.end_time is not None

    def test_handler_signature_is_typed(self):
        """Test progress handlers are typed as (finished, total) callbacks."""
        hints = get_type_hints(GridMonitor.register_progress_handler)
        assert hints["handler"] == ProgressHandler
        assert hints["return"] is type(None)
