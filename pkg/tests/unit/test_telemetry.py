"""Unit tests for convergence and diversity telemetry."""

import numpy as np
import pytest

from src.optimizer.models import Population, TelemetryLevel
from src.optimizer.telemetry import (
    TelemetryRecorder,
    explore_exploit_split,
    population_diversity,
)


def make_population(positions):
    """Population with zero fitness at the given positions."""
    positions = np.asarray(positions, dtype=float)
    return Population(positions=positions, fitness=np.zeros(len(positions)))


class TestDiversity:
    """Tests for median-deviation diversity."""

    def test_identical_members(self):
        """A collapsed flock has zero diversity."""
        assert population_diversity(np.ones((5, 3))) == 0.0

    def test_three_points_on_a_line(self):
        """Members 0, 1, 2 in 1-D: median 1, mean |dev| = 2/3."""
        assert population_diversity(np.array([[0.0], [1.0], [2.0]])) == pytest.approx(2.0 / 3.0)

    def test_two_points(self):
        """Members 0 and 2: median 1, diversity 1."""
        assert population_diversity(np.array([[0.0], [2.0]])) == 1.0

    def test_accepts_population(self):
        """Population objects and raw arrays agree."""
        positions = np.array([[0.0, 1.0], [2.0, 5.0], [4.0, 3.0]])
        assert population_diversity(make_population(positions)) == population_diversity(positions)


class TestExploreExploit:
    """Tests for exploration/exploitation shares."""

    @pytest.mark.parametrize(
        "div_t, div_max, expected",
        [(1.0, 1.0, (100.0, 0.0)), (0.0, 1.0, (0.0, 100.0)), (0.5, 1.0, (50.0, 50.0))],
    )
    def test_split(self, div_t, div_max, expected):
        """Shares are 100 * Div / Div_max and its complement."""
        assert explore_exploit_split(div_t, div_max) == pytest.approx(expected)

    def test_zero_max_is_pure_exploitation(self):
        """A flock that never spread is all exploitation."""
        assert explore_exploit_split(0.0, 0.0) == (0.0, 100.0)

    def test_shares_sum_to_hundred(self):
        """Exploration and exploitation always sum to 100."""
        for div_t in np.linspace(0.0, 3.0, 7):
            a, b = explore_exploit_split(float(div_t), 3.0)
            assert a + b == pytest.approx(100.0)


class TestTelemetryRecorder:
    """Tests for per-iteration recording."""

    def test_running_max_from_initial_population(self):
        """The first row is measured against the initial spread."""
        recorder = TelemetryRecorder(TelemetryLevel.CURVE_AND_DIVERSITY, total_iterations=2)
        recorder.observe_initial(make_population([[0.0], [2.0]]))
        row = recorder.record(1, 5.0, make_population([[0.5], [1.5]]))
        assert row.diversity == 0.5
        assert row.exploration_pct == pytest.approx(50.0)
        assert row.exploitation_pct == pytest.approx(50.0)

    def test_snapshots_only_at_full_level(self):
        """Snapshots are taken at t=1, every k-th iteration and t=T at FULL level."""
        pop = make_population([[0.0], [1.0]])
        recorder = TelemetryRecorder(TelemetryLevel.FULL, total_iterations=7, snapshot_every=3)
        recorder.observe_initial(pop)
        rows = [recorder.record(t, 1.0, pop) for t in range(1, 8)]
        assert [r.t for r in rows if r.snapshot is not None] == [1, 3, 6, 7]

        plain = TelemetryRecorder(TelemetryLevel.CURVE, total_iterations=7, snapshot_every=3)
        plain.observe_initial(pop)
        assert all(plain.record(t, 1.0, pop).snapshot is None for t in range(1, 8))

    def test_snapshot_is_a_copy(self):
        """Later moves do not alter a stored snapshot."""
        pop = make_population([[0.0], [1.0]])
        recorder = TelemetryRecorder(TelemetryLevel.FULL, total_iterations=1)
        recorder.observe_initial(pop)
        row = recorder.record(1, 1.0, pop)
        pop.positions[0, 0] = 99.0
        assert row.snapshot[0, 0] == 0.0
