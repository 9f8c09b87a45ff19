"""Desk-scale acceptance grids.

These run full-size grids (n=30, T=500, 30 repetitions) and take from
minutes to half an hour. They are skipped unless the
GEOSSA_ACCEPTANCE_TESTS environment variable is set.

    GEOSSA_ACCEPTANCE_TESTS=1 pytest tests/integration -m integration
"""

import os
from pathlib import Path

import numpy as np
import pytest

from src.experiments.models import ExperimentConfig
from src.experiments.runner import best_record, run_grid
from src.problems import engineering, uav
from src.stats.nonparametric import friedman_ranks, win_tie_loss

pytestmark = [
    pytest.mark.skipif(
        not os.getenv("GEOSSA_ACCEPTANCE_TESTS"),
        reason="Acceptance grids disabled. Set GEOSSA_ACCEPTANCE_TESTS=1 to enable.",
    ),
    pytest.mark.integration,
    pytest.mark.slow,
]

WORKERS = max(1, (os.cpu_count() or 1) - 1)


def run(tmp_path_factory, name, algorithms, problems, **overrides):
    """Run one grid into a fresh directory and return its GridResult."""
    config = ExperimentConfig(
        algorithms=algorithms,
        problems=problems,
        output_dir=tmp_path_factory.mktemp(name),
        workers=WORKERS,
        **overrides,
    )
    result = run_grid(config)
    assert result.failures == []
    return result


def fitness(result, algorithm, problem):
    """Best fitness of every repetition of one cell."""
    return result.matrix.samples(algorithm, problem)


@pytest.fixture(scope="module")
def ablation(tmp_path_factory):
    """SSA and all GeoSSA variants on F1..F23."""
    return run(
        tmp_path_factory,
        "ablation",
        ["GeoSSA", "GeoSSA1", "GeoSSA2", "GeoSSA3", "SSA"],
        ["benchmarks"],
    )


@pytest.fixture(scope="module")
def applications(tmp_path_factory):
    """SSA and GeoSSA on the engineering problems and the default terrain."""
    return run(
        tmp_path_factory,
        "applications",
        ["GeoSSA", "SSA"],
        ["CB", "PL", "RN", "IRS", "uav"],
    )


class TestBenchmarks:
    """GeoSSA on selected benchmark functions."""

    @pytest.mark.parametrize("problem", ["F1", "F2", "F3", "F4", "F9", "F11"])
    def test_exact_floor(self, ablation, problem):
        """Unimodal and separable functions are driven to zero."""
        assert fitness(ablation, "GeoSSA", problem).mean() <= 1e-250

    def test_ackley_floor(self, ablation):
        """Ackley stops at the 4 * eps floor in nearly every run."""
        values = fitness(ablation, "GeoSSA", "F10")
        assert np.sum(values == pytest.approx(4.440892098500626e-16, abs=1e-30)) >= 28

    def test_schwefel(self, ablation):
        """F8 reaches the global basin in every run."""
        values = fitness(ablation, "GeoSSA", "F8")
        assert values.mean() <= -12550
        assert values.std(ddof=1) <= 10

    def test_foxholes(self, ablation):
        """F14 converges to the lowest foxhole."""
        mean = fitness(ablation, "GeoSSA", "F14").mean()
        assert 0.998 <= mean <= 1.05


class TestAblation:
    """Ranking of the variants and comparison against SSA."""

    def test_geossa_ranks_first(self, ablation):
        """Combining every strategy gives the lowest Average Friedman Value."""
        matrix = ablation.matrix.subset(["GeoSSA", "GeoSSA1", "GeoSSA2", "GeoSSA3"])
        afv = friedman_ranks(matrix).afv
        assert afv.idxmin() == "GeoSSA"

    def test_ssa_never_wins(self, ablation):
        """SSA is never significantly better than GeoSSA."""
        wtl = win_tie_loss("GeoSSA", ablation.matrix, alpha=0.05)["SSA"]
        assert wtl.wins == 0
        assert wtl.losses >= 12


class TestApplications:
    """Engineering problems and UAV path planning."""

    def test_corrugated_bulkhead(self, applications):
        """CB converges to one feasible design."""
        values = fitness(applications, "GeoSSA", "CB")
        assert values.mean() <= 6.85
        assert values.std(ddof=1) <= 0.01
        self._assert_feasible(applications, "CB")

    def test_refrigeration_system(self, applications):
        """IRS stays feasible close to the known optimum."""
        assert fitness(applications, "GeoSSA", "IRS").mean() <= 9.0
        self._assert_feasible(applications, "IRS")

    @pytest.mark.parametrize("problem", ["PL", "RN"])
    def test_property_checked(self, applications, problem):
        """PL and RN are feasible and no worse than SSA on average."""
        self._assert_feasible(applications, problem)
        geossa = fitness(applications, "GeoSSA", problem).mean()
        assert geossa <= fitness(applications, "SSA", problem).mean()

    def test_uav_relative_performance(self, applications):
        """GeoSSA plans cheaper, steadier paths than SSA without collisions."""
        geossa = fitness(applications, "GeoSSA", "uav")
        ssa = fitness(applications, "SSA", "uav")
        assert geossa.mean() <= ssa.mean()
        assert geossa.std(ddof=1) <= ssa.std(ddof=1)

        best = best_record(applications.records, "GeoSSA", "uav")
        terrain = uav.default_terrain()
        path = uav.decode(np.asarray(best.best_position), terrain)
        assert uav.collision_free(path, terrain, density_factor=4)

    @staticmethod
    def _assert_feasible(result, problem):
        for record in result.records:
            if record.algorithm == "GeoSSA" and record.problem == problem:
                report = engineering.evaluate(problem, np.asarray(record.best_position))
                assert report.feasible, f"{problem} repetition {record.repetition}"


class TestDeterminism:
    """Repeating a grid reproduces its files."""

    def test_rerun_is_byte_identical(self, tmp_path_factory):
        """Every CSV except the wall-time column matches byte for byte."""
        kwargs = dict(repetitions=5, T=100)
        first = run(tmp_path_factory, "first", ["GeoSSA", "SSA"], ["F5", "F7", "CB"], **kwargs)
        second = run(tmp_path_factory, "second", ["GeoSSA", "SSA"], ["F5", "F7", "CB"], **kwargs)

        for path in sorted(Path(first.output_dir).rglob("*.csv")):
            other = Path(second.output_dir) / path.relative_to(first.output_dir)
            if path.name == "runs.csv":
                assert _without_wall_time(path) == _without_wall_time(other)
            else:
                assert path.read_bytes() == other.read_bytes(), path.name


def _without_wall_time(path):
    lines = path.read_text().splitlines()
    column = lines[0].split(",").index("wall_time")
    return [",".join(v for i, v in enumerate(line.split(",")) if i != column) for line in lines]
