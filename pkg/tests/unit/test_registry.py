"""Unit tests for problem reference resolution."""

import pytest

from src.problems.models import ProblemFamily
from src.problems.registry import expand_reference, list_problems, resolve, validate_reference


class TestReferences:
    """Tests for expanding and validating references."""

    def test_benchmarks_alias(self):
        """'benchmarks' expands to F1..F23."""
        assert expand_reference("benchmarks") == [f"F{i}" for i in range(1, 24)]

    def test_single_reference_passes_through(self):
        """Other references expand to themselves."""
        assert expand_reference(" CB ") == ["CB"]

    @pytest.mark.parametrize(
        "reference, expected",
        [("f3", "F3"), ("irs", "IRS"), ("UAV", "uav"), ("uav:maps/t.yaml", "uav:maps/t.yaml")],
    )
    def test_normalization(self, reference, expected):
        """References are normalized to their canonical spelling."""
        assert validate_reference(reference) == expected

    @pytest.mark.parametrize("reference", ["F0", "F24", "XYZ", "uav:"])
    def test_unknown(self, reference):
        """Unknown references raise ValueError."""
        with pytest.raises(ValueError):
            validate_reference(reference)


class TestResolve:
    """Tests for building problems from references."""

    def test_benchmark(self):
        """F10 resolves to the Ackley benchmark."""
        problem = resolve("F10")
        assert problem.family is ProblemFamily.BENCHMARK
        assert problem.dim == 30

    def test_engineering(self):
        """RN resolves to a six-variable engineering problem."""
        problem = resolve("rn")
        assert problem.family is ProblemFamily.ENGINEERING
        assert problem.dim == 6

    def test_default_uav(self):
        """'uav' uses the canonical terrain and the requested waypoint count."""
        problem = resolve("uav", interior=4)
        assert problem.name == "uav"
        assert problem.dim == 12

    def test_relative_terrain_path(self, tmp_path):
        """Relative terrain files resolve against base_dir and keep the reference as name."""
        (tmp_path / "small.yaml").write_text(
            "name: small\n"
            "bounds: {lower: [0, 0, 0], upper: [10, 10, 10]}\n"
            "start: [1, 1, 1]\n"
            "goal: [9, 9, 9]\n"
        )
        problem = resolve("uav:small.yaml", interior=2, base_dir=tmp_path)
        assert problem.name == "uav:small.yaml"
        assert problem.family is ProblemFamily.UAV

    def test_noise_toggle(self):
        """noisy=False removes F7's noise."""
        assert resolve("F7").stochastic
        assert not resolve("F7", noisy=False).stochastic


class TestListProblems:
    """Tests for the problem listing."""

    def test_every_family_listed(self):
        """23 benchmarks, 4 engineering problems and the canonical UAV terrain."""
        rows = list_problems()
        families = [row["family"] for row in rows]
        assert families.count("benchmark") == 23
        assert families.count("engineering") == 4
        assert families.count("uav") == 1
        assert {"reference", "family", "name", "dim", "detail"} <= set(rows[0])
