"""Unit tests for the CLI tool.

Tests the CLI commands, option precedence and exit codes.
"""

import json
import logging

import pandas as pd
import pytest
from typer.testing import CliRunner

from src.cli.main import EXIT_CONFIG_ERROR, EXIT_PARTIAL_FAILURE, app
from src.experiments.config import get_settings

runner = CliRunner()


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """No GEOSSA_* settings leak in from the shell; root logging is restored."""
    for name in ("GEOSSA_OUTPUT_DIR", "GEOSSA_WORKERS", "GEOSSA_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
    get_settings.cache_clear()


@pytest.fixture
def config_file(tmp_path):
    """Tiny two-algorithm grid writing under tmp_path/results."""
    path = tmp_path / "grid.yaml"
    path.write_text(
        "algorithms: [SSA, GeoSSA]\n"
        "problems: [F16, F18]\n"
        "repetitions: 3\n"
        "n: 6\n"
        "T: 5\n"
        f"output_dir: {tmp_path / 'results'}\n"
    )
    return path


class TestInfoCommands:
    """Tests for version, list-problems and verify-rng."""

    def test_version(self):
        """Should print the product name and output schema."""
        result = runner.invoke(app, ["version"])
        assert result.exit_code == 0
        assert "GeoSSA Bench" in result.stdout
        assert "Output schema: 1" in result.stdout

    def test_list_problems(self):
        """Should list benchmark, engineering and UAV references."""
        result = runner.invoke(app, ["list-problems"])
        assert result.exit_code == 0
        for reference in ("F1", "F23", "CB", "IRS", "uav"):
            assert reference in result.stdout

    def test_verify_rng(self):
        """Should confirm the shipped golden draws."""
        result = runner.invoke(app, ["verify-rng"])
        assert result.exit_code == 0
        assert "matches" in result.stdout

    def test_verify_rng_mismatch(self, mocker):
        """Should list differing draws and exit 1."""
        mocker.patch(
            "src.cli.main.verify_reference",
            return_value=[{"kind": "uniform", "draw": 0, "expected": 0.5, "actual": 0.25}],
        )
        result = runner.invoke(app, ["verify-rng"])
        assert result.exit_code == EXIT_PARTIAL_FAILURE
        assert "1 draw(s) differ" in result.stdout

    def test_verify_rng_write(self, tmp_path):
        """Should write a fresh reference file on request."""
        target = tmp_path / "draws.csv"
        result = runner.invoke(app, ["verify-rng", "--write", str(target)])
        assert result.exit_code == 0
        assert list(pd.read_csv(target).columns) == ["kind", "draw", "value"]

    def test_invalid_log_level(self):
        """Should exit with the config error code for an unknown level."""
        result = runner.invoke(app, ["--log-level", "LOUD", "version"])
        assert result.exit_code == EXIT_CONFIG_ERROR


class TestRunCommand:
    """Tests for geossa run."""

    def test_run_writes_results(self, config_file, tmp_path):
        """Should run every cell and print the W/T/L table."""
        result = runner.invoke(app, ["run", str(config_file)])
        assert result.exit_code == 0, result.stdout
        runs = pd.read_csv(tmp_path / "results" / "runs.csv")
        assert len(runs) == 2 * 2 * 3
        assert "Win/Tie/Loss" in result.stdout

    def test_flags_override_config(self, config_file, tmp_path):
        """Should apply -r, -t, -n and --output-dir over the file."""
        out = tmp_path / "override"
        result = runner.invoke(
            app, ["run", str(config_file), "-r", "2", "-t", "3", "-n", "5", "-o", str(out)]
        )
        assert result.exit_code == 0, result.stdout
        runs = pd.read_csv(out / "runs.csv")
        assert len(runs) == 2 * 2 * 2
        curve = pd.read_csv(out / "convergence" / "SSA_F16_0.csv")
        assert len(curve) == 3
        # initial 5 plus 5 + ceil(0.2 * 5) per iteration
        assert set(runs["evaluations"]) == {5 + 3 * 6}

    def test_environment_output_dir(self, config_file, tmp_path, monkeypatch):
        """Should honour GEOSSA_OUTPUT_DIR when no flag is given."""
        out = tmp_path / "from-env"
        monkeypatch.setenv("GEOSSA_OUTPUT_DIR", str(out))
        result = runner.invoke(app, ["run", str(config_file)])
        assert result.exit_code == 0, result.stdout
        assert (out / "runs.csv").exists()

    def test_invalid_config(self, tmp_path):
        """Should exit 2 and name the offending token."""
        path = tmp_path / "bad.yaml"
        path.write_text("algorithms: [GeoSSA9]\nproblems: [F1]\n")
        result = runner.invoke(app, ["run", str(path)])
        assert result.exit_code == EXIT_CONFIG_ERROR
        assert "GeoSSA9" in result.stdout

    def test_missing_config(self, tmp_path):
        """Should exit 2 when the file does not exist."""
        result = runner.invoke(app, ["run", str(tmp_path / "absent.yaml")])
        assert result.exit_code == EXIT_CONFIG_ERROR

    def test_invalid_override(self, config_file):
        """Should exit 2 for an out-of-range flag."""
        result = runner.invoke(app, ["run", str(config_file), "-n", "1"])
        assert result.exit_code == EXIT_CONFIG_ERROR

    def test_partial_failure(self, tmp_path):
        """Should exit 1 when some runs fail."""
        path = tmp_path / "grid.yaml"
        path.write_text(
            "algorithms: [SSA]\n"
            "problems: [F16, 'uav:missing.yaml']\n"
            "repetitions: 2\nn: 6\nT: 3\n"
            f"output_dir: {tmp_path / 'results'}\n"
        )
        result = runner.invoke(app, ["run", str(path)])
        assert result.exit_code == EXIT_PARTIAL_FAILURE
        assert len(pd.read_csv(tmp_path / "results" / "failures.csv")) == 2

    def test_resume_with_changed_settings(self, config_file):
        """Should refuse to resume with exit 2 when T differs from the stored runs."""
        runner.invoke(app, ["run", str(config_file)])
        result = runner.invoke(app, ["run", str(config_file), "--resume", "-t", "7"])
        assert result.exit_code == EXIT_CONFIG_ERROR
        assert "Resume refused" in result.stdout

    def test_resume_with_more_repetitions(self, config_file, tmp_path):
        """Should resume when only the repetition count grows."""
        runner.invoke(app, ["run", str(config_file)])
        result = runner.invoke(app, ["run", str(config_file), "--resume", "-r", "4"])
        assert result.exit_code == 0, result.stdout
        assert len(pd.read_csv(tmp_path / "results" / "runs.csv")) == 2 * 2 * 4


class TestReportCommand:
    """Tests for geossa report."""

    def test_rebuilds_tables(self, config_file, tmp_path):
        """Should regenerate identical tables from runs.csv."""
        runner.invoke(app, ["run", str(config_file)])
        results = tmp_path / "results"
        original = (results / "wtl_oe.csv").read_bytes()
        (results / "wtl_oe.csv").unlink()

        result = runner.invoke(app, ["report", str(results)])
        assert result.exit_code == 0, result.stdout
        assert (results / "wtl_oe.csv").read_bytes() == original

    def test_other_reference(self, config_file, tmp_path):
        """Should score against any algorithm of the grid."""
        runner.invoke(app, ["run", str(config_file)])
        results = tmp_path / "results"
        result = runner.invoke(app, ["report", str(results), "--reference", "SSA"])
        assert result.exit_code == 0, result.stdout
        wtl = pd.read_csv(results / "wtl_oe.csv", keep_default_na=False)
        assert wtl.set_index("algorithm").loc["SSA", "versus"] == "-"

    def test_unknown_reference(self, config_file, tmp_path):
        """Should exit 2 for a reference outside the grid."""
        runner.invoke(app, ["run", str(config_file)])
        result = runner.invoke(app, ["report", str(tmp_path / "results"), "--reference", "GeoSSA3"])
        assert result.exit_code == EXIT_CONFIG_ERROR

    def test_no_runs(self, tmp_path):
        """Should exit 1 for a directory without runs.csv."""
        result = runner.invoke(app, ["report", str(tmp_path)])
        assert result.exit_code == EXIT_PARTIAL_FAILURE

    def test_incomplete_runs(self, config_file, tmp_path):
        """Should exit 1 when runs.csv lacks cells of the recorded grid."""
        runner.invoke(app, ["run", str(config_file)])
        runs_path = tmp_path / "results" / "runs.csv"
        runs = pd.read_csv(runs_path, dtype=str, keep_default_na=False)
        runs.iloc[1:].to_csv(runs_path, index=False)
        result = runner.invoke(app, ["report", str(tmp_path / "results")])
        assert result.exit_code == EXIT_PARTIAL_FAILURE


class TestRunSummary:
    """Tests for the health line and best-run table printed after geossa run."""

    def test_healthy_grid(self, config_file):
        """Should report a healthy grid when every run completes."""
        result = runner.invoke(app, ["run", str(config_file)])
        assert result.exit_code == 0, result.stdout
        assert "Grid status: healthy" in result.stdout
        assert "Best GeoSSA runs" not in result.stdout

    def test_degraded_grid(self, tmp_path):
        """Should report the failure rate when half the runs fail."""
        path = tmp_path / "grid.yaml"
        path.write_text(
            "algorithms: [SSA]\n"
            "problems: [F16, 'uav:missing.yaml']\n"
            "repetitions: 2\nn: 6\nT: 3\n"
            f"output_dir: {tmp_path / 'results'}\n"
        )
        result = runner.invoke(app, ["run", str(path)])
        assert result.exit_code == EXIT_PARTIAL_FAILURE
        assert "Grid status: degraded" in result.stdout
        assert "High failure rate: 50.0%" in result.stdout

    def test_unhealthy_grid(self, tmp_path):
        """Should report an unhealthy grid when no run completes."""
        path = tmp_path / "grid.yaml"
        path.write_text(
            "algorithms: [SSA]\n"
            "problems: ['uav:missing.yaml']\n"
            "repetitions: 2\nn: 6\nT: 3\n"
            f"output_dir: {tmp_path / 'results'}\n"
        )
        result = runner.invoke(app, ["run", str(path)])
        assert result.exit_code == EXIT_PARTIAL_FAILURE
        assert "Grid status: unhealthy" in result.stdout
        assert "No runs completed successfully" in result.stdout

    def test_best_application_runs(self, tmp_path):
        """Should list the reference's best run for each engineering problem."""
        path = tmp_path / "grid.yaml"
        path.write_text(
            "algorithms: [SSA, GeoSSA]\n"
            "problems: [F16, CB]\n"
            "repetitions: 2\nn: 6\nT: 3\n"
            f"output_dir: {tmp_path / 'results'}\n"
        )
        result = runner.invoke(app, ["run", str(path)])
        assert result.exit_code == 0, result.stdout
        assert "Best GeoSSA runs" in result.stdout

        runs = pd.read_csv(tmp_path / "results" / "runs.csv")
        cell = runs[(runs["algorithm"] == "GeoSSA") & (runs["problem"] == "CB")]
        assert f"{cell['best_fitness'].min():.6g}" in result.stdout


class TestEnvironmentOverrides:
    """Tests for GEOSSA_WORKERS and GEOSSA_LOG_LEVEL alongside GEOSSA_OUTPUT_DIR."""

    def test_workers_from_environment(self, config_file, tmp_path, monkeypatch):
        """Should take the worker count from GEOSSA_WORKERS when no flag is given."""
        monkeypatch.setenv("GEOSSA_WORKERS", "2")
        result = runner.invoke(app, ["run", str(config_file)])
        assert result.exit_code == 0, result.stdout
        metadata = json.loads((tmp_path / "results" / "metadata.json").read_text())
        assert metadata["config"]["workers"] == 2

    def test_workers_flag_beats_environment(self, config_file, tmp_path, monkeypatch):
        """Should prefer -w over GEOSSA_WORKERS."""
        monkeypatch.setenv("GEOSSA_WORKERS", "2")
        result = runner.invoke(app, ["run", str(config_file), "-w", "1"])
        assert result.exit_code == 0, result.stdout
        metadata = json.loads((tmp_path / "results" / "metadata.json").read_text())
        assert metadata["config"]["workers"] == 1

    def test_log_level_from_environment(self, monkeypatch):
        """Should validate GEOSSA_LOG_LEVEL like the flag."""
        monkeypatch.setenv("GEOSSA_LOG_LEVEL", "LOUD")
        result = runner.invoke(app, ["version"])
        assert result.exit_code == EXIT_CONFIG_ERROR

    def test_log_level_flag_beats_environment(self, monkeypatch):
        """Should prefer --log-level over GEOSSA_LOG_LEVEL."""
        monkeypatch.setenv("GEOSSA_LOG_LEVEL", "LOUD")
        result = runner.invoke(app, ["--log-level", "INFO", "version"])
        assert result.exit_code == 0
