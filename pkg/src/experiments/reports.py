"""CSV and JSON output of experiment grids.

Every table is written with pandas ``to_csv(index=False)`` and a fixed
column order, so repeated grids produce byte-identical files.
"""

import json
import logging
import re
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from src.experiments.models import (
    CONVERGENCE_COLUMNS,
    FAILURES_COLUMNS,
    FEASIBILITY_COLUMNS,
    RUNS_COLUMNS,
    RunRecord,
)
from src.optimizer.models import IterationTelemetry, TelemetryLevel
from src.stats.models import IncompleteMatrixError, RunMatrix, StatReport
from src.stats.summary import build_report

logger = logging.getLogger(__name__)

RUNS_FILE = "runs.csv"
FAILURES_FILE = "failures.csv"
FEASIBILITY_FILE = "feasibility.csv"
METADATA_FILE = "metadata.json"
SUMMARY_FILE = "summary_ave_std.csv"
WILCOXON_FILE = "wilcoxon.csv"
FRIEDMAN_FILE = "friedman.csv"
WTL_FILE = "wtl_oe.csv"
CONVERGENCE_DIR = "convergence"
SNAPSHOT_DIR = "snapshots"

WTL_COLUMNS = ["algorithm", "versus", "wins", "ties", "losses", "wtl", "oe"]


def cell_slug(algorithm: str, problem: str, repetition: int) -> str:
    """File stem for one run; path separators in problem references are flattened."""
    safe_problem = re.sub(r"[^A-Za-z0-9_.-]+", "_", problem)
    return f"{algorithm}_{safe_problem}_{repetition}"


def _write(frame: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def write_convergence(
    output_dir: Path,
    algorithm: str,
    problem: str,
    repetition: int,
    curve: list[IterationTelemetry],
    level: TelemetryLevel,
) -> Path:
    """Per-iteration curve; diversity columns stay empty at the ``curve`` level."""
    frame = pd.DataFrame(
        {
            "t": [row.t for row in curve],
            "best_fitness": [row.best_fitness for row in curve],
            "diversity": [row.diversity for row in curve],
            "exploration_pct": [row.exploration_pct for row in curve],
        },
        columns=CONVERGENCE_COLUMNS,
    )
    if level is TelemetryLevel.CURVE:
        frame[["diversity", "exploration_pct"]] = np.nan
    path = Path(output_dir) / CONVERGENCE_DIR / f"{cell_slug(algorithm, problem, repetition)}.csv"
    return _write(frame, path)


def write_snapshots(
    output_dir: Path,
    algorithm: str,
    problem: str,
    repetition: int,
    curve: list[IterationTelemetry],
) -> Path | None:
    """Search-history positions (one row per member per snapshot iteration)."""
    blocks = []
    for row in curve:
        if row.snapshot is None:
            continue
        positions = np.asarray(row.snapshot)
        block = pd.DataFrame(positions, columns=[f"x{j + 1}" for j in range(positions.shape[1])])
        block.insert(0, "member", np.arange(len(positions)))
        block.insert(0, "t", row.t)
        blocks.append(block)
    if not blocks:
        return None
    path = Path(output_dir) / SNAPSHOT_DIR / f"{cell_slug(algorithm, problem, repetition)}.csv"
    return _write(pd.concat(blocks, ignore_index=True), path)


def write_runs(output_dir: Path, records: list[RunRecord]) -> Path:
    ordered = sorted(records, key=lambda r: r.key)
    frame = pd.DataFrame([r.to_row() for r in ordered], columns=RUNS_COLUMNS)
    return _write(frame, Path(output_dir) / RUNS_FILE)


def read_runs(output_dir: Path) -> list[RunRecord]:
    """Load ``runs.csv``; an absent file yields no records."""
    path = Path(output_dir) / RUNS_FILE
    if not path.exists():
        return []
    frame = pd.read_csv(
        path,
        dtype={"best_position": str},
        keep_default_na=False,
        float_precision="round_trip",
    )
    return [RunRecord.from_row(row) for row in frame.to_dict(orient="records")]


def write_failures(output_dir: Path, failures: list[dict[str, Any]]) -> Path:
    ordered = sorted(failures, key=lambda f: (f["algorithm"], f["problem"], f["repetition"]))
    return _write(pd.DataFrame(ordered, columns=FAILURES_COLUMNS), Path(output_dir) / FAILURES_FILE)


def write_feasibility(output_dir: Path, rows: list[dict[str, Any]]) -> Path | None:
    if not rows:
        return None
    ordered = sorted(rows, key=lambda f: (f["algorithm"], f["problem"], f["repetition"]))
    frame = pd.DataFrame(ordered, columns=FEASIBILITY_COLUMNS)
    return _write(frame, Path(output_dir) / FEASIBILITY_FILE)


def read_feasibility(output_dir: Path) -> list[dict[str, Any]]:
    path = Path(output_dir) / FEASIBILITY_FILE
    if not path.exists():
        return []
    return pd.read_csv(path, float_precision="round_trip").to_dict(orient="records")


def read_metadata(output_dir: Path) -> dict[str, Any]:
    """Parsed metadata.json, or an empty dict when the file is absent.

    Raises:
        json.JSONDecodeError: If the file exists but is not valid JSON
    """
    path = Path(output_dir) / METADATA_FILE
    if not path.exists():
        return {}
    data: dict[str, Any] = json.loads(path.read_text(encoding="utf-8"))
    return data


def write_metadata(output_dir: Path, metadata: dict[str, Any]) -> Path:
    path = Path(output_dir) / METADATA_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def matrix_from_records(
    records: list[RunRecord],
    algorithms: list[str],
    problems: list[str],
    repetitions: int,
) -> RunMatrix:
    """Assemble the run matrix for a grid.

    Raises:
        IncompleteMatrixError: If any grid cell has no record
    """
    frame = pd.DataFrame(
        [
            {
                "algorithm": r.algorithm,
                "problem": r.problem,
                "repetition": r.repetition,
                "best_fitness": r.best_fitness,
            }
            for r in records
        ],
        columns=["algorithm", "problem", "repetition", "best_fitness"],
    )
    return RunMatrix.from_records(frame, algorithms, problems, repetitions)


def _friedman_frame(report: StatReport) -> pd.DataFrame:
    ranks = report.friedman.ranks
    frame = ranks.reset_index().rename(columns={"index": "problem"})
    afv = {"problem": "AFV", **report.friedman.afv.to_dict()}
    rank = {"problem": "Rank", **report.friedman.final_rank.to_dict()}
    return pd.concat([frame, pd.DataFrame([afv, rank])], ignore_index=True)[
        ["problem", *ranks.columns]
    ]


def _wtl_frame(report: StatReport) -> pd.DataFrame:
    rows = []
    for algorithm, record in report.wtl.items():
        rows.append(
            {
                "algorithm": algorithm,
                "versus": "-" if algorithm == report.reference else report.reference,
                "wins": record.wins,
                "ties": record.ties,
                "losses": record.losses,
                "wtl": str(record),
                "oe": round(report.oe[algorithm], 2),
            }
        )
    return pd.DataFrame(rows, columns=WTL_COLUMNS)


def emit_reports(
    matrix: RunMatrix,
    reference: str,
    output_dir: Path,
    alpha: float = 0.05,
) -> list[Path]:
    """Write the four comparison tables for a complete matrix.

    Raises:
        IncompleteMatrixError: If the matrix has missing cells
        InsufficientDataError: If there are fewer than 2 repetitions
    """
    missing = [
        (matrix.algorithms[a], matrix.problems[p], int(r))
        for a, p, r in zip(*np.nonzero(np.isnan(matrix.values)), strict=True)
    ]
    if missing:
        raise IncompleteMatrixError(missing)

    report = build_report(matrix, reference, alpha)
    output_dir = Path(output_dir)
    paths = [
        _write(report.summary, output_dir / SUMMARY_FILE),
        _write(report.wilcoxon, output_dir / WILCOXON_FILE),
        _write(_friedman_frame(report), output_dir / FRIEDMAN_FILE),
        _write(_wtl_frame(report), output_dir / WTL_FILE),
    ]
    logger.info(f"Wrote {len(paths)} report tables to {output_dir}", extra={"reference": reference})
    return paths
