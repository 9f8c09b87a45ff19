"""Descriptive statistics and assembly of the full comparison report."""

import logging
from collections.abc import Sequence

import numpy as np
import pandas as pd

from src.stats.models import InsufficientDataError, RunMatrix, StatReport
from src.stats.nonparametric import (
    compare_pair,
    friedman_ranks,
    overall_effectiveness,
    win_tie_loss,
)

logger = logging.getLogger(__name__)

OUTCOME_SYMBOLS = {"win": "+", "tie": "=", "loss": "-"}


def ave_std(samples: Sequence[float] | np.ndarray) -> tuple[float, float]:
    """Mean and sample standard deviation (ddof=1).

    Raises:
        InsufficientDataError: If fewer than 2 samples are given
    """
    values = np.asarray(samples, dtype=float).reshape(-1)
    if values.size < 2:
        raise InsufficientDataError(f"Need at least 2 samples for Ave/Std, got {values.size}")
    return float(np.mean(values)), float(np.std(values, ddof=1))


def summary_table(matrix: RunMatrix) -> pd.DataFrame:
    rows = []
    for algorithm in matrix.algorithms:
        for problem in matrix.problems:
            samples = matrix.samples(algorithm, problem)
            mean, std = ave_std(samples)
            rows.append(
                {
                    "algorithm": algorithm,
                    "problem": problem,
                    "ave": mean,
                    "std": std,
                    "best": float(np.min(samples)),
                    "worst": float(np.max(samples)),
                }
            )
    return pd.DataFrame(rows, columns=["algorithm", "problem", "ave", "std", "best", "worst"])


def wilcoxon_table(matrix: RunMatrix, reference: str, alpha: float) -> pd.DataFrame:
    """One row per (competitor, problem) comparison against the reference."""
    columns = [
        "algorithm",
        "versus",
        "problem",
        "statistic",
        "p_value",
        "n_effective",
        "zero_differences",
        "method",
        "outcome",
    ]
    rows = []
    for algorithm in matrix.algorithms:
        if algorithm == reference:
            continue
        for problem in matrix.problems:
            outcome, test = compare_pair(
                matrix.samples(reference, problem), matrix.samples(algorithm, problem), alpha
            )
            rows.append(
                {
                    "algorithm": algorithm,
                    "versus": reference,
                    "problem": problem,
                    "statistic": test.statistic,
                    "p_value": test.p_value,
                    "n_effective": test.n_effective,
                    "zero_differences": test.zero_differences,
                    "method": "degenerate" if test.degenerate else test.method,
                    "outcome": OUTCOME_SYMBOLS[outcome],
                }
            )
    return pd.DataFrame(rows, columns=columns)


def build_report(matrix: RunMatrix, reference: str, alpha: float = 0.05) -> StatReport:
    """Ave/Std, Wilcoxon, Friedman and W/T/L + OE tables for a complete run matrix.

    Raises:
        ValueError: If the reference is not part of the matrix
    """
    if reference not in matrix.algorithms:
        raise ValueError(f"Reference '{reference}' is not among {matrix.algorithms}")

    friedman = friedman_ranks(matrix)
    wtl = win_tie_loss(reference, matrix, alpha)
    n = len(matrix.problems)
    oe = {name: overall_effectiveness(record, n) for name, record in wtl.items()}

    logger.info(
        f"Built report for {len(matrix.algorithms)} algorithm(s) on {n} problem(s)",
        extra={"reference": reference, "alpha": alpha, "repetitions": matrix.repetitions},
    )
    return StatReport(
        reference=reference,
        alpha=alpha,
        summary=summary_table(matrix),
        wilcoxon=wilcoxon_table(matrix, reference, alpha),
        friedman=friedman,
        wtl=wtl,
        oe=oe,
    )
