"""Wilcoxon signed-rank, Friedman ranking, win/tie/loss and overall effectiveness."""

import logging
from collections.abc import Sequence

import numpy as np
import pandas as pd
from scipy import stats

from src.stats.models import (
    FriedmanResult,
    InvalidShapeError,
    RunMatrix,
    WilcoxonResult,
    WinTieLoss,
)

logger = logging.getLogger(__name__)

EXACT_LIMIT = 25
MIN_RELIABLE_PAIRS = 5


def _exact_upper_counts(doubled_ranks: np.ndarray) -> np.ndarray:
    """Number of sign assignments giving each doubled rank-sum 0..sum(doubled_ranks)."""
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1, dtype=np.int64)
    counts[0] = 1
    for r in doubled_ranks.astype(np.int64):
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts = counts + shifted
    return counts


def exact_p_value(ranks: np.ndarray, w_plus: float) -> float:
    """Two-sided exact p for W+ given tie-averaged ranks.

    Equivalent to enumerating all 2^n sign vectors. Averaged ranks are
    multiples of 1/2, so the distribution is built over doubled ranks.
    """
    doubled = np.rint(2.0 * np.asarray(ranks)).astype(np.int64)
    counts = _exact_upper_counts(doubled)
    observed = int(round(2.0 * w_plus))
    n_assignments = float(2 ** len(doubled))
    lower = counts[: observed + 1].sum() / n_assignments
    upper = counts[observed:].sum() / n_assignments
    return float(min(1.0, 2.0 * min(lower, upper)))


def wilcoxon_signed_rank(
    a: Sequence[float] | np.ndarray,
    b: Sequence[float] | np.ndarray,
    exact_limit: int = EXACT_LIMIT,
) -> WilcoxonResult:
    """Paired two-sided Wilcoxon signed-rank test of a against b.

    Zero differences are dropped before ranking. Up to ``exact_limit``
    remaining pairs use the exact null distribution; beyond that a normal
    approximation with tie correction (no continuity correction).

    Raises:
        InvalidShapeError: If a and b differ in length
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidShapeError(f"Paired samples must be equal-length vectors: {a.shape} vs {b.shape}")

    diff = a - b
    nonzero = diff[diff != 0.0]
    n_eff = int(nonzero.size)
    zeros = int(diff.size - n_eff)

    if n_eff == 0:
        return WilcoxonResult(0.0, 1.0, 0, zeros, degenerate=True, method="exact")
    if n_eff < MIN_RELIABLE_PAIRS:
        logger.warning(f"Wilcoxon test on only {n_eff} non-zero pair(s); p-value is coarse")

    ranks = stats.rankdata(np.abs(nonzero))
    w_plus = float(ranks[nonzero > 0].sum())

    if n_eff <= exact_limit:
        return WilcoxonResult(w_plus, exact_p_value(ranks, w_plus), n_eff, zeros, False, "exact")

    mean = n_eff * (n_eff + 1) / 4.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    tie_term = float(np.sum(tie_counts**3 - tie_counts)) / 48.0
    variance = n_eff * (n_eff + 1) * (2 * n_eff + 1) / 24.0 - tie_term
    if variance <= 0.0:
        return WilcoxonResult(w_plus, 1.0, n_eff, zeros, False, "normal")
    z = (w_plus - mean) / np.sqrt(variance)
    p = float(min(1.0, 2.0 * stats.norm.sf(abs(z))))
    return WilcoxonResult(w_plus, p, n_eff, zeros, False, "normal")


def problem_ranks(values: Sequence[Sequence[float]] | np.ndarray) -> np.ndarray:
    """Average Friedman rank of each algorithm on one problem.

    Args:
        values: [algorithm][repetition] final fitness values

    Returns:
        Mean over repetitions of the within-repetition ranks (ties averaged)

    Raises:
        InvalidShapeError: If rows differ in length or either axis is empty
    """
    lengths = {len(row) for row in values}
    if len(lengths) != 1:
        raise InvalidShapeError(f"Ragged Friedman input: repetition counts {sorted(lengths)}")
    table = np.asarray(values, dtype=float)
    if table.ndim != 2 or table.size == 0:
        raise InvalidShapeError(f"Friedman input must be a non-empty 2-D table, got {table.shape}")
    per_repetition = stats.rankdata(table, axis=0)
    return per_repetition.mean(axis=1)


def friedman_ranks(matrix: RunMatrix) -> FriedmanResult:
    """Per-problem average ranks, Average Friedman Value and final rank (1 = best)."""
    rows = {
        problem: problem_ranks(matrix.values[:, p, :])
        for p, problem in enumerate(matrix.problems)
    }
    ranks = pd.DataFrame.from_dict(rows, orient="index", columns=matrix.algorithms)
    afv = ranks.mean(axis=0)
    final_rank = pd.Series(
        stats.rankdata(afv.to_numpy(), method="min").astype(int), index=afv.index
    )
    return FriedmanResult(ranks=ranks, afv=afv, final_rank=final_rank)


def compare_pair(
    reference: np.ndarray,
    competitor: np.ndarray,
    alpha: float,
) -> tuple[str, WilcoxonResult]:
    """Outcome for the competitor: "win", "tie" or "loss" (minimization)."""
    test = wilcoxon_signed_rank(reference, competitor)
    ref_mean, comp_mean = float(np.mean(reference)), float(np.mean(competitor))
    if test.degenerate or test.p_value >= alpha or ref_mean == comp_mean:
        return "tie", test
    return ("win" if comp_mean < ref_mean else "loss"), test


def win_tie_loss(reference: str, matrix: RunMatrix, alpha: float = 0.05) -> dict[str, WinTieLoss]:
    """Win/tie/loss record of every algorithm over the matrix's problems.

    Competitors are scored against the reference. The reference's own row
    counts a win where it significantly beats every competitor, a loss where
    any competitor significantly beats it, and a tie otherwise.

    Raises:
        ValueError: If the reference is not in the matrix
    """
    if reference not in matrix.algorithms:
        raise ValueError(f"Reference '{reference}' is not among {matrix.algorithms}")

    competitors = [a for a in matrix.algorithms if a != reference]
    records = {name: WinTieLoss() for name in matrix.algorithms}

    for problem in matrix.problems:
        ref_samples = matrix.samples(reference, problem)
        outcomes = []
        for name in competitors:
            outcome, _ = compare_pair(ref_samples, matrix.samples(name, problem), alpha)
            outcomes.append(outcome)
            record = records[name]
            if outcome == "win":
                record.wins += 1
            elif outcome == "loss":
                record.losses += 1
            else:
                record.ties += 1

        ref_record = records[reference]
        if "win" in outcomes:
            ref_record.losses += 1
        elif outcomes and all(o == "loss" for o in outcomes):
            ref_record.wins += 1
        else:
            ref_record.ties += 1

    return records


def overall_effectiveness(wtl: WinTieLoss | tuple[int, int, int], n: int) -> float:
    """OE = (N - losses) / N * 100.

    Raises:
        ValueError: If w + t + l != N or N < 1
    """
    w, t, l = wtl.as_tuple() if isinstance(wtl, WinTieLoss) else wtl
    if n < 1 or min(w, t, l) < 0 or w + t + l != n:
        raise ValueError(f"Inconsistent win/tie/loss counts {w}/{t}/{l} for N={n}")
    return (n - l) / n * 100.0
