"""Statistical comparison of optimizer runs."""

from src.stats.models import (
    FriedmanResult,
    IncompleteMatrixError,
    InsufficientDataError,
    InvalidShapeError,
    RunMatrix,
    StatReport,
    WilcoxonResult,
    WinTieLoss,
)
from src.stats.nonparametric import (
    friedman_ranks,
    overall_effectiveness,
    problem_ranks,
    wilcoxon_signed_rank,
    win_tie_loss,
)
from src.stats.summary import ave_std, build_report

__all__ = [
    "FriedmanResult",
    "IncompleteMatrixError",
    "InsufficientDataError",
    "InvalidShapeError",
    "RunMatrix",
    "StatReport",
    "WilcoxonResult",
    "WinTieLoss",
    "ave_std",
    "build_report",
    "friedman_ranks",
    "overall_effectiveness",
    "problem_ranks",
    "wilcoxon_signed_rank",
    "win_tie_loss",
]
