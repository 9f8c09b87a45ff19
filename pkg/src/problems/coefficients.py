"""Fixed coefficient tables for the Foxholes, Kowalik, Hartman and Shekel functions.

The constants live in ``data/benchmark_constants.csv``, one row per value
(table, row, col, value), so they can be diffed against other ports.
"""

import hashlib
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

CONSTANTS_FILE = Path(__file__).parent / "data" / "benchmark_constants.csv"

EXPECTED_SHAPES: dict[str, tuple[int, ...]] = {
    "foxholes_a": (2, 25),
    "kowalik_a": (11,),
    "kowalik_b": (11,),
    "hartman3_a": (4, 3),
    "hartman3_c": (4,),
    "hartman3_p": (4, 3),
    "hartman6_a": (4, 6),
    "hartman6_c": (4,),
    "hartman6_p": (4, 6),
    "shekel_a": (10, 4),
    "shekel_c": (10,),
}


def file_checksum(path: Path) -> str:
    """sha256 hex digest of a file's bytes."""
    return hashlib.sha256(path.read_bytes()).hexdigest()


@dataclass(frozen=True)
class CoefficientTables:
    """Read-only coefficient arrays."""

    foxholes_a: np.ndarray
    kowalik_a: np.ndarray
    kowalik_b: np.ndarray
    hartman3_a: np.ndarray
    hartman3_c: np.ndarray
    hartman3_p: np.ndarray
    hartman6_a: np.ndarray
    hartman6_c: np.ndarray
    hartman6_p: np.ndarray
    shekel_a: np.ndarray
    shekel_c: np.ndarray
    checksum: str


def _table(frame: pd.DataFrame, name: str) -> np.ndarray:
    rows = frame[frame["table"] == name]
    if rows.empty:
        raise ValueError(f"Coefficient table '{name}' missing from constants file")

    shape = EXPECTED_SHAPES[name]
    if len(shape) == 1:
        values = rows.sort_values("col")["value"].to_numpy(dtype=float)
    else:
        grid = rows.pivot(index="row", columns="col", values="value").sort_index()
        values = grid.sort_index(axis=1).to_numpy(dtype=float)

    if values.shape != shape:
        raise ValueError(f"Coefficient table '{name}' has shape {values.shape}, expected {shape}")
    values.setflags(write=False)
    return values


def load_coefficients(path: Path = CONSTANTS_FILE) -> CoefficientTables:
    """Parse a constants file and validate every table shape.

    Raises:
        ValueError: If a table is missing or misshapen
    """
    frame = pd.read_csv(path)
    tables = {name: _table(frame, name) for name in EXPECTED_SHAPES}
    checksum = file_checksum(path)
    logger.debug(f"Loaded benchmark constants from {path} (sha256 {checksum[:12]})")
    return CoefficientTables(**tables, checksum=checksum)


@lru_cache
def coefficient_tables() -> CoefficientTables:
    """Cached tables from the packaged constants file."""
    return load_coefficients(CONSTANTS_FILE)
