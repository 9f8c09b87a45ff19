"""Seeded random streams.

Every stochastic draw made by an optimizer run goes through an ``RngStream``.
A stream is a numpy ``Generator`` over ``PCG64`` seeded from
``SeedSequence(seed, spawn_key=(stream_id,))``. Stream id 0 is the root
sequence, so ``RngStream(42, 0)`` reproduces ``numpy.random.default_rng(42)``
and can be checked against PCG64's published output from any language.

Standard normals use numpy's ziggurat sampler (``Generator.standard_normal``).
"""

import hashlib
import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

UINT64_MAX = 2**64 - 1

REFERENCE_SEED = 42
REFERENCE_STREAM_ID = 0
REFERENCE_COUNT = 10
REFERENCE_FILE = Path(__file__).parent / "data" / "rng_reference.csv"


class InvalidDimensionError(ValueError):
    """Raised when a vector draw is requested with a non-positive length."""


def derive_stream_id(*labels: object) -> int:
    """Derive a 64-bit stream id from a tuple of labels.

    The id is the first 8 bytes (big-endian) of
    ``blake2b("|".join(labels), digest_size=8)``.

    Args:
        *labels: Labels such as (algorithm, problem, repetition) or a phase tag

    Returns:
        Unsigned 64-bit stream id
    """
    key = "|".join(str(label) for label in labels).encode("utf-8")
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "big")


class RngStream:
    """Single-owner, replayable source of random variates."""

    def __init__(self, seed: int, stream_id: int = 0) -> None:
        """Create a stream.

        Args:
            seed: Unsigned 64-bit seed
            stream_id: Unsigned 64-bit sub-stream label (0 = root sequence)

        Raises:
            ValueError: If seed or stream_id is outside the unsigned 64-bit range
        """
        if not 0 <= seed <= UINT64_MAX:
            raise ValueError(f"Seed must be an unsigned 64-bit integer, got {seed}")
        if not 0 <= stream_id <= UINT64_MAX:
            raise ValueError(f"Stream id must be an unsigned 64-bit integer, got {stream_id}")

        self.seed = seed
        self.stream_id = stream_id
        if stream_id == 0:
            sequence = np.random.SeedSequence(seed)
        else:
            sequence = np.random.SeedSequence(seed, spawn_key=(stream_id,))
        self._generator = np.random.Generator(np.random.PCG64(sequence))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    @property
    def generator(self) -> np.random.Generator:
        """Underlying numpy generator, for bulk array draws."""
        return self._generator

    def spawn(self, *labels: object) -> "RngStream":
        """Create an independent stream for a labelled phase of this stream's task."""
        return RngStream(self.seed, derive_stream_id(self.stream_id, *labels))

    def uniform01(self) -> float:
        """Next uniform variate in [0, 1)."""
        return float(self._generator.random())

    def uniform(self, low: float, high: float, size: int | None = None) -> float | np.ndarray:
        """Uniform variate(s) in [low, high)."""
        if size is None:
            return float(self._generator.uniform(low, high))
        return self._generator.uniform(low, high, size)

    def standard_normal(self) -> float:
        """Next N(0, 1) variate."""
        return float(self._generator.standard_normal())

    def random(self, shape: int | tuple[int, ...]) -> np.ndarray:
        """Array of uniform [0, 1) variates."""
        return self._generator.random(shape)

    def rademacher_vector(self, d: int) -> np.ndarray:
        """Vector of independent +1/-1 entries, each with probability 1/2.

        Raises:
            InvalidDimensionError: If d < 1
        """
        if d < 1:
            raise InvalidDimensionError(f"Rademacher vector length must be >= 1, got {d}")
        bits = self._generator.integers(0, 2, size=d)
        return np.where(bits == 1, 1.0, -1.0)

    def choice_without_replacement(self, n: int, k: int) -> np.ndarray:
        """Draw k distinct indices from range(n)."""
        return self._generator.choice(n, size=k, replace=False)


def uniform01(stream: RngStream) -> float:
    """Next uniform variate in [0, 1) from ``stream``."""
    return stream.uniform01()


def standard_normal(stream: RngStream) -> float:
    """Next standard normal variate from ``stream``."""
    return stream.standard_normal()


def rademacher_vector(stream: RngStream, d: int) -> np.ndarray:
    """Vector of +1/-1 entries of length ``d`` drawn from ``stream``."""
    return stream.rademacher_vector(d)


def reference_draws(
    seed: int = REFERENCE_SEED,
    stream_id: int = REFERENCE_STREAM_ID,
    count: int = REFERENCE_COUNT,
) -> pd.DataFrame:
    """Produce the golden draw table.

    Uniform and normal draws each come from a freshly created stream.

    Returns:
        DataFrame with columns (kind, draw, value)
    """
    uniforms = RngStream(seed, stream_id)
    normals = RngStream(seed, stream_id)
    rows = [
        {"kind": "uniform", "draw": i, "value": uniforms.uniform01()} for i in range(count)
    ]
    rows += [
        {"kind": "normal", "draw": i, "value": normals.standard_normal()} for i in range(count)
    ]
    return pd.DataFrame(rows, columns=["kind", "draw", "value"])


def write_reference(path: Path) -> Path:
    """Write the golden draw table at 17 significant digits."""
    path.parent.mkdir(parents=True, exist_ok=True)
    reference_draws().to_csv(path, index=False, float_format="%.17g")
    logger.info(f"Wrote RNG reference draws to {path}")
    return path


def verify_reference(
    path: Path = REFERENCE_FILE, rel_tol: float = 1e-12
) -> list[dict[str, object]]:
    """Compare freshly generated draws against a golden file.

    Args:
        path: Golden CSV with columns (kind, draw, value)
        rel_tol: Relative tolerance per value

    Returns:
        List of mismatches; empty when the generator matches the file
    """
    expected = pd.read_csv(path)
    actual = reference_draws(count=int(expected["draw"].max()) + 1)
    merged = expected.merge(actual, on=["kind", "draw"], suffixes=("_expected", "_actual"))

    mismatches: list[dict[str, object]] = []
    for row in merged.itertuples(index=False):
        if not np.isclose(row.value_actual, row.value_expected, rtol=rel_tol, atol=0.0):
            mismatches.append(
                {
                    "kind": row.kind,
                    "draw": int(row.draw),
                    "expected": float(row.value_expected),
                    "actual": float(row.value_actual),
                }
            )
    if len(merged) != len(expected):
        mismatches.append(
            {"kind": "missing", "draw": -1, "expected": len(expected), "actual": len(merged)}
        )

    if mismatches:
        logger.warning(f"RNG reference mismatch: {len(mismatches)} value(s) differ from {path}")
    return mismatches


def stream_for_run(base_seed: int, labels: Sequence[object]) -> RngStream:
    """Stream owned by one run, keyed by its (algorithm, problem, repetition) labels."""
    return RngStream(base_seed, derive_stream_id(*labels))
