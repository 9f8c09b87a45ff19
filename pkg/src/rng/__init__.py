"""Deterministic random streams."""

from src.rng.streams import (
    InvalidDimensionError,
    RngStream,
    derive_stream_id,
    rademacher_vector,
    standard_normal,
    uniform01,
)

__all__ = [
    "InvalidDimensionError",
    "RngStream",
    "derive_stream_id",
    "rademacher_vector",
    "standard_normal",
    "uniform01",
]
