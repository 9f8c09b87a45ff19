"""Command-line interface for GeoSSA Bench.

Usage:
    geossa run config/example.yaml              # Run an experiment grid
    geossa report results --reference GeoSSA
    geossa verify-rng                           # Check golden RNG draws
    geossa list-problems
"""

from src.cli.main import app

__all__ = ["app"]
