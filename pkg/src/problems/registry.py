"""Resolve problem references used in experiment configs.

Accepted references: ``F1``..``F23``, ``benchmarks`` (all 23), ``CB``, ``PL``,
``RN``, ``IRS``, ``uav`` (canonical terrain) and ``uav:<terrain.yaml>``.
"""

import dataclasses
from pathlib import Path

from src.problems import benchmarks, engineering, uav
from src.problems.models import ObjectiveProblem, ProblemFamily

BENCHMARK_ALIAS = "benchmarks"
UAV_PREFIX = "uav"


def expand_reference(reference: str) -> list[str]:
    """Expand aliases into individual problem references."""
    if reference.strip().lower() == BENCHMARK_ALIAS:
        return list(benchmarks.BENCHMARK_IDS)
    return [reference.strip()]


def validate_reference(reference: str) -> str:
    """Normalize a single reference, raising ValueError if it names nothing known."""
    ref = reference.strip()
    upper = ref.upper()
    if upper in benchmarks.SPECS:
        return upper
    if upper in {e.value for e in engineering.EngineeringId}:
        return upper
    if ref.lower() == UAV_PREFIX:
        return UAV_PREFIX
    if ref.lower().startswith(f"{UAV_PREFIX}:"):
        path = ref.split(":", 1)[1]
        if not path:
            raise ValueError("uav: reference needs a terrain file path")
        return f"{UAV_PREFIX}:{path}"
    raise ValueError(
        f"Unknown problem '{reference}'. Expected F1..F23, {BENCHMARK_ALIAS}, "
        f"CB, PL, RN, IRS, {UAV_PREFIX} or {UAV_PREFIX}:<terrain file>"
    )


def resolve(
    reference: str,
    interior: int = uav.DEFAULT_INTERIOR,
    weights: uav.CostWeights | None = None,
    noisy: bool = True,
    base_dir: Path | None = None,
) -> ObjectiveProblem:
    """Build the ``ObjectiveProblem`` for a reference.

    Args:
        reference: Problem reference
        interior: Interior waypoints for UAV problems
        weights: UAV cost weights
        noisy: Keep F7's noise term
        base_dir: Directory that relative terrain paths are resolved against
    """
    ref = validate_reference(reference)

    if ref in benchmarks.SPECS:
        return benchmarks.as_problem(ref, noisy=noisy)
    if ref in {e.value for e in engineering.EngineeringId}:
        return engineering.as_problem(ref)

    if ref == UAV_PREFIX:
        terrain = uav.default_terrain()
    else:
        path = Path(ref.split(":", 1)[1])
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        terrain = uav.load_terrain(path)
    problem = uav.as_problem(terrain, weights, interior)
    return dataclasses.replace(problem, name=ref)


def list_problems() -> list[dict[str, object]]:
    """One row per built-in problem, for display."""
    rows: list[dict[str, object]] = []
    for s in benchmarks.SPECS.values():
        rows.append(
            {
                "reference": s.id,
                "family": ProblemFamily.BENCHMARK.value,
                "name": s.name,
                "dim": s.dim,
                "detail": f"{s.category.value}, best {s.best_value:g}",
            }
        )
    for record in engineering.ENGINEERING_PROBLEMS.values():
        rows.append(
            {
                "reference": record.id.value,
                "family": ProblemFamily.ENGINEERING.value,
                "name": record.name,
                "dim": record.dim,
                "detail": f"penalty {record.penalty_coeff:g}",
            }
        )
    rows.append(
        {
            "reference": UAV_PREFIX,
            "family": ProblemFamily.UAV.value,
            "name": "UAV path (canonical terrain)",
            "dim": 3 * uav.DEFAULT_INTERIOR,
            "detail": f"{len(uav.default_terrain().obstacles)} obstacles",
        }
    )
    return rows
