"""Constrained engineering design problems solved with a static quadratic penalty.

* CB  - corrugated bulkhead (4 variables, 6 inequalities)
* PL  - piston lever (4 variables, 4 inequalities)
* RN  - reactor network (6 variables, 1 inequality, 4 equalities)
* IRS - industrial refrigeration system (14 variables, 15 inequalities)

Every evaluator returns a ``ConstraintReport``; the optimizer sees only the
penalized objective raw + coeff * (sum max(0, g)^2 + sum h^2).
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from src.optimizer.models import SearchSpace
from src.problems.models import ObjectiveProblem, ProblemFamily
from src.rng.streams import InvalidDimensionError, RngStream

logger = logging.getLogger(__name__)

PENALTY_COEFF = 1e3
TOL_G = 1e-6
TOL_H = 1e-4
DENOMINATOR_GUARD = 1e-12
REFERENCE_POINTS_FILE = Path(__file__).parent / "data" / "engineering_reference_points.csv"

# Piston lever constants
PL_Q = 10000.0
PL_P = 1500.0
PL_L = 240.0
PL_M_MAX = 1.8e6
PL_THETA = math.pi / 4

# Reactor network rate constants
RN_K1 = 0.09755988
RN_K2 = 0.99 * RN_K1
RN_K3 = 0.0391908
RN_K4 = 0.9 * RN_K3


class DomainError(ValueError):
    """Raised when a point lies outside an evaluator's mathematical domain."""


class EngineeringId(str, Enum):
    CB = "CB"
    PL = "PL"
    RN = "RN"
    IRS = "IRS"


class EngineeringProblem(BaseModel):
    """Problem record: dimension, printed variable ranges and penalty scale."""

    model_config = ConfigDict(frozen=True)

    id: EngineeringId
    name: str
    dim: int
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    penalty_coeff: float = Field(default=PENALTY_COEFF, gt=0.0)

    @property
    def space(self) -> SearchSpace:
        return SearchSpace(np.array(self.lower), np.array(self.upper))


@dataclass
class ConstraintReport:
    """Objective, constraint values and penalty for one point."""

    raw_objective: float
    constraints: np.ndarray  # g_i, feasible when <= 0
    inequality_violations: np.ndarray  # max(0, g_i)
    equality_residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))  # |h_i|
    penalized_objective: float = math.nan
    feasible: bool = False
    singular: bool = False

    @property
    def max_violation(self) -> float:
        parts = [self.inequality_violations, self.equality_residuals]
        values = np.concatenate([np.asarray(p, dtype=float).reshape(-1) for p in parts])
        return float(values.max()) if values.size else 0.0


class _Guard:
    """Epsilon guard for printed denominators; remembers whether it fired."""

    def __init__(self) -> None:
        self.fired = False

    def div(self, numerator: float, denominator: float) -> float:
        if abs(denominator) < DENOMINATOR_GUARD:
            self.fired = True
            denominator = math.copysign(DENOMINATOR_GUARD, denominator)
        return numerator / denominator


def _vector(x: np.ndarray, dim: int, label: str) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != dim:
        raise InvalidDimensionError(f"{label} expects {dim} variables, got {x.size}")
    return x


def _assemble(
    raw: float,
    g: list[float],
    penalty_coeff: float,
    h: list[float] | None = None,
    singular: bool = False,
) -> ConstraintReport:
    constraints = np.asarray(g, dtype=float)
    violations = np.maximum(0.0, constraints)
    residuals = np.abs(np.asarray(h if h is not None else [], dtype=float))
    penalty = penalty_coeff * (float(np.sum(violations**2)) + float(np.sum(residuals**2)))
    feasible = bool(np.all(violations <= TOL_G) and np.all(residuals <= TOL_H))
    return ConstraintReport(
        raw_objective=float(raw),
        constraints=constraints,
        inequality_violations=violations,
        equality_residuals=residuals,
        penalized_objective=float(raw) + penalty,
        feasible=feasible,
        singular=singular,
    )


def cb_evaluate(x: np.ndarray, penalty_coeff: float = PENALTY_COEFF) -> ConstraintReport:
    """Corrugated bulkhead: minimum-weight design for given compressive strength."""
    x1, x2, x3, x4 = _vector(x, 4, "CB")
    guard = _Guard()

    root = math.sqrt(abs(x3**2 - x2**2))
    f = guard.div(5.885 * x4 * (x1 + x3), x1 + root)

    g = [
        -x4 * x2 * (0.4 * x1 + x3 / 6.0) + 8.94 * (x1 + root),
        -x4 * x2**2 * (0.2 * x1 + x3 / 12.0) + 2.2 * (8.94 * (x1 + root)) ** (4.0 / 3.0),
        -x4 + 0.0156 * x1 + 0.15,
        -x4 + 0.0156 * x3 + 0.15,
        -x4 + 1.05,
        -x3 + x2,
    ]
    return _assemble(f, g, penalty_coeff, singular=guard.fired)


def pl_evaluate(
    x: np.ndarray,
    penalty_coeff: float = PENALTY_COEFF,
    theta: float = PL_THETA,
) -> ConstraintReport:
    """Piston lever: minimum oil volume when the lever is lifted through ``theta``."""
    x1, x2, x3, x4 = _vector(x, 4, "PL")
    guard = _Guard()
    sin_t, cos_t = math.sin(theta), math.cos(theta)

    l1 = math.sqrt((x4 - x2) ** 2 + x1**2)
    l2 = math.sqrt((x4 * sin_t + x1) ** 2 + (x2 - x4 * cos_t) ** 2)
    r = guard.div(abs(-x4 * (x4 * sin_t + x1) + x1 * (x2 - x4 * cos_t)), l1)
    force = 0.25 * math.pi * PL_P * x3**2

    f = 0.25 * math.pi * x3**2 * (l2 - l1)
    g = [
        PL_Q * PL_L * cos_t - r * force,
        PL_Q * (PL_L - x4) - PL_M_MAX,
        1.2 * (l2 - l1) - l1,
        x3 / 2.0 - x2,
    ]
    return _assemble(f, g, penalty_coeff, singular=guard.fired)


def rn_evaluate(x: np.ndarray, penalty_coeff: float = PENALTY_COEFF) -> ConstraintReport:
    """Reactor network: objective x4 under one inequality and four mass-balance equalities.

    Raises:
        DomainError: If any coordinate is outside the variable ranges
    """
    x = _vector(x, 6, "RN")
    problem = ENGINEERING_PROBLEMS[EngineeringId.RN]
    if np.any(x < np.array(problem.lower)) or np.any(x > np.array(problem.upper)):
        raise DomainError(f"RN point outside its variable ranges: {x.tolist()}")
    x1, x2, x3, x4, x5, x6 = x

    g = [math.sqrt(x5) + math.sqrt(x6) - 4.0]
    h = [
        x1 + RN_K1 * x2 * x5 - 1.0,
        x2 - x1 + RN_K2 * x2 * x6,
        x3 + x1 + RN_K3 * x3 * x5 - 1.0,
        x4 - x3 + x2 - x1 + RN_K4 * x4 * x6,
    ]
    return _assemble(x4, g, penalty_coeff, h=h)


def irs_evaluate(x: np.ndarray, penalty_coeff: float = PENALTY_COEFF) -> ConstraintReport:
    """Industrial refrigeration system: minimum cost under 15 inequalities.

    Raises:
        DomainError: If any coordinate is not strictly positive
    """
    x = _vector(x, 14, "IRS")
    if np.any(x <= 0.0):
        raise DomainError(f"IRS variables must be strictly positive: {x.tolist()}")
    x1, x2, x3, x4, x5, x6, x7, x8, x9, x10, x11, x12, x13, x14 = x
    guard = _Guard()
    d = guard.div

    f = (
        63098.88 * x2 * x4 * x12
        + 5441.5 * x2**2 * x12
        + 115055.5 * x2**1.664 * x6
        + 6172.27 * x2**2 * x6
        + 63098.88 * x1 * x3 * x11
        + 5441.5 * x1**2 * x11
        + 115055.5 * x1**1.664 * x5
        + 6172.27 * x1**2 * x5
        + 140.53 * x1 * x11
        + 281.29 * x3 * x11
        + 70.26 * x1**2
        + 281.29 * x1 * x3
        + 281.29 * x3**2
        + d(14437.0 * x8**1.8812 * x12**0.3424 * x10 * x1**2 * x7, x14 * x9)
        + 20470.2 * x7**2.893 * x11**0.316 * x12
    )

    g = [
        d(1.524, x7) - 1.0,
        d(1.524, x8) - 1.0,
        0.07789 * x1 - d(2.0 * x9, x7) - 1.0,
        d(7.05305 * x1**2 * x10, x9 * x8 * x2 * x14) - 1.0,
        d(0.0833 * x14, x13) - 1.0,
        d(47.136 * x2**0.333 * x12, x10)
        - 1.333 * x8 * x13**2.1195
        + d(62.08 * x13**2.1195 * x8**0.2, x12 * x10)
        - 1.0,
        0.04771 * x10 * x8**1.8812 * x12**0.3424 - 1.0,
        0.0488 * x9 * x7**1.893 * x11**0.316 - 1.0,
        d(0.0099 * x1, x3) - 1.0,
        d(0.0193 * x2, x4) - 1.0,
        d(0.0298 * x1, x5) - 1.0,
        d(0.056 * x2, x6) - 1.0,
        d(2.0, x9) - 1.0,
        d(2.0, x10) - 1.0,
        d(x12, x11) - 1.0,
    ]
    return _assemble(f, g, penalty_coeff, singular=guard.fired)


ENGINEERING_PROBLEMS: dict[EngineeringId, EngineeringProblem] = {
    EngineeringId.CB: EngineeringProblem(
        id=EngineeringId.CB,
        name="Corrugated bulkhead",
        dim=4,
        lower=(1.0, 1.0, 1.0, 1.0),
        upper=(100.0, 100.0, 100.0, 5.0),
    ),
    EngineeringId.PL: EngineeringProblem(
        id=EngineeringId.PL,
        name="Piston lever",
        dim=4,
        lower=(0.05, 0.05, 0.05, 0.05),
        upper=(500.0, 500.0, 120.0, 500.0),
    ),
    EngineeringId.RN: EngineeringProblem(
        id=EngineeringId.RN,
        name="Reactor network",
        dim=6,
        lower=(1e-5,) * 6,
        upper=(1.0, 1.0, 1.0, 1.0, 16.0, 16.0),
    ),
    EngineeringId.IRS: EngineeringProblem(
        id=EngineeringId.IRS,
        name="Industrial refrigeration system",
        dim=14,
        lower=(0.001,) * 14,
        upper=(5.0,) * 14,
    ),
}

EVALUATORS: dict[EngineeringId, Callable[..., ConstraintReport]] = {
    EngineeringId.CB: cb_evaluate,
    EngineeringId.PL: pl_evaluate,
    EngineeringId.RN: rn_evaluate,
    EngineeringId.IRS: irs_evaluate,
}


def _resolve(problem_id: str | EngineeringId) -> EngineeringId:
    try:
        return EngineeringId(problem_id.upper())
    except ValueError:
        valid = ", ".join(e.value for e in EngineeringId)
        raise ValueError(f"Unknown engineering problem '{problem_id}'. Valid: {valid}") from None


def evaluate(
    problem_id: str | EngineeringId,
    x: np.ndarray,
    penalty_coeff: float = PENALTY_COEFF,
) -> ConstraintReport:
    """Dispatch to the evaluator for ``problem_id``."""
    return EVALUATORS[_resolve(problem_id)](x, penalty_coeff=penalty_coeff)


def as_problem(problem_id: str | EngineeringId) -> ObjectiveProblem:
    """Expose a design problem as an ``ObjectiveProblem`` returning the penalized objective."""
    pid = _resolve(problem_id)
    record = ENGINEERING_PROBLEMS[pid]
    evaluator = EVALUATORS[pid]

    def objective(x: np.ndarray, stream: RngStream | None) -> float:
        return evaluator(x, penalty_coeff=record.penalty_coeff).penalized_objective

    return ObjectiveProblem(
        name=pid.value,
        space=record.space,
        function=objective,
        family=ProblemFamily.ENGINEERING,
        metadata={"name": record.name, "penalty_coeff": record.penalty_coeff},
    )


def reference_points(path: Path = REFERENCE_POINTS_FILE) -> pd.DataFrame:
    """Hand-checked objective and constraint values at fixed points.

    Columns: problem, point (float array), kind (objective | g | h),
    index (1-based constraint number, 0 for the objective), value.
    Equality rows hold the signed h_i; reports store |h_i|.
    """
    frame = pd.read_csv(path, dtype={"point": str})
    frame["point"] = [np.array([float(v) for v in p.split(";")]) for p in frame["point"]]
    return frame
