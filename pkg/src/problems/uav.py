"""UAV 3-D path planning objective.

A candidate is a flat vector of ``interior`` waypoints (x, y, z triples).
The decoded path runs start -> waypoints -> goal. Its cost is a weighted
sum of path length, altitude variability and accumulated turning angle, plus
a quadratic penalty for sampled points that enter an inflated obstacle.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path as FsPath

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.optimizer.models import SearchSpace
from src.problems.coefficients import file_checksum
from src.problems.models import ObjectiveProblem, ProblemFamily
from src.rng.streams import RngStream

logger = logging.getLogger(__name__)

DEFAULT_TERRAIN_FILE = FsPath(__file__).parent / "data" / "terrain_default.yaml"
DEFAULT_INTERIOR = 8
SAMPLES_PER_SEGMENT = 10
PENALTY_COEFF = 1e3

Point3 = tuple[float, float, float]


class InvalidEncodingError(ValueError):
    """Raised when a decision vector does not encode whole waypoints."""


class ObstacleKind(str, Enum):
    SPHERE = "sphere"
    CYLINDER = "cylinder"


class Obstacle(BaseModel):
    """Static obstacle. Cylinders are vertical, based at ``center``."""

    model_config = ConfigDict(frozen=True)

    kind: ObstacleKind
    center: Point3
    radius: float = Field(gt=0.0)
    height: float = Field(default=0.0, ge=0.0)
    clearance: float = Field(default=0.0, ge=0.0)

    @property
    def safe_radius(self) -> float:
        return self.radius + self.clearance

    def distance(self, points: np.ndarray) -> np.ndarray:
        """Distance from each point (rows of ``points``) to the obstacle core.

        Sphere: distance to the center. Cylinder: distance to the axis segment
        from the base center up to ``height``.
        """
        points = np.atleast_2d(points)
        center = np.asarray(self.center, dtype=float)
        if self.kind is ObstacleKind.SPHERE:
            return np.linalg.norm(points - center, axis=1)

        axis_z = np.clip(points[:, 2], center[2], center[2] + self.height)
        nearest = np.column_stack(
            [np.full(len(points), center[0]), np.full(len(points), center[1]), axis_z]
        )
        return np.linalg.norm(points - nearest, axis=1)


class Bounds(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower: Point3
    upper: Point3

    @model_validator(mode="after")
    def _ordered(self) -> "Bounds":
        if not all(lo < hi for lo, hi in zip(self.lower, self.upper, strict=True)):
            raise ValueError(f"Bounds lower {self.lower} must be below upper {self.upper}")
        return self

    def contains(self, point: Point3 | np.ndarray) -> bool:
        p = np.asarray(point, dtype=float)
        return bool(np.all(p >= self.lower) and np.all(p <= self.upper))


class Terrain(BaseModel):
    """Flight volume, endpoints and obstacles. Immutable after load."""

    model_config = ConfigDict(frozen=True)

    name: str = "custom"
    bounds: Bounds
    start: Point3
    goal: Point3
    obstacles: list[Obstacle] = Field(default_factory=list)

    @model_validator(mode="after")
    def _endpoints_clear(self) -> "Terrain":
        for label, point in (("start", self.start), ("goal", self.goal)):
            if not self.bounds.contains(point):
                raise ValueError(f"Terrain {label} {point} lies outside the bounds")
            for i, obstacle in enumerate(self.obstacles):
                if obstacle.distance(np.asarray(point, dtype=float))[0] < obstacle.safe_radius:
                    raise ValueError(f"Terrain {label} {point} lies inside obstacle {i}")
        return self


class CostWeights(BaseModel):
    """Weights of length, height and smoothness costs."""

    model_config = ConfigDict(frozen=True)

    w1: float = Field(default=0.5, ge=0.0)
    w2: float = Field(default=0.3, ge=0.0)
    w3: float = Field(default=0.2, ge=0.0)

    @model_validator(mode="after")
    def _sum_to_one(self) -> "CostWeights":
        total = self.w1 + self.w2 + self.w3
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"Cost weights must sum to 1, got {total}")
        return self


@dataclass
class Path:
    """Waypoints P1..Pg with fixed endpoints."""

    waypoints: np.ndarray  # shape (g, 3)
    clamped: bool = False

    @property
    def size(self) -> int:
        return int(self.waypoints.shape[0])


@dataclass
class PathCost:
    """Cost terms of one decoded path."""

    length: float
    height: float
    smoothness: float
    penalty: float
    total: float


def load_terrain(path: FsPath) -> Terrain:
    """Load and validate a terrain YAML file.

    Raises:
        ValueError: If the file does not describe a valid terrain
    """
    try:
        raw = yaml.safe_load(FsPath(path).read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise ValueError(f"Terrain file {path} is not valid YAML: {e}") from e
    if not isinstance(raw, dict):
        raise ValueError(f"Terrain file {path} must contain a mapping")
    terrain = Terrain.model_validate(raw)
    logger.debug(f"Loaded terrain '{terrain.name}' with {len(terrain.obstacles)} obstacles")
    return terrain


@lru_cache
def default_terrain() -> Terrain:
    return load_terrain(DEFAULT_TERRAIN_FILE)


def terrain_checksum(path: FsPath = DEFAULT_TERRAIN_FILE) -> str:
    return file_checksum(FsPath(path))


def decode(x: np.ndarray, terrain: Terrain, interior: int = DEFAULT_INTERIOR) -> Path:
    """Turn a flat decision vector into a path, clamping waypoints into the bounds.

    Raises:
        InvalidEncodingError: If len(x) != 3 * interior
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if interior < 0 or x.size != 3 * interior:
        raise InvalidEncodingError(
            f"Expected {3 * interior} values for {interior} interior waypoints, got {x.size}"
        )

    inner = x.reshape(interior, 3)
    clipped = np.clip(inner, terrain.bounds.lower, terrain.bounds.upper)
    clamped = bool(np.any(clipped != inner))
    waypoints = np.vstack([np.asarray(terrain.start), clipped, np.asarray(terrain.goal)])
    return Path(waypoints=waypoints, clamped=clamped)


def path_length(p: Path) -> float:
    return float(np.sum(np.linalg.norm(np.diff(p.waypoints, axis=0), axis=1)))


def height_cost(p: Path) -> float:
    """Population standard deviation of waypoint altitudes."""
    return float(np.std(p.waypoints[:, 2]))


def smoothness_cost(p: Path) -> float:
    """Sum of turning angles (radians) between consecutive non-degenerate segments."""
    if p.size < 3:
        return 0.0
    segments = np.diff(p.waypoints, axis=0)
    norms = np.linalg.norm(segments, axis=1)
    keep = norms > 0.0
    segments, norms = segments[keep], norms[keep]
    if len(segments) < 2:
        return 0.0
    cosines = np.sum(segments[:-1] * segments[1:], axis=1) / (norms[:-1] * norms[1:])
    return float(np.sum(np.arccos(np.clip(cosines, -1.0, 1.0))))


def sample_path(p: Path, per_segment: int = SAMPLES_PER_SEGMENT) -> np.ndarray:
    """Points along the path: ``per_segment`` per segment starting at each waypoint, plus the goal."""
    fractions = np.arange(per_segment) / per_segment
    starts, ends = p.waypoints[:-1], p.waypoints[1:]
    samples = starts[:, None, :] + fractions[None, :, None] * (ends - starts)[:, None, :]
    return np.vstack([samples.reshape(-1, 3), p.waypoints[-1:]])


def obstacle_penalty(
    p: Path,
    terrain: Terrain,
    per_segment: int = SAMPLES_PER_SEGMENT,
    coeff: float = PENALTY_COEFF,
) -> float:
    """C * sum over samples and obstacles of max(0, radius + clearance - distance)^2."""
    if not terrain.obstacles:
        return 0.0
    samples = sample_path(p, per_segment)
    total = 0.0
    for obstacle in terrain.obstacles:
        shortfall = np.maximum(0.0, obstacle.safe_radius - obstacle.distance(samples))
        total += float(np.sum(shortfall**2))
    return coeff * total


def collision_free(
    p: Path,
    terrain: Terrain,
    density_factor: int = 4,
    per_segment: int = SAMPLES_PER_SEGMENT,
) -> bool:
    """Dense re-check that no sampled point enters any inflated obstacle."""
    samples = sample_path(p, per_segment * density_factor)
    return all(
        bool(np.all(obstacle.distance(samples) >= obstacle.safe_radius))
        for obstacle in terrain.obstacles
    )


def cost_breakdown(
    x: np.ndarray,
    terrain: Terrain,
    weights: CostWeights | None = None,
    interior: int = DEFAULT_INTERIOR,
) -> PathCost:
    weights = weights or CostWeights()
    p = decode(x, terrain, interior)
    length = path_length(p)
    height = height_cost(p)
    smoothness = smoothness_cost(p)
    penalty = obstacle_penalty(p, terrain)
    total = weights.w1 * length + weights.w2 * height + weights.w3 * smoothness + penalty
    return PathCost(length, height, smoothness, penalty, total)


def total_cost(
    x: np.ndarray,
    terrain: Terrain,
    weights: CostWeights | None = None,
    interior: int = DEFAULT_INTERIOR,
) -> float:
    """Weighted path cost plus obstacle penalty."""
    return cost_breakdown(x, terrain, weights, interior).total


def as_problem(
    terrain: Terrain | None = None,
    weights: CostWeights | None = None,
    interior: int = DEFAULT_INTERIOR,
) -> ObjectiveProblem:
    """Expose the path cost as a deterministic ``ObjectiveProblem`` of dimension 3 * interior."""
    terrain = terrain or default_terrain()
    weights = weights or CostWeights()
    if interior < 1:
        raise ValueError(f"UAV problem needs at least one interior waypoint, got {interior}")

    lower = np.tile(np.asarray(terrain.bounds.lower, dtype=float), interior)
    upper = np.tile(np.asarray(terrain.bounds.upper, dtype=float), interior)

    def objective(x: np.ndarray, stream: RngStream | None) -> float:
        return total_cost(x, terrain, weights, interior)

    return ObjectiveProblem(
        name="uav" if terrain.name == "default" else f"uav:{terrain.name}",
        space=SearchSpace(lower, upper),
        function=objective,
        family=ProblemFamily.UAV,
        metadata={"interior": interior, "terrain": terrain.name},
    )
