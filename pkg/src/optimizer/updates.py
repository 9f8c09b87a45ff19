"""Position-update rules for producers, scroungers and danger-aware sparrows.

Each rule takes the current position and returns a new, unclamped position.
Random draws come from the caller's stream in a fixed order so that a run
replays exactly:

* original producer: R2, then alpha or Q
* sine-cosine producer: r1, r2, r3, then R2
* scrounger: Q (worse half) or the +/-1 vector A (better half)
* original edge: beta (f_i > f_g) or K (f_i == f_g)
* triangular walk: u1, u2, then the walk-scale draw
"""

import logging

import numpy as np

from src.optimizer.models import InvalidParameterError, SearchSpace, SsaParams
from src.rng.streams import RngStream

logger = logging.getLogger(__name__)

SIGMOID_STEEPNESS = 25.0
WALK_RANGE_START = 0.1


class NumericGuard:
    """Counts divisions rescued by the epsilon guard during a run."""

    def __init__(self) -> None:
        self.events = 0

    def trip(self, where: str, value: float) -> None:
        self.events += 1
        logger.debug(f"Numeric guard in {where}: |{value!r}| below epsilon")


def producer_update_original(
    x: np.ndarray,
    rank_i: int,
    t: int,
    params: SsaParams,
    stream: RngStream,
) -> np.ndarray:
    """Original producer move.

    With R2 uniform: if R2 < ST the position shrinks as x * exp(-i * alpha / T)
    with alpha uniform in (0, 1]; otherwise it takes a normal step x + Q * L
    where L is the all-ones vector.

    Args:
        x: Current position
        rank_i: 1-based producer rank
        t: Current iteration (unused by the formula, kept for symmetry)
        params: Optimizer parameters (ST, T)
        stream: Random stream

    Returns:
        New position
    """
    r2 = stream.uniform01()
    if r2 < params.st:
        # 1 - u maps [0, 1) onto (0, 1]
        alpha = 1.0 - stream.uniform01()
        horizon = max(params.T, 1)
        return x * np.exp(-rank_i * alpha / horizon)
    q = stream.standard_normal()
    return x + q * np.ones_like(x)


def inertia_weight(t: int, T: int) -> float:
    """Sigmoid inertia weight 1 / (1 + exp(-25 (t/T - 0.5))).

    Raises:
        InvalidParameterError: If T < 1
    """
    if T < 1:
        raise InvalidParameterError(f"Inertia weight needs T >= 1, got T={T}")
    return float(1.0 / (1.0 + np.exp(-SIGMOID_STEEPNESS * (t / T - 0.5))))


def producer_update_sine_cosine(
    x: np.ndarray,
    best: np.ndarray,
    t: int,
    params: SsaParams,
    stream: RngStream,
) -> np.ndarray:
    """Sine-cosine producer move weighted by the sigmoid inertia.

    omega * x + r1 * sin(r2) * |r3 * best - x| when R2 < ST, the cosine form
    otherwise. r1 and r3 are uniform in [0, 2], r2 in [0, 2 pi], R2 in [0, 1].
    """
    omega = inertia_weight(t, params.T)
    r1 = stream.uniform(0.0, 2.0)
    r2 = stream.uniform(0.0, 2.0 * np.pi)
    r3 = stream.uniform(0.0, 2.0)
    branch = stream.uniform01()

    wave = np.sin(r2) if branch < params.st else np.cos(r2)
    return omega * x + r1 * wave * np.abs(r3 * best - x)


def scrounger_update(
    x: np.ndarray,
    rank_i: int,
    producer_best: np.ndarray,
    worst: np.ndarray,
    n: int,
    stream: RngStream,
) -> np.ndarray:
    """Scrounger move.

    Ranks above n/2 are starving and fly off: Q * exp((worst - x) / i^2).
    The rest land near the best producer: X^P + |x - X^P| . A+ . L, where
    A+ = A^T / dim for a random +/-1 row A, so the step is the mean signed
    deviation broadcast over every coordinate.

    Args:
        x: Current position
        rank_i: 1-based global rank
        producer_best: Best producer position after the producer loop
        worst: Worst position at the start of the iteration
        n: Population size
        stream: Random stream
    """
    if rank_i > n / 2:
        q = stream.standard_normal()
        return q * np.exp((worst - x) / rank_i**2)

    signs = stream.rademacher_vector(x.size)
    step = float(np.sum(np.abs(x - producer_best) * signs)) / x.size
    return producer_best + step * np.ones_like(x)


def edge_update_original(
    x: np.ndarray,
    best: np.ndarray,
    worst: np.ndarray,
    f_i: float,
    f_g: float,
    f_w: float,
    params: SsaParams,
    stream: RngStream,
    guard: NumericGuard | None = None,
) -> np.ndarray:
    """Original danger-aware move.

    f_i > f_g: best + beta * |x - best|, beta standard normal.
    f_i == f_g: x + K * (|x - worst| * (f_i - f_w) / f_i + eps), K uniform in [-1, 1].
    When |f_i| is below eps the denominator is replaced by eps and the guard trips.
    """
    if f_i > f_g:
        beta = stream.standard_normal()
        return best + beta * np.abs(x - best)

    k = stream.uniform(-1.0, 1.0)
    denominator = f_i
    if abs(f_i) < params.epsilon:
        denominator = params.epsilon
        if guard is not None:
            guard.trip("edge_update_original", f_i)
    return x + k * (np.abs(x - worst) * (f_i - f_w) / denominator + params.epsilon)


def walk_range(t: int, T: int) -> float:
    """Linearly shrinking walk range rg = 0.1 - 0.1 * t / T."""
    if T < 1:
        raise InvalidParameterError(f"Walk range needs T >= 1, got T={T}")
    return WALK_RANGE_START - WALK_RANGE_START * t / T


def walk_scale(t: int, T: int, stream: RngStream) -> float:
    """Random walk coefficient r = rg * u."""
    return walk_range(t, T) * stream.uniform01()


def triangular_step(
    best: np.ndarray,
    x: np.ndarray,
    stream: RngStream,
    per_coordinate: bool = False,
) -> np.ndarray:
    """Squared third side of a random triangle with sides L and LP.

    L = best - x, LP = L * u1 and the enclosed angle is 2 pi u2, so
    alpha = L^2 + LP^2 - 2 L LP cos(2 pi u2). Evaluated as
    (L - LP cos)^2 + (LP sin)^2, which is the same quantity and never negative.

    Args:
        best: Anchor position
        x: Current position
        stream: Random stream
        per_coordinate: Draw u1, u2 per coordinate instead of once per sparrow
    """
    side = best - x
    if per_coordinate:
        u1 = stream.random(side.size)
        u2 = stream.random(side.size)
    else:
        u1 = stream.uniform01()
        u2 = stream.uniform01()
    partial = side * u1
    angle = 2.0 * np.pi * u2
    return (side - partial * np.cos(angle)) ** 2 + (partial * np.sin(angle)) ** 2


def edge_update_triangular(
    x: np.ndarray,
    producer_best: np.ndarray,
    t: int,
    T: int,
    stream: RngStream,
    per_coordinate: bool = False,
) -> np.ndarray:
    """Triangular-walk danger-aware move: X^P * L + r * alpha, elementwise.

    The product X^P * L multiplies a position by a displacement; the result
    is only brought back into range by the clamp that follows every update.
    """
    side = producer_best - x
    alpha = triangular_step(producer_best, x, stream, per_coordinate=per_coordinate)
    r = walk_scale(t, T, stream)
    return producer_best * side + r * alpha


def clamp_to_bounds(x: np.ndarray, space: SearchSpace) -> np.ndarray:
    """Project onto the search box. NaN coordinates go to the lower bound."""
    clipped = np.clip(x, space.lower, space.upper)
    return np.where(np.isnan(clipped), space.lower, clipped)
