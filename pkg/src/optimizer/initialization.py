"""Initial flock placement: pseudo-random and good-nodes set."""

import math

import numpy as np

from src.optimizer.models import InvalidPopulationError, Population, SearchSpace
from src.rng.streams import RngStream


def _check_size(n: int) -> None:
    if n < 2:
        raise InvalidPopulationError(f"Population needs at least 2 members, got {n}")


def init_pseudo_random(space: SearchSpace, n: int, stream: RngStream) -> Population:
    """Place each coordinate at lower + (upper - lower) * u with u uniform in [0, 1).

    Draws are taken member by member, coordinate by coordinate.
    """
    _check_size(n)
    unit = stream.random((n, space.dim))
    return Population(space.lower + unit * space.width)


def is_prime(value: int) -> bool:
    if value < 2:
        return False
    if value % 2 == 0:
        return value == 2
    return all(value % d for d in range(3, math.isqrt(value) + 1, 2))


def smallest_prime_at_least(value: int) -> int:
    candidate = max(2, value)
    while not is_prime(candidate):
        candidate += 1
    return candidate


def generating_vector(dim: int, prime: int | None = None) -> np.ndarray:
    """Good-nodes generating vector r_j = frac(2 cos(2 pi j / p)), j = 1..dim.

    Args:
        dim: Number of coordinates
        prime: Prime p; defaults to the smallest prime >= 2 * dim + 3

    Returns:
        Vector of length ``dim`` in [0, 1)
    """
    p = smallest_prime_at_least(2 * dim + 3) if prime is None else prime
    j = np.arange(1, dim + 1)
    return np.mod(2.0 * np.cos(2.0 * np.pi * j / p), 1.0)


def good_nodes_unit(
    m: int, dim: int, r: np.ndarray | None = None, prime: int | None = None
) -> np.ndarray:
    """First ``m`` good-nodes points in the unit cube.

    Point k (1-based) has coordinate j equal to frac(k * r_j).

    Args:
        m: Number of points (>= 1)
        dim: Dimension (>= 1)
        r: Explicit generating vector; built by ``generating_vector`` if omitted
        prime: Prime passed to ``generating_vector``

    Returns:
        Array of shape (m, dim)
    """
    if m < 1 or dim < 1:
        raise ValueError(f"Good-nodes set needs m >= 1 and dim >= 1, got m={m}, dim={dim}")
    if r is None:
        r = generating_vector(dim, prime)
    r = np.asarray(r, dtype=float).reshape(-1)
    if r.size != dim:
        raise ValueError(f"Generating vector has length {r.size}, expected {dim}")
    k = np.arange(1, m + 1, dtype=float)[:, None]
    return np.mod(k * r[None, :], 1.0)


def init_good_nodes(space: SearchSpace, n: int, prime: int | None = None) -> Population:
    """Map the good-nodes set onto the search space. Consumes no randomness."""
    _check_size(n)
    unit = good_nodes_unit(n, space.dim, prime=prime)
    return Population(space.lower + unit * space.width)
