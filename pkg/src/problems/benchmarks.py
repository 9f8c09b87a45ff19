"""The 23 classical benchmark functions F1-F23.

F1-F7 are unimodal, F8-F13 scalable multimodal and F14-F23 fixed-dimension
multimodal ("composition") functions. Domains follow the standard suite.
"""

import logging
from collections.abc import Callable
from enum import Enum
from functools import partial

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.optimizer.models import SearchSpace
from src.problems.coefficients import coefficient_tables
from src.problems.models import ObjectiveProblem, ProblemFamily
from src.rng.streams import InvalidDimensionError, RngStream

logger = logging.getLogger(__name__)


class BenchmarkCategory(str, Enum):
    UNIMODAL = "Unimodal"
    MULTIMODAL = "Multimodal"
    COMPOSITION = "Composition"


class BenchmarkSpec(BaseModel):
    """Immutable metadata for one benchmark."""

    model_config = ConfigDict(frozen=True)

    id: str
    name: str
    dim: int
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    best_value: float
    category: BenchmarkCategory
    optimizer: tuple[float, ...] | None = None  # a known minimizer


# Penalty helper shared by F12 and F13
def u_penalty(x: np.ndarray, a: float, k: float, m: int) -> np.ndarray:
    """k (x - a)^m above a, k (-x - a)^m below -a, zero inside [-a, a]."""
    return np.where(x > a, k * (x - a) ** m, np.where(x < -a, k * (-x - a) ** m, 0.0))


def sphere(x: np.ndarray) -> float:
    return float(np.sum(x**2))


def schwefel_2_22(x: np.ndarray) -> float:
    ax = np.abs(x)
    return float(np.sum(ax) + np.prod(ax))


def schwefel_1_2(x: np.ndarray) -> float:
    return float(np.sum(np.cumsum(x) ** 2))


def schwefel_2_21(x: np.ndarray) -> float:
    return float(np.max(np.abs(x)))


def rosenbrock(x: np.ndarray) -> float:
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def step(x: np.ndarray) -> float:
    return float(np.sum(np.floor(x + 0.5) ** 2))


def quartic_noise(x: np.ndarray, noise: float = 0.0) -> float:
    i = np.arange(1, x.size + 1)
    return float(np.sum(i * x**4) + noise)


def schwefel(x: np.ndarray) -> float:
    return float(np.sum(-x * np.sin(np.sqrt(np.abs(x)))))


def rastrigin(x: np.ndarray) -> float:
    return float(np.sum(x**2 - 10.0 * np.cos(2.0 * np.pi * x) + 10.0))


def ackley(x: np.ndarray) -> float:
    # Evaluation order fixes the value at the origin to 2**-51
    return float(
        -20.0 * np.exp(-0.2 * np.sqrt(np.mean(x**2)))
        - np.exp(np.mean(np.cos(2.0 * np.pi * x)))
        + 20.0
        + np.e
    )


def griewank(x: np.ndarray) -> float:
    i = np.arange(1, x.size + 1)
    return float(np.sum(x**2) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))) + 1.0)


def penalized_1(x: np.ndarray) -> float:
    n = x.size
    y = 1.0 + (x + 1.0) / 4.0
    body = (
        10.0 * np.sin(np.pi * y[0]) ** 2
        + np.sum((y[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * y[1:]) ** 2))
        + (y[-1] - 1.0) ** 2
    )
    return float(np.pi / n * body + np.sum(u_penalty(x, 10.0, 100.0, 4)))


def penalized_2(x: np.ndarray) -> float:
    body = (
        np.sin(3.0 * np.pi * x[0]) ** 2
        + np.sum((x[:-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * np.pi * x[1:]) ** 2))
        + (x[-1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * x[-1]) ** 2)
    )
    return float(0.1 * body + np.sum(u_penalty(x, 5.0, 100.0, 4)))


def foxholes(x: np.ndarray) -> float:
    a = coefficient_tables().foxholes_a
    j = np.arange(1, 26)
    inner = j + np.sum((x[:, None] - a) ** 6, axis=0)
    return float(1.0 / (1.0 / 500.0 + np.sum(1.0 / inner)))


def kowalik(x: np.ndarray) -> float:
    tables = coefficient_tables()
    a, b = tables.kowalik_a, tables.kowalik_b
    model = x[0] * (b**2 + b * x[1]) / (b**2 + b * x[2] + x[3])
    return float(np.sum((a - model) ** 2))


def six_hump_camel(x: np.ndarray) -> float:
    x1, x2 = x
    return float(
        4.0 * x1**2 - 2.1 * x1**4 + x1**6 / 3.0 + x1 * x2 - 4.0 * x2**2 + 4.0 * x2**4
    )


def branin(x: np.ndarray) -> float:
    x1, x2 = x
    return float(
        (x2 - 5.1 / (4.0 * np.pi**2) * x1**2 + 5.0 / np.pi * x1 - 6.0) ** 2
        + 10.0 * (1.0 - 1.0 / (8.0 * np.pi)) * np.cos(x1)
        + 10.0
    )


def goldstein_price(x: np.ndarray) -> float:
    x1, x2 = x
    first = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1**2 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2**2
    )
    second = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1**2 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2**2
    )
    return float(first * second)


def hartman(x: np.ndarray, variant: int) -> float:
    tables = coefficient_tables()
    if variant == 3:
        a, c, p = tables.hartman3_a, tables.hartman3_c, tables.hartman3_p
    else:
        a, c, p = tables.hartman6_a, tables.hartman6_c, tables.hartman6_p
    exponent = np.sum(a * (x[None, :] - p) ** 2, axis=1)
    return float(-np.sum(c * np.exp(-exponent)))


def shekel(x: np.ndarray, m: int) -> float:
    tables = coefficient_tables()
    a, c = tables.shekel_a[:m], tables.shekel_c[:m]
    return float(-np.sum(1.0 / (np.sum((x[None, :] - a) ** 2, axis=1) + c)))


def _spec(
    fid: str,
    name: str,
    dim: int,
    low: float | list[float],
    high: float | list[float],
    best: float,
    category: BenchmarkCategory,
    optimizer: list[float] | None = None,
) -> BenchmarkSpec:
    lower = tuple(np.broadcast_to(np.asarray(low, dtype=float), (dim,)).tolist())
    upper = tuple(np.broadcast_to(np.asarray(high, dtype=float), (dim,)).tolist())
    if optimizer is not None and len(optimizer) == 1:
        optimizer = optimizer * dim
    return BenchmarkSpec(
        id=fid,
        name=name,
        dim=dim,
        lower=lower,
        upper=upper,
        best_value=best,
        category=category,
        optimizer=tuple(optimizer) if optimizer is not None else None,
    )


U, M, C = BenchmarkCategory.UNIMODAL, BenchmarkCategory.MULTIMODAL, BenchmarkCategory.COMPOSITION

SPECS: dict[str, BenchmarkSpec] = {
    s.id: s
    for s in [
        _spec("F1", "Sphere", 30, -100, 100, 0.0, U, [0.0]),
        _spec("F2", "Schwefel 2.22", 30, -10, 10, 0.0, U, [0.0]),
        _spec("F3", "Schwefel 1.2", 30, -100, 100, 0.0, U, [0.0]),
        _spec("F4", "Schwefel 2.21", 30, -100, 100, 0.0, U, [0.0]),
        _spec("F5", "Rosenbrock", 30, -30, 30, 0.0, U, [1.0]),
        _spec("F6", "Step", 30, -100, 100, 0.0, U, [0.0]),
        _spec("F7", "Quartic with noise", 30, -1.28, 1.28, 0.0, U, [0.0]),
        _spec("F8", "Generalized Schwefel", 30, -500, 500, -12569.5, M, [420.9687]),
        _spec("F9", "Rastrigin", 30, -5.12, 5.12, 0.0, M, [0.0]),
        _spec("F10", "Ackley", 30, -32, 32, 0.0, M, [0.0]),
        _spec("F11", "Griewank", 30, -600, 600, 0.0, M, [0.0]),
        _spec("F12", "Generalized Penalized 1", 30, -50, 50, 0.0, M, [-1.0]),
        _spec("F13", "Generalized Penalized 2", 30, -50, 50, 0.0, M, [1.0]),
        _spec("F14", "Shekel's Foxholes", 2, -65.536, 65.536, 0.998, C, [-32.0, -32.0]),
        _spec(
            "F15", "Kowalik", 4, -5, 5, 0.0003075, C,
            [0.192833, 0.190836, 0.123117, 0.135766],
        ),
        _spec("F16", "Six-Hump Camel-Back", 2, -5, 5, -1.0316, C, [0.08984201, -0.7126564]),
        _spec("F17", "Branin", 2, [-5.0, 0.0], [10.0, 15.0], 0.398, C, [np.pi, 2.275]),
        _spec("F18", "Goldstein-Price", 2, -2, 2, 3.0, C, [0.0, -1.0]),
        _spec("F19", "Hartman 3", 3, 0, 1, -3.86, C, [0.114614, 0.555649, 0.852547]),
        _spec(
            "F20", "Hartman 6", 6, 0, 1, -3.32, C,
            [0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573],
        ),
        _spec("F21", "Shekel 5", 4, 0, 10, -10.1532, C, [4.0, 4.0, 4.0, 4.0]),
        _spec(
            "F22", "Shekel 7", 4, 0, 10, -10.4028, C,
            [4.00057, 4.00069, 3.99949, 3.99961],
        ),
        _spec(
            "F23", "Shekel 10", 4, 0, 10, -10.5363, C,
            [4.00075, 4.00059, 3.99966, 3.99951],
        ),
    ]
}

BENCHMARK_IDS: tuple[str, ...] = tuple(SPECS)

_FUNCTIONS: dict[str, Callable[[np.ndarray], float]] = {
    "F1": sphere,
    "F2": schwefel_2_22,
    "F3": schwefel_1_2,
    "F4": schwefel_2_21,
    "F5": rosenbrock,
    "F6": step,
    "F8": schwefel,
    "F9": rastrigin,
    "F10": ackley,
    "F11": griewank,
    "F12": penalized_1,
    "F13": penalized_2,
    "F14": foxholes,
    "F15": kowalik,
    "F16": six_hump_camel,
    "F17": branin,
    "F18": goldstein_price,
    "F19": partial(hartman, variant=3),
    "F20": partial(hartman, variant=6),
    "F21": partial(shekel, m=5),
    "F22": partial(shekel, m=7),
    "F23": partial(shekel, m=10),
}


def spec(fid: str) -> BenchmarkSpec:
    """Metadata for a benchmark id such as ``"F8"``."""
    try:
        return SPECS[fid.upper()]
    except KeyError:
        raise ValueError(f"Unknown benchmark id '{fid}'. Expected F1..F23") from None


def search_space(fid: str) -> SearchSpace:
    s = spec(fid)
    return SearchSpace(np.array(s.lower), np.array(s.upper))


def out_of_bounds(fid: str, x: np.ndarray) -> bool:
    """True if any coordinate lies outside the benchmark's domain."""
    return not search_space(fid).contains(x)


def evaluate(
    fid: str,
    x: np.ndarray,
    noise_stream: RngStream | None = None,
    noise: bool = True,
) -> float:
    """Evaluate a benchmark at ``x``.

    Out-of-bounds points are evaluated with the same formula; callers that
    care can check ``out_of_bounds``.

    Args:
        fid: Benchmark id F1..F23
        x: Position of length spec(fid).dim
        noise_stream: Stream for F7's uniform [0, 1) term
        noise: Set False (or omit the stream) for noise-free F7

    Raises:
        InvalidDimensionError: If len(x) differs from the benchmark dimension
    """
    s = spec(fid)
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != s.dim:
        raise InvalidDimensionError(f"{s.id} expects dimension {s.dim}, got {x.size}")

    if s.id == "F7":
        draw = noise_stream.uniform01() if (noise and noise_stream is not None) else 0.0
        return quartic_noise(x, draw)
    return _FUNCTIONS[s.id](x)


def as_problem(fid: str, noisy: bool = True) -> ObjectiveProblem:
    """Wrap a benchmark as an ``ObjectiveProblem``."""
    s = spec(fid)
    stochastic = noisy and s.id == "F7"

    def objective(x: np.ndarray, stream: RngStream | None) -> float:
        return evaluate(s.id, x, noise_stream=stream, noise=stochastic)

    return ObjectiveProblem(
        name=s.id,
        space=search_space(s.id),
        function=objective,
        family=ProblemFamily.BENCHMARK,
        stochastic=stochastic,
        metadata={"name": s.name, "best_value": s.best_value, "category": s.category.value},
    )
