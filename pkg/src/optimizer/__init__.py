"""Sparrow search optimizer (SSA and GeoSSA variants).

The run loop lives in ``src.optimizer.engine``; import it from there.
"""

from src.optimizer.models import (
    PRESETS,
    EdgeStrategy,
    InitStrategy,
    IterationTelemetry,
    ProducerStrategy,
    RunResult,
    SearchSpace,
    SsaParams,
    StrategyToggles,
    TelemetryLevel,
    resolve_preset,
)

__all__ = [
    "PRESETS",
    "EdgeStrategy",
    "InitStrategy",
    "IterationTelemetry",
    "ProducerStrategy",
    "RunResult",
    "SearchSpace",
    "SsaParams",
    "StrategyToggles",
    "TelemetryLevel",
    "resolve_preset",
]
