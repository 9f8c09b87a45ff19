"""Config-driven experiment grids and their output files."""

from src.experiments.config import ConfigError, Settings, get_settings, load_config, parse_config
from src.experiments.models import ExperimentConfig, RunRecord
from src.experiments.reports import emit_reports
from src.experiments.runner import GridResult, run_grid

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "GridResult",
    "RunRecord",
    "Settings",
    "emit_reports",
    "get_settings",
    "load_config",
    "parse_config",
    "run_grid",
]
