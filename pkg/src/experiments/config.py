"""Experiment configuration: YAML grid files and process settings."""

import logging
from functools import lru_cache
from pathlib import Path

import yaml
from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.experiments.models import ExperimentConfig

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Raised when an experiment config cannot be parsed or validated."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None) -> None:
        self.key = key
        self.line = line
        super().__init__(message)


class Settings(BaseSettings):
    """Process settings loaded from environment variables or ``.env``."""

    model_config = SettingsConfigDict(
        env_prefix="GEOSSA_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    output_dir: Path | None = Field(
        default=None, description="Overrides the config's output_dir"
    )
    workers: int | None = Field(default=None, ge=1, description="Worker processes for run_grid")
    log_level: str = Field(default="INFO", description="Logging level")


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


def _line_of(root: yaml.Node | None, loc: tuple[int | str, ...]) -> int | None:
    """1-based line of the deepest node along ``loc`` that exists in the document."""
    node, line = root, None
    for item in loc:
        if isinstance(node, yaml.MappingNode):
            pair = next(((k, v) for k, v in node.value if k.value == str(item)), None)
            if pair is None:
                break
            line = pair[0].start_mark.line + 1
            node = pair[1]
        elif isinstance(node, yaml.SequenceNode) and isinstance(item, int):
            if item >= len(node.value):
                break
            node = node.value[item]
            line = node.start_mark.line + 1
        else:
            break
    return line


def _format_error(error: dict, root: yaml.Node | None) -> ConfigError:
    loc = tuple(error.get("loc", ()))
    key = ".".join(str(part) for part in loc) or None
    line = _line_of(root, loc) if loc else None
    message = error.get("msg", "invalid value")
    if message.startswith("Value error, "):
        message = message[len("Value error, ") :]
    where = f" (line {line})" if line is not None else ""
    prefix = f"{key}{where}: " if key else ""
    return ConfigError(f"{prefix}{message}", key=key, line=line)


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate an experiment config document.

    Args:
        text: YAML text

    Returns:
        Validated config with defaults applied

    Raises:
        ConfigError: On malformed YAML, unknown keys or names, missing fields or bad counts
    """
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        where = f" at line {line}" if line is not None else ""
        raise ConfigError(f"Config is not valid YAML{where}: {e}", line=line) from e

    if not isinstance(data, dict):
        raise ConfigError("Config must be a mapping of keys to values")

    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as e:
        errors = [_format_error(err, root) for err in e.errors()]
        first = errors[0]
        if len(errors) > 1:
            detail = "; ".join(str(err) for err in errors)
            raise ConfigError(detail, key=first.key, line=first.line) from e
        raise first from e

    logger.debug(
        f"Parsed config: {len(config.algorithms)} algorithm(s), {len(config.problems)} problem(s), "
        f"{config.repetitions} repetition(s)"
    )
    return config


def load_config(path: Path) -> ExperimentConfig:
    """Read and parse a config file.

    Raises:
        ConfigError: If the file is missing or invalid
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    return parse_config(text)
