"""Logging setup for experiment runs.

Library modules log through ``logging.getLogger(__name__)``; the CLI calls
``configure_logging`` once at startup.
"""

import logging
from typing import Any

from rich.console import Console
from rich.logging import RichHandler

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

logger = logging.getLogger("geossa")


def configure_logging(
    log_level: str = "INFO",
    rich_console: Console | None = None,
) -> None:
    """Configure application logging.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
        rich_console: Route records through a rich handler on this console
            instead of the plain stream handler

    Raises:
        ValueError: If the level name is unknown
    """
    level = getattr(logging, log_level.upper(), None)
    if not isinstance(level, int):
        raise ValueError(f"Unknown log level '{log_level}'")

    if rich_console is not None:
        logging.basicConfig(
            level=level,
            format="%(message)s",
            datefmt="[%X]",
            handlers=[RichHandler(console=rich_console, rich_tracebacks=True, show_path=False)],
            force=True,
        )
    else:
        logging.basicConfig(level=level, format=LOG_FORMAT, force=True)

    logger.debug(f"Logging configured at {log_level.upper()}")


class StructuredLogger:
    """Structured logger for run lifecycle events.

    Keyword arguments are attached to the record as ``extra`` fields.
    """

    def __init__(self, name: str) -> None:
        self.logger = logging.getLogger(name)

    def info(self, message: str, **kwargs: Any) -> None:
        self.logger.info(message, extra=kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        self.logger.warning(message, extra=kwargs)

    def error(self, message: str, exc_info: bool = False, **kwargs: Any) -> None:
        self.logger.error(message, extra=kwargs, exc_info=exc_info)

    def debug(self, message: str, **kwargs: Any) -> None:
        self.logger.debug(message, extra=kwargs)
