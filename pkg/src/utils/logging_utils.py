"""
Logging setup for the command line tools.
"""

import logging

from rich.console import Console
from rich.logging import RichHandler

from ..config.settings import LoggingConfig


def setup_logging(config: LoggingConfig | None = None) -> logging.Logger:
    """Route package logs to stderr through rich; stdout stays free for CSV output."""
    config = config or LoggingConfig()
    logging.basicConfig(
        level=logging.WARNING,
        format="%(message)s",
        handlers=[
            RichHandler(
                console=Console(stderr=True),
                show_path=False,
                rich_tracebacks=config.rich_tracebacks,
            )
        ],
        force=True,
    )
    logger = logging.getLogger("src")
    logger.setLevel(config.level)
    return logger
