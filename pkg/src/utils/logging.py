"""
Structured logging on top of structlog.

Every event is written to stderr; stdout carries only command reports, so a
grid or a selftest summary can be piped without log noise.
"""

from __future__ import annotations

import logging
import sys
from typing import Any

import structlog

from src.utils.config import Settings, get_settings

_SHARED_PROCESSORS: tuple[Any, ...] = (
    structlog.contextvars.merge_contextvars,
    structlog.stdlib.add_logger_name,
    structlog.stdlib.add_log_level,
    structlog.stdlib.PositionalArgumentsFormatter(),
    structlog.processors.TimeStamper(fmt="iso"),
    structlog.processors.StackInfoRenderer(),
    structlog.processors.format_exc_info,
    structlog.processors.UnicodeDecoder(),
)


def _renderer(log_format: str) -> Any:
    if log_format == "json":
        return structlog.processors.JSONRenderer()
    return structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty())


def setup_logging(settings: Settings | None = None) -> None:
    """
    (Re)configure stdlib logging and structlog from the active settings.

    Unknown level names fall back to WARNING.
    """
    settings = settings or get_settings()
    level = getattr(logging, settings.log_level.upper(), None)
    if not isinstance(level, int):
        level = logging.WARNING

    # force=True replaces handlers bound to an earlier sys.stderr
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=level, force=True)

    structlog.configure(
        processors=[*_SHARED_PROCESSORS, _renderer(settings.log_format)],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )


def get_logger(name: str, **initial_context: Any) -> structlog.stdlib.BoundLogger:
    """
    Get a structured logger, optionally with bound context.

    Example:
        ```python
        logger = get_logger(__name__, p=3)
        logger.info("grid_rendered", max_weight=26, format="svg")
        ```
    """
    logger = structlog.get_logger(name)
    return logger.bind(**initial_context) if initial_context else logger


class LoggerAdapter:
    """
    Class-scoped logger named after the owning object's class.

    Usage:
        class SelfTestRunner:
            def __init__(self, primes):
                self.logger = LoggerAdapter(self, primes=primes)
    """

    def __init__(self, obj: object, **context: Any):
        self._logger = get_logger(type(obj).__name__, **context)

    def bind(self, **new_context: Any) -> LoggerAdapter:
        self._logger = self._logger.bind(**new_context)
        return self

    def debug(self, event: str, **kwargs: Any) -> None:
        self._logger.debug(event, **kwargs)

    def info(self, event: str, **kwargs: Any) -> None:
        self._logger.info(event, **kwargs)

    def warning(self, event: str, **kwargs: Any) -> None:
        self._logger.warning(event, **kwargs)


setup_logging()
