"""Utilities package."""

from src.utils.config import Settings, configure, get_settings
from src.utils.logging import get_logger, setup_logging
from src.utils.metrics import MetricsCollector, track_suite

__all__ = [
    "Settings",
    "configure",
    "get_settings",
    "get_logger",
    "setup_logging",
    "MetricsCollector",
    "track_suite",
]
