"""
Metrics collection for verification suites.

Tracks how many checks each suite ran, how many failed, and how long it took.
"""

from __future__ import annotations

import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from threading import Lock
from typing import Any

from src.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class SuiteMetric:
    """Represents metrics for one verification suite."""

    suite: str
    checks: int = 0
    failures: int = 0
    total_duration_seconds: float = 0.0
    runs: int = 0

    @property
    def passed(self) -> bool:
        return self.failures == 0

    @property
    def failure_rate(self) -> float:
        """Failure percentage over all recorded checks."""
        return (self.failures / self.checks * 100) if self.checks > 0 else 0.0


class MetricsCollector:
    """
    Metrics collector for verification runs.

    Thread-safe: suites may be recorded from worker threads.
    """

    def __init__(self) -> None:
        self._lock = Lock()
        self._suites: dict[str, SuiteMetric] = {}

    def record_suite(
        self,
        suite: str,
        checks: int,
        failures: int,
        duration_seconds: float,
        metadata: dict[str, Any] | None = None,
    ) -> None:
        """
        Record the outcome of a suite run.

        Args:
            suite: Suite name
            checks: Number of individual checks performed
            failures: Number of failed checks
            duration_seconds: Wall-clock time of the run
            metadata: Additional context to log
        """
        with self._lock:
            metric = self._suites.setdefault(suite, SuiteMetric(suite=suite))
            metric.checks += checks
            metric.failures += failures
            metric.total_duration_seconds += duration_seconds
            metric.runs += 1

        logger.info(
            "suite_recorded",
            suite=suite,
            checks=checks,
            failures=failures,
            duration=round(duration_seconds, 4),
            **(metadata or {}),
        )

    def get_suite(self, suite: str) -> SuiteMetric | None:
        with self._lock:
            return self._suites.get(suite)

    def summary(self) -> dict[str, Any]:
        """Totals across all recorded suites."""
        with self._lock:
            suites = list(self._suites.values())
        return {
            "suites": len(suites),
            "passed": sum(1 for metric in suites if metric.passed),
            "failed": sum(1 for metric in suites if not metric.passed),
            "checks": sum(metric.checks for metric in suites),
            "failures": sum(metric.failures for metric in suites),
            "duration": sum(metric.total_duration_seconds for metric in suites),
        }

    def reset(self) -> None:
        with self._lock:
            self._suites.clear()


@contextmanager
def track_suite(collector: MetricsCollector, suite: str) -> Iterator[dict[str, int]]:
    """
    Time a suite and record its counters on exit.

    The caller increments ``counters["checks"]`` and ``counters["failures"]``.

    Example:
        ```python
        with track_suite(collector, "duality") as counters:
            counters["checks"] += 1
        ```
    """
    counters = {"checks": 0, "failures": 0}
    start = time.perf_counter()
    try:
        yield counters
    finally:
        collector.record_suite(
            suite,
            checks=counters["checks"],
            failures=counters["failures"],
            duration_seconds=time.perf_counter() - start,
        )
