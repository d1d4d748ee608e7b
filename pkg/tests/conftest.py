"""Shared fixtures."""

import pytest
from hypothesis import HealthCheck, settings

from src.utils.config import configure
from src.utils.logging import setup_logging
from src.verification.selftest import sweep_bound

settings.register_profile(
    "sl2", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("sl2")

SWEEP_PRIMES = (2, 3, 5, 7, 11)

__all__ = ["SWEEP_PRIMES", "sweep_bound"]


@pytest.fixture(autouse=True)
def default_settings():
    """Every test starts and ends with the default configuration."""
    configure()
    setup_logging()
    yield
    configure()
    setup_logging()
