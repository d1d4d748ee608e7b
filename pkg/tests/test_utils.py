"""Tests for configuration, logging and suite metrics."""

import logging

import pytest
from pydantic import ValidationError

from src.utils.config import Settings, configure, get_settings
from src.utils.logging import LoggerAdapter, get_logger, setup_logging
from src.utils.metrics import MetricsCollector, track_suite


class TestSettings:
    def test_defaults(self):
        settings = get_settings()
        assert settings.log_level == "WARNING"
        assert settings.log_format == "console"
        assert settings.max_weight == 2**20
        assert settings.max_grid_weight == 4096
        assert settings.sweep_limit == 600

    def test_configure_replaces_settings(self):
        settings = configure(max_weight=50, log_level=None)
        assert settings.max_weight == 50
        assert settings.log_level == "WARNING"
        assert get_settings() is settings

    def test_configure_resets(self):
        configure(max_weight=50)
        assert configure().max_weight == 2**20

    def test_environment_is_ignored(self, monkeypatch):
        monkeypatch.setenv("MAX_WEIGHT", "5")
        monkeypatch.setenv("LOG_FORMAT", "json")
        settings = configure()
        assert settings.max_weight == 2**20
        assert settings.log_format == "console"

    def test_validation(self):
        with pytest.raises(ValidationError):
            Settings(log_format="yaml")
        with pytest.raises(ValidationError):
            Settings(max_weight=0)

    def test_frozen(self):
        with pytest.raises(ValidationError):
            get_settings().max_weight = 3


class TestLogging:
    def test_level_follows_settings(self):
        configure(log_level="DEBUG")
        setup_logging()
        assert logging.getLogger().level == logging.DEBUG

    def test_unknown_level_falls_back_to_warning(self):
        configure(log_level="chatty")
        setup_logging()
        assert logging.getLogger().level == logging.WARNING

    def test_console_output_on_stderr(self, capsys):
        configure(log_level="INFO")
        setup_logging()
        get_logger("tests", p=3).info("grid_rendered", max_weight=26)
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "grid_rendered" in captured.err
        assert "max_weight=26" in captured.err

    def test_adapter_binds_context(self, capsys):
        configure(log_level="INFO", log_format="json")
        setup_logging()

        class Runner:
            pass

        LoggerAdapter(Runner(), primes=[2]).bind(stage="tables").info("selftest_started")
        err = capsys.readouterr().err
        assert '"logger": "Runner"' in err
        assert '"stage": "tables"' in err
        assert '"primes": [2]' in err


class TestMetrics:
    def test_record_and_aggregate(self):
        collector = MetricsCollector()
        collector.record_suite("duality", checks=10, failures=0, duration_seconds=0.5)
        collector.record_suite("duality", checks=5, failures=1, duration_seconds=0.25)
        metric = collector.get_suite("duality")
        assert metric.checks == 15
        assert metric.failures == 1
        assert metric.runs == 2
        assert metric.total_duration_seconds == pytest.approx(0.75)
        assert not metric.passed
        assert metric.failure_rate == pytest.approx(100 / 15)

    def test_summary(self):
        collector = MetricsCollector()
        collector.record_suite("a", checks=3, failures=0, duration_seconds=0.1)
        collector.record_suite("b", checks=4, failures=2, duration_seconds=0.2)
        summary = collector.summary()
        assert summary["suites"] == 2
        assert summary["passed"] == 1
        assert summary["failed"] == 1
        assert summary["checks"] == 7
        assert summary["failures"] == 2
        collector.reset()
        assert collector.summary()["suites"] == 0
        assert collector.get_suite("a") is None

    def test_track_suite(self):
        collector = MetricsCollector()
        with track_suite(collector, "band") as counters:
            counters["checks"] += 3
            counters["failures"] += 1
        metric = collector.get_suite("band")
        assert (metric.checks, metric.failures, metric.runs) == (3, 1, 1)
        assert metric.total_duration_seconds >= 0

    def test_track_suite_records_on_error(self):
        collector = MetricsCollector()
        with pytest.raises(RuntimeError), track_suite(collector, "broken") as counters:
            counters["checks"] += 1
            raise RuntimeError("boom")
        assert collector.get_suite("broken").checks == 1

    def test_empty_suite_rate(self):
        collector = MetricsCollector()
        collector.record_suite("empty", checks=0, failures=0, duration_seconds=0.0)
        assert collector.get_suite("empty").failure_rate == 0.0
