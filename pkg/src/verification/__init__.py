"""Invariant suites run by the selftest command."""

from src.verification.selftest import Counterexample, SelfTestReport, SelfTestRunner, run_selftest

__all__ = ["Counterexample", "SelfTestReport", "SelfTestRunner", "run_selftest"]
