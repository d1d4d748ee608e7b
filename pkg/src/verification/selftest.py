"""
Invariant suites for the decision procedures and the character engine.

Each suite is recorded through a MetricsCollector under its own name. The
deciders are injectable, which lets tests feed in a broken criterion as a
negative control.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt

from src.core.charring import (
    chi,
    clebsch_gordan,
    jantzen_identity_check,
    natural_tensor_identity_check,
    steinberg_divides,
    steinberg_divides_by_roots,
    steinberg_twist_identity_check,
    weyl_character,
)
from src.core.decide import (
    explicit_tilting,
    necessary_not_tilting,
    recursive_tilting,
    tilting_grid,
)
from src.core.errors import InconsistencyError
from src.core.padic import primitive_split, require_nonnegative, require_prime
from src.core.tiltchar import TiltingDecomposition, decompose_product
from src.utils.config import get_settings
from src.utils.logging import LoggerAdapter
from src.utils.metrics import MetricsCollector, SuiteMetric, track_suite

Decider = Callable[[int, int, int], bool]

# Largest weight for the quadratic character suites (Clebsch-Gordan, greedy).
CHARACTER_SUITE_LIMIT = 120


def sweep_bound(p: int) -> int:
    """Largest weight of the explicit/recursive equivalence sweep for p."""
    return min(p**4, get_settings().sweep_limit)


SUITES = (
    "oracle_equivalence",
    "grid_consistency",
    "duality",
    "near_diagonal",
    "band",
    "steinberg_pairs",
    "primitive_invariance",
    "necessary_condition",
    "propagation",
    "jantzen_identity",
    "steinberg_divisibility",
    "steinberg_twist",
    "natural_tensor",
    "clebsch_gordan",
    "greedy_consistency",
)


@dataclass(frozen=True)
class Counterexample:
    """First failing check of a run."""

    suite: str
    p: int | None
    detail: str

    def __str__(self) -> str:
        where = f" (p={self.p})" if self.p is not None else ""
        return f"{self.suite}{where}: {self.detail}"


@dataclass
class SelfTestReport:
    """Outcome of a selftest run."""

    primes: tuple[int, ...]
    max_weight: int
    suites: list[SuiteMetric] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    counterexample: Counterexample | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def render(self) -> str:
        lines = [
            f"{metric.suite}: {metric.checks - metric.failures}/{metric.checks} passed"
            for metric in self.suites
        ]
        lines.append(
            f"{self.summary.get('passed', 0)} suites passed, "
            f"{self.summary.get('failed', 0)} failed"
        )
        if self.counterexample is None:
            lines.append("all suites passed")
        else:
            lines.append(f"first counterexample: {self.counterexample}")
        return "\n".join(lines)


class SelfTestRunner:
    """
    Runs every invariant suite for the given primes over 0 <= r, s <= max_weight.

    Both deciders are evaluated once per pair into boolean tables; the
    decision suites then read those tables.
    """

    def __init__(
        self,
        primes: Sequence[int],
        max_weight: int,
        explicit: Decider = explicit_tilting,
        recursive: Decider = recursive_tilting,
    ):
        for p in primes:
            require_prime(p)
        require_nonnegative(max_weight)
        self.primes = tuple(primes)
        self.max_weight = max_weight
        self.explicit = explicit
        self.recursive = recursive
        self.collector = MetricsCollector()
        self.logger = LoggerAdapter(self, primes=list(self.primes), max_weight=max_weight)
        self._first: Counterexample | None = None

    def run(self) -> SelfTestReport:
        self.logger.info("selftest_started")
        for p in self.primes:
            self._run_prime(p)
        self._run_character_suites()

        metrics = [m for m in (self.collector.get_suite(name) for name in SUITES) if m]
        report = SelfTestReport(
            primes=self.primes,
            max_weight=self.max_weight,
            suites=metrics,
            summary=self.collector.summary(),
            counterexample=self._first,
        )
        self.logger.info(
            "selftest_finished",
            passed=report.passed,
            checks=report.summary["checks"],
            failures=report.summary["failures"],
        )
        return report

    def _fail(self, counters: dict[str, int], suite: str, p: int | None, detail: str) -> None:
        counters["failures"] += 1
        if self._first is None:
            self._first = Counterexample(suite=suite, p=p, detail=detail)
            self.logger.warning("suite_failed", suite=suite, p=p, detail=detail)

    def _table(self, decider: Decider, p: int) -> npt.NDArray[np.bool_]:
        size = self.max_weight + 1
        table = np.zeros((size, size), dtype=bool)
        for r in range(size):
            for s in range(size):
                table[r, s] = decider(p, r, s)
        return table

    # decision suites

    def _run_prime(self, p: int) -> None:
        explicit = self._table(self.explicit, p)
        recursive = self._table(self.recursive, p)
        tables = {"explicit": explicit, "recursive": recursive}
        size = self.max_weight + 1

        bound = min(sweep_bound(p), self.max_weight) + 1
        with track_suite(self.collector, "oracle_equivalence") as counters:
            disagreements = explicit[:bound, :bound] != recursive[:bound, :bound]
            for r, s in np.argwhere(disagreements).tolist():
                self._fail(
                    counters,
                    "oracle_equivalence",
                    p,
                    f"({r}, {s}): explicit={bool(explicit[r, s])} "
                    f"recursive={bool(recursive[r, s])}",
                )
            counters["checks"] += bound * bound

        with track_suite(self.collector, "grid_consistency") as counters:
            grid = tilting_grid(p, self.max_weight)
            for r, s in np.argwhere(grid != explicit).tolist():
                self._fail(
                    counters,
                    "grid_consistency",
                    p,
                    f"({r}, {s}): grid={bool(grid[r, s])} explicit={bool(explicit[r, s])}",
                )
            counters["checks"] += size * size

        with track_suite(self.collector, "duality") as counters:
            for name, table in tables.items():
                for r, s in np.argwhere(table != table.T).tolist():
                    if r < s:
                        self._fail(
                            counters, "duality", p, f"{name} ({r}, {s}) differs from ({s}, {r})"
                        )
                counters["checks"] += size * size

        self._expect_tilting(
            p,
            tables,
            "near_diagonal",
            ((r, s) for r in range(size) for s in range(max(r - 1, 0), min(r + 2, size))),
        )

        band_pairs = []
        band = 0
        while band * p - 1 <= self.max_weight:
            low, high = max(band * p - 1, 0), min((band + 1) * p - 1, self.max_weight)
            band_pairs.extend((r, s) for r in range(low, high + 1) for s in range(low, high + 1))
            band += 1
        self._expect_tilting(p, tables, "band", band_pairs)

        steinberg = []
        power = 1
        while power - 1 <= self.max_weight:
            steinberg.append(power - 1)
            power *= p
        self._expect_tilting(
            p, tables, "steinberg_pairs", ((r, s) for r in steinberg for s in steinberg)
        )

        with track_suite(self.collector, "primitive_invariance") as counters:
            for r in range(size):
                for s in range(size):
                    r_hat, s_hat, _, _ = primitive_split(p, r, s)
                    for name, table in tables.items():
                        counters["checks"] += 1
                        if table[r, s] != table[r_hat, s_hat]:
                            self._fail(
                                counters,
                                "primitive_invariance",
                                p,
                                f"{name} ({r}, {s}) differs from its primitive ({r_hat}, {s_hat})",
                            )

        with track_suite(self.collector, "necessary_condition") as counters:
            for r in range(size):
                for s in range(size):
                    if not necessary_not_tilting(p, r, s):
                        continue
                    for name, table in tables.items():
                        counters["checks"] += 1
                        if table[r, s]:
                            self._fail(
                                counters,
                                "necessary_condition",
                                p,
                                f"{name} declares ({r}, {s}) tilting",
                            )

        with track_suite(self.collector, "propagation") as counters:
            for name, table in tables.items():
                self._check_propagation(counters, p, name, table)

    def _expect_tilting(
        self,
        p: int,
        tables: dict[str, npt.NDArray[np.bool_]],
        suite: str,
        pairs: Any,
    ) -> None:
        with track_suite(self.collector, suite) as counters:
            for r, s in pairs:
                for name, table in tables.items():
                    counters["checks"] += 1
                    if not table[r, s]:
                        self._fail(counters, suite, p, f"{name} declares ({r}, {s}) not tilting")

    def _check_propagation(
        self, counters: dict[str, int], p: int, name: str, table: npt.NDArray[np.bool_]
    ) -> None:
        """Tilting at some pt + v, v <= p - 2, forces pt + v' for all v' and pt - 1."""
        size = self.max_weight + 1
        for t in range(size // p + 1):
            base = p * t
            for s in range(size):
                lower = [v for v in range(p - 1) if base + v < size]
                if not lower or not any(table[base + v, s] for v in lower):
                    continue
                forced = [base + v for v in range(p) if base + v < size]
                if t >= 1:
                    forced.append(base - 1)
                for r in forced:
                    counters["checks"] += 1
                    if not table[r, s]:
                        self._fail(
                            counters,
                            "propagation",
                            p,
                            f"{name}: ({r}, {s}) not tilting, though ({base} + v, {s}) "
                            f"is for some v <= {p - 2}",
                        )

    # character suites

    def _character_limit(self) -> int:
        return min(self.max_weight, CHARACTER_SUITE_LIMIT)

    def _run_character_suites(self) -> None:
        for p in self.primes:
            self._run_prime_characters(p)

        with track_suite(self.collector, "natural_tensor") as counters:
            for r in range(self.max_weight + 1):
                counters["checks"] += 1
                if not natural_tensor_identity_check(r):
                    self._fail(counters, "natural_tensor", None, f"chi({r}) chi(1)")

        limit = self._character_limit()
        with track_suite(self.collector, "clebsch_gordan") as counters:
            for r in range(limit + 1):
                for s in range(r + 1):
                    counters["checks"] += 1
                    expected = weyl_character({w: 1 for w in clebsch_gordan(r, s)})
                    if expected != chi(r) * chi(s):
                        self._fail(counters, "clebsch_gordan", None, f"chi({r}) chi({s})")

    def _run_prime_characters(self, p: int) -> None:
        with track_suite(self.collector, "jantzen_identity") as counters:
            for t in range(self.max_weight // p + 1):
                for v in range(p - 1):
                    counters["checks"] += 1
                    if not jantzen_identity_check(p, t, v):
                        self._fail(counters, "jantzen_identity", p, f"t={t} v={v}")

        with track_suite(self.collector, "steinberg_divisibility") as counters:
            for r in range(self.max_weight + 1):
                counters["checks"] += 1
                try:
                    by_division = steinberg_divides(p, r)
                except InconsistencyError as exc:
                    self._fail(counters, "steinberg_divisibility", p, str(exc))
                    continue
                if by_division != steinberg_divides_by_roots(p, r):
                    self._fail(
                        counters,
                        "steinberg_divisibility",
                        p,
                        f"chi({p - 1}) | chi({r}): roots disagree with division",
                    )

        with track_suite(self.collector, "steinberg_twist") as counters:
            for t in range(self.max_weight // p + 1):
                counters["checks"] += 1
                if not steinberg_twist_identity_check(p, t):
                    self._fail(counters, "steinberg_twist", p, f"t={t}")

        limit = self._character_limit()
        with track_suite(self.collector, "greedy_consistency") as counters:
            for r in range(limit + 1):
                for s in range(r + 1):
                    if not self.explicit(p, r, s):
                        continue
                    counters["checks"] += 1
                    result = decompose_product(p, r, s)
                    if not isinstance(result, TiltingDecomposition):
                        self._fail(
                            counters,
                            "greedy_consistency",
                            p,
                            f"({r}, {s}): negative multiplicity at weight {result.weight}",
                        )
                    elif result.to_character() != chi(r) * chi(s):
                        self._fail(
                            counters, "greedy_consistency", p, f"({r}, {s}): character mismatch"
                        )
                    elif result.dimension != (r + 1) * (s + 1):
                        self._fail(
                            counters,
                            "greedy_consistency",
                            p,
                            f"({r}, {s}): dimension {result.dimension} != {(r + 1) * (s + 1)}",
                        )


def run_selftest(
    primes: Sequence[int],
    max_weight: int,
    explicit: Decider = explicit_tilting,
    recursive: Decider = recursive_tilting,
) -> SelfTestReport:
    """
    Run all suites and return the report.

    Args:
        primes: Characteristics to sweep
        max_weight: Largest weight r, s of the decision suites
        explicit: Explicit decider, replaceable for negative controls
        recursive: Recursive decider, replaceable for negative controls

    Returns:
        SelfTestReport with per-suite counts and the first counterexample
    """
    return SelfTestRunner(primes, max_weight, explicit=explicit, recursive=recursive).run()
