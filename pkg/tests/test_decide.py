"""Tests for the explicit and recursive decision procedures."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from src.core.decide import (
    PairClass,
    Rule,
    TraceStep,
    Verdict,
    classify,
    explicit_tilting,
    is_tilting_explicit,
    is_tilting_recursive,
    necessary_not_tilting,
    recursive_rule,
    recursive_tilting,
    render_trace,
    replay_verdict,
    theorem_witness,
    tilting_grid,
)
from src.core.errors import InvalidPrimeError, WeightError
from src.core.padic import primitive_pair
from src.utils.config import configure
from tests.conftest import SWEEP_PRIMES, sweep_bound

primes = st.sampled_from([2, 3, 5, 7])
weights = st.integers(min_value=0, max_value=5000)


class TestExplicit:
    @pytest.mark.parametrize(
        ("p", "r", "s", "tilting"),
        [(2, 6, 3, True), (2, 4, 2, False), (3, 6, 1, False), (2, 7, 7, True)],
    )
    def test_examples(self, p, r, s, tilting):
        verdict = is_tilting_explicit(p, r, s)
        assert verdict.tilting is tilting
        assert verdict.method == "explicit"
        assert explicit_tilting(p, r, s) is tilting
        assert replay_verdict(verdict)

    def test_witness_case_two(self):
        verdict = is_tilting_explicit(2, 6, 3)
        primitive, decision = verdict.trace
        assert primitive.rule is Rule.PRIMITIVE
        assert primitive.witness == {"r_hat": 6, "s_hat": 3, "epsilon": 0, "m": 2}
        assert decision.rule is Rule.MAIN_THEOREM_CASE_2
        assert decision.witness == {"a": 0, "n": 2}
        assert decision.premises == (0,)

    def test_witness_on_diagonal(self):
        decision = is_tilting_explicit(2, 7, 7).trace[-1]
        assert decision.rule is Rule.MAIN_THEOREM_CASE_1
        assert decision.witness == {"a": 0, "n": 0}

    def test_not_tilting_has_no_witness(self):
        decision = is_tilting_explicit(2, 4, 2).trace[-1]
        assert decision.rule is Rule.MAIN_THEOREM_NEITHER
        assert decision.witness == {}

    @pytest.mark.parametrize(
        ("p", "x", "y", "expected"),
        [
            (2, 3, 6, (0, 2)),
            (3, 5, 8, (1, 1)),
            (3, 5, 9, None),
            (3, 6, 0, None),
            (5, 0, 4, (0, 0)),
            (5, 3, 4, (3, 0)),
            (5, 4, 0, (0, 1)),
            (5, 5, 0, None),
        ],
    )
    def test_theorem_witness(self, p, x, y, expected):
        assert theorem_witness(p, x, y) == expected

    def test_rendered_trace(self):
        assert render_trace(is_tilting_explicit(2, 6, 3)) == (
            "#0 primitive (6, 3) [r_hat=6 s_hat=3 epsilon=0 m=2]\n"
            "#1 main-theorem-case-2 (6, 3) <- #0 [a=0 n=2]: tilting"
        )

    def test_rejects_bad_input(self):
        with pytest.raises(InvalidPrimeError):
            is_tilting_explicit(4, 1, 1)
        with pytest.raises(WeightError):
            is_tilting_explicit(2, -1, 0)

    def test_respects_configured_maximum(self):
        configure(max_weight=10)
        assert explicit_tilting(2, 10, 3) is explicit_tilting(2, 3, 10)
        with pytest.raises(WeightError):
            explicit_tilting(2, 11, 0)


class TestRecursive:
    @pytest.mark.parametrize(
        ("p", "r", "s", "tilting", "rule"),
        [
            (2, 6, 3, True, Rule.LEMMA_ODD_PRIME_TILTINGS),
            (2, 4, 2, False, Rule.LEMMA_NOT_TILTING_2),
            (3, 5, 2, True, Rule.LEMMA_P_MINUS_1),
            (5, -1, 7, True, Rule.ZERO_MODULE),
            (5, 3, 4, True, Rule.RESTRICTED),
            (3, 4, 3, True, Rule.LEMMA_TENSOR_E),
            (2, 3, 2, True, Rule.DUALITY),
        ],
    )
    def test_examples(self, p, r, s, tilting, rule):
        verdict = is_tilting_recursive(p, r, s)
        assert verdict.tilting is tilting
        assert verdict.trace[-1].rule is rule
        assert (verdict.trace[-1].r, verdict.trace[-1].s) == (r, s)
        assert recursive_tilting(p, r, s) is tilting
        assert replay_verdict(verdict)

    def test_hand_unrolled_trace(self):
        verdict = is_tilting_recursive(2, 6, 3)
        steps = {(step.r, step.s): step for step in verdict.trace}
        assert steps[(6, 3)].rule is Rule.LEMMA_ODD_PRIME_TILTINGS
        assert [(verdict.trace[i].r, verdict.trace[i].s) for i in steps[(6, 3)].premises] == [
            (3, 1),
            (2, 1),
        ]
        assert steps[(3, 1)].rule is Rule.LEMMA_P_MINUS_1
        assert steps[(1, 0)].rule is Rule.RESTRICTED
        assert steps[(2, 1)].rule is Rule.LEMMA_ODD_PRIME_TILTINGS
        assert steps[(0, 0)].rule is Rule.RESTRICTED

    def test_shared_pairs_appear_once(self):
        verdict = is_tilting_recursive(3, 242, 80)
        pairs = [(step.r, step.s) for step in verdict.trace]
        assert len(pairs) == len(set(pairs))
        assert all(i < index for index, step in enumerate(verdict.trace) for i in step.premises)

    def test_zero_module_boundary(self):
        # t = 0 in the odd-prime rule needs the pair (-1, u)
        verdict = is_tilting_recursive(3, 1, 5)
        assert verdict.tilting
        assert any(step.rule is Rule.ZERO_MODULE for step in verdict.trace)

    def test_rejects_bad_input(self):
        with pytest.raises(WeightError):
            is_tilting_recursive(2, -2, 0)
        with pytest.raises(InvalidPrimeError):
            recursive_tilting(1, 0, 0)


class TestReplay:
    def test_tampered_witness_fails(self):
        verdict = is_tilting_explicit(2, 6, 3)
        tampered_step = verdict.trace[1].model_copy(update={"witness": {"a": 0, "n": 1}})
        tampered = Verdict(
            p=2, r=6, s=3, method="explicit", tilting=True, trace=(verdict.trace[0], tampered_step)
        )
        assert not replay_verdict(tampered)

    def test_wrong_rule_fails(self):
        step = TraceStep(rule=Rule.RESTRICTED, r=4, s=2, tilting=True)
        verdict = Verdict(p=2, r=4, s=2, method="recursive", tilting=True, trace=(step,))
        assert not replay_verdict(verdict)

    def test_wrong_pair_fails(self):
        verdict = is_tilting_recursive(2, 1, 0)
        moved = Verdict(p=2, r=0, s=1, method="recursive", tilting=True, trace=verdict.trace)
        assert not replay_verdict(moved)

    def test_forward_premise_fails(self):
        steps = (
            TraceStep(rule=Rule.LEMMA_P_MINUS_1, r=3, s=1, tilting=True, premises=(1,)),
            TraceStep(rule=Rule.RESTRICTED, r=1, s=0, tilting=True),
        )
        verdict = Verdict(p=2, r=1, s=0, method="recursive", tilting=True, trace=steps)
        assert not replay_verdict(verdict)

    def test_verdict_needs_trace(self):
        with pytest.raises(ValidationError):
            Verdict(p=2, r=0, s=0, method="recursive", tilting=True, trace=())

    def test_final_step_carries_verdict(self):
        step = TraceStep(rule=Rule.RESTRICTED, r=0, s=0, tilting=True)
        with pytest.raises(ValidationError):
            Verdict(p=2, r=0, s=0, method="recursive", tilting=False, trace=(step,))


class TestNecessaryCondition:
    @pytest.mark.parametrize(
        ("p", "r", "s", "expected"),
        [(2, 4, 2, True), (3, 4, 3, False), (3, 5, 3, False)],
    )
    def test_examples(self, p, r, s, expected):
        assert necessary_not_tilting(p, r, s) is expected


class TestClassify:
    @pytest.mark.parametrize(
        ("p", "r", "s", "expected"),
        [
            (2, 5, 4, PairClass(r0=1, s0=0, same_band=True)),
            (3, 6, 1, PairClass(r0=0, s0=1, same_band=False)),
            (5, 0, 0, PairClass(r0=0, s0=0, same_band=True)),
        ],
    )
    def test_examples(self, p, r, s, expected):
        assert classify(p, r, s) == expected

    @given(primes, weights, weights)
    def test_symmetric(self, p, r, s):
        assert classify(p, r, s).same_band == classify(p, s, r).same_band

    @given(primes, weights, weights)
    def test_band_is_quotient_off_the_top_residue(self, p, r, s):
        pair = classify(p, r, s)
        if pair.r0 != p - 1 and pair.s0 != p - 1:
            assert pair.same_band == (r // p == s // p)

    @given(primes, weights, weights)
    def test_same_band_is_tilting(self, p, r, s):
        if classify(p, r, s).same_band:
            assert explicit_tilting(p, r, s)

    @given(primes, weights, weights)
    def test_base_rules_follow_classification(self, p, r, s):
        pair = classify(p, r, s)
        off_top = pair.r0 != p - 1 and pair.s0 != p - 1
        assert necessary_not_tilting(p, r, s) is (off_top and not pair.same_band)
        if off_top and max(r, s) > p - 1:
            expected = Rule.LEMMA_TENSOR_E if pair.same_band else Rule.LEMMA_NOT_TILTING_2
            assert recursive_rule(p, r, s) is expected


class TestSweeps:
    """Exhaustive checks over 0 <= r, s <= min(p^4, 600)."""

    @pytest.mark.parametrize("p", SWEEP_PRIMES)
    def test_oracle_equivalence(self, p):
        bound = sweep_bound(p)
        grid = tilting_grid(p, bound)
        for r in range(bound + 1):
            for s in range(bound + 1):
                assert recursive_tilting(p, r, s) == grid[r, s], (p, r, s)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_grid_matches_scalar_decider(self, p):
        grid = tilting_grid(p, 60)
        expected = np.array(
            [[explicit_tilting(p, r, s) for s in range(61)] for r in range(61)], dtype=bool
        )
        assert np.array_equal(grid, expected)

    @pytest.mark.parametrize("p", SWEEP_PRIMES)
    def test_duality(self, p):
        grid = tilting_grid(p, sweep_bound(p))
        assert np.array_equal(grid, grid.T)

    @pytest.mark.parametrize("p", SWEEP_PRIMES)
    def test_near_diagonal(self, p):
        grid = tilting_grid(p, sweep_bound(p))
        assert grid.diagonal().all()
        assert grid.diagonal(1).all()
        assert grid.diagonal(-1).all()

    @pytest.mark.parametrize("p", SWEEP_PRIMES)
    def test_bands(self, p):
        bound = sweep_bound(p)
        grid = tilting_grid(p, bound)
        n = 0
        while n * p - 1 <= bound:
            low, high = max(n * p - 1, 0), min((n + 1) * p - 1, bound)
            assert grid[low : high + 1, low : high + 1].all(), (p, n)
            n += 1

    @pytest.mark.parametrize("p", SWEEP_PRIMES)
    def test_steinberg_pairs(self, p):
        grid = tilting_grid(p, 600)
        steinberg = [p**n - 1 for n in range(12) if p**n <= 600]
        for a in steinberg:
            for b in steinberg:
                assert grid[a, b], (p, a, b)
                assert recursive_tilting(p, a, b)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_primitive_invariance(self, p):
        bound = sweep_bound(p) if p < 5 else 200
        grid = tilting_grid(p, bound)
        for r in range(bound + 1):
            for s in range(bound + 1):
                pair = primitive_pair(p, r, s)
                assert grid[r, s] == grid[pair.r_hat, pair.s_hat], (p, r, s)

    @pytest.mark.parametrize("p", SWEEP_PRIMES)
    def test_necessary_condition_implies_not_tilting(self, p):
        bound = sweep_bound(p)
        grid = tilting_grid(p, bound)
        w = np.arange(bound + 1)
        off_top = w % p != p - 1
        flagged = off_top[:, None] & off_top[None, :] & ((w // p)[:, None] != (w // p)[None, :])
        assert not grid[flagged].any()
        for r, s in np.argwhere(flagged)[:: max(int(flagged.sum()) // 300, 1)].tolist():
            assert necessary_not_tilting(p, r, s)
            assert not recursive_tilting(p, r, s)

    @pytest.mark.parametrize("p", SWEEP_PRIMES)
    def test_propagation(self, p):
        """Tilting at some pt + v with v <= p - 2 forces every pt + v' and pt - 1."""
        bound = sweep_bound(p)
        grid = tilting_grid(p, bound)
        for t in range(bound // p + 1):
            base = p * t
            for s in range(bound + 1):
                lower = [base + v for v in range(p - 1) if base + v <= bound]
                if not any(grid[r, s] for r in lower):
                    continue
                forced = [base + v for v in range(p) if base + v <= bound]
                assert all(grid[r, s] for r in forced), (p, t, s)
                if t >= 1:
                    assert grid[base - 1, s], (p, t, s)
