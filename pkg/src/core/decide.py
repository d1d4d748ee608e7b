"""
Decision procedures: is the tensor product (r) x (s) of an induced and a Weyl module tilting?

Two independent procedures are provided:

- the explicit criterion on the primitive pair: (r_hat, s_hat) qualifies when
  r_hat = a p^n + p^n - 1 with 0 <= a <= p-2, n >= 0 and s_hat < p^(n+1), or
  the same with the roles swapped;
- the recursive procedure driven by the reduction lemmas (p-1 residues,
  odd-prime tiltings, duality) down to the restricted and band base cases.

Weight -1 stands for the zero module, which counts as tilting. Both
procedures return a Verdict whose trace can be replayed rule by rule.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Literal

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.errors import WeightError
from src.core.padic import primitive_split, require_nonnegative, require_prime
from src.utils.config import get_settings
from src.utils.logging import get_logger

logger = get_logger(__name__)

_RECURSION_CACHE_SIZE = 1 << 17


class Rule(str, Enum):
    """Rules a trace step may cite."""

    # recursive procedure
    ZERO_MODULE = "zero-module"
    RESTRICTED = "restricted-weights"
    LEMMA_P_MINUS_1 = "lemma-p-1"
    LEMMA_ODD_PRIME_TILTINGS = "lemma-odd-prime-tiltings"
    DUALITY = "duality"
    LEMMA_TENSOR_E = "lemma-tensorE"
    LEMMA_NOT_TILTING_2 = "lemma-notTilting2"

    # explicit criterion
    PRIMITIVE = "primitive"
    MAIN_THEOREM_CASE_1 = "main-theorem-case-1"
    MAIN_THEOREM_CASE_2 = "main-theorem-case-2"
    MAIN_THEOREM_NEITHER = "main-theorem-neither"


class TraceStep(BaseModel):
    """One rule application. `premises` index earlier steps of the same trace."""

    model_config = ConfigDict(frozen=True)

    rule: Rule
    r: int
    s: int
    tilting: bool | None = None
    premises: tuple[int, ...] = ()
    witness: dict[str, int] = Field(default_factory=dict)


class Verdict(BaseModel):
    """Answer of a decision procedure together with its derivation."""

    model_config = ConfigDict(frozen=True)

    p: int
    r: int
    s: int
    method: Literal["explicit", "recursive"]
    tilting: bool
    trace: tuple[TraceStep, ...]

    @model_validator(mode="after")
    def _final_step_decides(self) -> Verdict:
        if not self.trace:
            raise ValueError("a verdict needs a nonempty trace")
        if self.trace[-1].tilting is not self.tilting:
            raise ValueError("the final trace step must carry the verdict")
        return self


class PairClass(BaseModel):
    """Residues mod p and band membership of a pair."""

    model_config = ConfigDict(frozen=True)

    r0: int
    s0: int
    same_band: bool


def _check_weights(lowest: int, *weights: int) -> None:
    limit = get_settings().max_weight
    for w in weights:
        if w < lowest or w > limit:
            raise WeightError(f"weight {w} outside [{lowest}, {limit}]")


def _bands(p: int, r: int) -> set[int]:
    """Indices n with np - 1 <= r <= (n+1)p - 1."""
    n = (r + 1) // p
    return {n, n - 1} if (r + 1) % p == 0 and n >= 1 else {n}


def classify(p: int, r: int, s: int) -> PairClass:
    """
    Residues mod p and whether r, s share a band {np-1, ..., (n+1)p-1}.

    Args:
        p: Prime
        r: First weight
        s: Second weight
    """
    require_prime(p)
    require_nonnegative(r, s)
    return _pair_class(p, r, s)


@lru_cache(maxsize=_RECURSION_CACHE_SIZE)
def _pair_class(p: int, r: int, s: int) -> PairClass:
    return PairClass(r0=r % p, s0=s % p, same_band=bool(_bands(p, r) & _bands(p, s)))


def necessary_not_tilting(p: int, r: int, s: int) -> bool:
    """
    Both weights avoid the residue p-1 and the pair shares no band.

    When true the product is not tilting.
    """
    require_prime(p)
    require_nonnegative(r, s)
    pair = _pair_class(p, r, s)
    return pair.r0 != p - 1 and pair.s0 != p - 1 and not pair.same_band


# explicit criterion


def theorem_witness(p: int, x: int, y: int) -> tuple[int, int] | None:
    """
    (a, n) with x = a p^n + p^n - 1, 0 <= a <= p-2 and y < p^(n+1), if any.

    x + 1 must be c p^n with 1 <= c <= p-1, which fixes n as the p-adic
    valuation of x + 1.
    """
    value, n, power = x + 1, 0, 1
    while value % p == 0:
        value //= p
        n += 1
        power *= p
    if value > p - 1 or y >= power * p:
        return None
    return value - 1, n


def explicit_tilting(p: int, r: int, s: int) -> bool:
    """Trace-free explicit criterion."""
    require_prime(p)
    _check_weights(0, r, s)
    r_hat, s_hat, _, _ = primitive_split(p, r, s)
    return (
        theorem_witness(p, r_hat, s_hat) is not None
        or theorem_witness(p, s_hat, r_hat) is not None
    )


def is_tilting_explicit(p: int, r: int, s: int) -> Verdict:
    """
    Decide tiltingness from the base-p digits of the primitive pair.

    Args:
        p: Prime characteristic
        r: Highest weight of the induced module
        s: Highest weight of the Weyl module

    Returns:
        Verdict whose trace records the primitive and the witness (a, n)
    """
    require_prime(p)
    _check_weights(0, r, s)
    r_hat, s_hat, eps, m = primitive_split(p, r, s)
    steps = [
        TraceStep(
            rule=Rule.PRIMITIVE,
            r=r,
            s=s,
            witness={"r_hat": r_hat, "s_hat": s_hat, "epsilon": eps, "m": m},
        )
    ]
    witness = theorem_witness(p, r_hat, s_hat)
    if witness is not None:
        rule, tilting = Rule.MAIN_THEOREM_CASE_1, True
    else:
        witness = theorem_witness(p, s_hat, r_hat)
        rule, tilting = (
            (Rule.MAIN_THEOREM_CASE_2, True) if witness else (Rule.MAIN_THEOREM_NEITHER, False)
        )
    steps.append(
        TraceStep(
            rule=rule,
            r=r,
            s=s,
            tilting=tilting,
            premises=(0,),
            witness={"a": witness[0], "n": witness[1]} if witness else {},
        )
    )
    logger.debug("verdict_computed", method="explicit", p=p, r=r, s=s, tilting=tilting)
    return Verdict(p=p, r=r, s=s, method="explicit", tilting=tilting, trace=tuple(steps))


# recursive procedure


def recursive_rule(p: int, r: int, s: int) -> Rule:
    """The rule the recursive procedure applies to (r, s), r, s >= -1."""
    if r == -1 or s == -1:
        return Rule.ZERO_MODULE
    if r <= p - 1 and s <= p - 1:
        return Rule.RESTRICTED
    pair = _pair_class(p, r, s)
    r_top = pair.r0 == p - 1
    s_top = pair.s0 == p - 1
    if r_top and s_top:
        return Rule.LEMMA_P_MINUS_1
    if s_top:
        return Rule.LEMMA_ODD_PRIME_TILTINGS
    if r_top:
        return Rule.DUALITY
    return Rule.LEMMA_TENSOR_E if pair.same_band else Rule.LEMMA_NOT_TILTING_2


def recursive_premises(p: int, rule: Rule, r: int, s: int) -> tuple[tuple[int, int], ...]:
    """Pairs whose verdicts the rule combines."""
    if rule is Rule.LEMMA_P_MINUS_1:
        return ((r // p, s // p),)
    if rule is Rule.LEMMA_ODD_PRIME_TILTINGS:
        t, u = r // p, s // p
        return ((t, u), (t - 1, u))
    if rule is Rule.DUALITY:
        return ((s, r),)
    return ()


_CONSTANT_RULES = {
    Rule.ZERO_MODULE: True,
    Rule.RESTRICTED: True,
    Rule.LEMMA_TENSOR_E: True,
    Rule.LEMMA_NOT_TILTING_2: False,
}


@lru_cache(maxsize=_RECURSION_CACHE_SIZE)
def _recursive(p: int, r: int, s: int) -> bool:
    rule = recursive_rule(p, r, s)
    if rule in _CONSTANT_RULES:
        return _CONSTANT_RULES[rule]
    return all(_recursive(p, t, u) for t, u in recursive_premises(p, rule, r, s))


def recursive_tilting(p: int, r: int, s: int) -> bool:
    """Trace-free recursive procedure (memoised)."""
    require_prime(p)
    _check_weights(-1, r, s)
    return _recursive(p, r, s)


def is_tilting_recursive(p: int, r: int, s: int) -> Verdict:
    """
    Decide tiltingness by recursion on the base-p digits.

    Every step strictly shrinks the weights (or swaps them once), so the
    recursion terminates. Shared sub-pairs appear once in the trace.

    Args:
        p: Prime characteristic
        r: Weight >= -1 of the induced module
        s: Weight >= -1 of the Weyl module
    """
    require_prime(p)
    _check_weights(-1, r, s)
    steps: list[TraceStep] = []
    seen: dict[tuple[int, int], int] = {}

    def build(a: int, b: int) -> int:
        if (a, b) in seen:
            return seen[(a, b)]
        rule = recursive_rule(p, a, b)
        premises = tuple(build(t, u) for t, u in recursive_premises(p, rule, a, b))
        if rule in _CONSTANT_RULES:
            tilting = _CONSTANT_RULES[rule]
        else:
            tilting = all(steps[i].tilting for i in premises)
        steps.append(TraceStep(rule=rule, r=a, s=b, tilting=tilting, premises=premises))
        seen[(a, b)] = len(steps) - 1
        return seen[(a, b)]

    build(r, s)
    tilting = bool(steps[-1].tilting)
    logger.debug("verdict_computed", method="recursive", p=p, r=r, s=s, tilting=tilting)
    return Verdict(p=p, r=r, s=s, method="recursive", tilting=tilting, trace=tuple(steps))


# replay


def _replay_step(p: int, steps: tuple[TraceStep, ...], index: int) -> bool:
    step = steps[index]
    if any(i >= index for i in step.premises):
        return False
    premises = [steps[i] for i in step.premises]

    if step.rule is Rule.PRIMITIVE:
        r_hat, s_hat, eps, m = primitive_split(p, step.r, step.s)
        return step.witness == {"r_hat": r_hat, "s_hat": s_hat, "epsilon": eps, "m": m}

    if step.rule in (Rule.MAIN_THEOREM_CASE_1, Rule.MAIN_THEOREM_CASE_2, Rule.MAIN_THEOREM_NEITHER):
        if len(premises) != 1 or premises[0].rule is not Rule.PRIMITIVE:
            return False
        r_hat, s_hat = premises[0].witness["r_hat"], premises[0].witness["s_hat"]
        if step.rule is Rule.MAIN_THEOREM_NEITHER:
            return step.tilting is False and (
                theorem_witness(p, r_hat, s_hat) is None
                and theorem_witness(p, s_hat, r_hat) is None
            )
        x, y = (r_hat, s_hat) if step.rule is Rule.MAIN_THEOREM_CASE_1 else (s_hat, r_hat)
        a, n = step.witness.get("a", -1), step.witness.get("n", -1)
        return (
            step.tilting is True
            and 0 <= a <= p - 2
            and n >= 0
            and x == a * p**n + p**n - 1
            and y < p ** (n + 1)
        )

    if recursive_rule(p, step.r, step.s) is not step.rule:
        return False
    expected_pairs = recursive_premises(p, step.rule, step.r, step.s)
    if tuple((q.r, q.s) for q in premises) != expected_pairs:
        return False
    if step.rule in _CONSTANT_RULES:
        return step.tilting is _CONSTANT_RULES[step.rule]
    return step.tilting is all(q.tilting for q in premises)


def replay_verdict(verdict: Verdict) -> bool:
    """
    Re-check every step of a trace against the rule it cites.

    Returns:
        True when each step is a valid application of its rule, the final
        step concerns the verdict's pair, and it carries the verdict
    """
    steps = verdict.trace
    final = steps[-1]
    if (final.r, final.s) != (verdict.r, verdict.s) or final.tilting is not verdict.tilting:
        return False
    return all(_replay_step(verdict.p, steps, i) for i in range(len(steps)))


def render_trace(verdict: Verdict) -> str:
    """Human-readable derivation, one step per line."""
    lines = []
    for index, step in enumerate(verdict.trace):
        line = f"#{index} {step.rule.value} ({step.r}, {step.s})"
        if step.premises:
            line += " <- " + ", ".join(f"#{i}" for i in step.premises)
        if step.witness:
            line += " [" + " ".join(f"{k}={v}" for k, v in step.witness.items()) + "]"
        if step.tilting is not None:
            line += ": " + ("tilting" if step.tilting else "not tilting")
        lines.append(line)
    return "\n".join(lines)


# vectorised explicit criterion


def _criterion_rows(
    p: int, x: npt.NDArray[np.int64], y: npt.NDArray[np.int64], powers: list[int]
) -> npt.NDArray[np.bool_]:
    value = x + 1
    hit = np.zeros(x.shape, dtype=bool)
    for power in powers:
        hit |= (value % power == 0) & (value // power <= p - 1) & (y < power * p)
    return hit


def tilting_grid(p: int, max_weight: int) -> npt.NDArray[np.bool_]:
    """
    Explicit criterion for every pair 0 <= r, s <= max_weight.

    Returns:
        Boolean matrix indexed [r, s]
    """
    require_prime(p)
    require_nonnegative(max_weight)
    size = max_weight + 1
    powers = [1]
    while powers[-1] <= max_weight + 1:
        powers.append(powers[-1] * p)

    s = np.arange(size, dtype=np.int64)
    grid = np.zeros((size, size), dtype=bool)
    for r in range(size):
        shared = np.zeros(size, dtype=np.int64)
        found = np.zeros(size, dtype=bool)
        for power in powers:
            quotient = r // power
            newly = ~found & (s // power == quotient)
            shared[newly] = quotient * power
            found |= newly
        r_hat = r - shared
        s_hat = s - shared
        grid[r] = _criterion_rows(p, r_hat, s_hat, powers) | _criterion_rows(
            p, s_hat, r_hat, powers
        )
    logger.debug("tilting_grid_computed", p=p, max_weight=max_weight)
    return grid
