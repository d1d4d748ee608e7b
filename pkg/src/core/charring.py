"""
Exact character arithmetic for SL2.

A character is an integer Laurent polynomial in one variable x. The Weyl
character chi(r) = x^r + x^(r-2) + ... + x^(-r) is the character of both the
induced module and the Weyl module of highest weight r; chi(-1) is the zero
character, so formulas need no case split at the boundary.

Characters are stored as a trimmed dense int64 coefficient vector together
with the lowest exponent. Every operation is exact and guards the int64
range explicitly; nothing is ever converted to floating point.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, field_validator
from sympy import divisors

from src.core.errors import (
    AsymmetricCharacterError,
    CharacterOverflowError,
    InconsistencyError,
    NegativeMultiplicityError,
    WeightError,
)
from src.core.padic import require_nonnegative, require_prime
from src.utils.config import get_settings
from src.utils.logging import get_logger

logger = get_logger(__name__)

IntArray = npt.NDArray[np.int64]

MAX_EXPONENT = 2**24
_COEFFICIENT_BOUND = 2**61


class LaurentChar:
    """
    Immutable integer Laurent polynomial.

    The canonical form never carries a zero coefficient at either end of the
    stored vector; the zero character has an empty vector.
    """

    __slots__ = ("_coeffs", "_low")

    _low: int
    _coeffs: IntArray

    def __init__(self, coefficients: Mapping[int, int] | None = None) -> None:
        if not coefficients:
            self._assign(0, np.zeros(0, dtype=np.int64))
            return
        low, high = min(coefficients), max(coefficients)
        _check_exponents(low, high)
        dense = np.zeros(high - low + 1, dtype=np.int64)
        for exponent, value in coefficients.items():
            if abs(value) >= _COEFFICIENT_BOUND:
                raise CharacterOverflowError(f"coefficient {value} exceeds the int64 guard")
            dense[exponent - low] += value
        self._assign(low, dense)

    @classmethod
    def _wrap(cls, low: int, dense: IntArray) -> LaurentChar:
        obj = object.__new__(cls)
        obj._assign(low, dense)
        return obj

    def _assign(self, low: int, dense: IntArray) -> None:
        nonzero = np.flatnonzero(dense)
        if nonzero.size == 0:
            low, dense = 0, np.zeros(0, dtype=np.int64)
        else:
            first, last = int(nonzero[0]), int(nonzero[-1])
            low, dense = low + first, np.array(dense[first : last + 1], dtype=np.int64)
            _check_exponents(low, low + dense.size - 1)
        dense.setflags(write=False)
        object.__setattr__(self, "_low", low)
        object.__setattr__(self, "_coeffs", dense)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("LaurentChar is immutable")

    @classmethod
    def zero(cls) -> LaurentChar:
        return cls()

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> LaurentChar:
        return cls({exponent: coefficient})

    @property
    def low(self) -> int:
        """Lowest exponent with a nonzero coefficient (0 for the zero character)."""
        return self._low

    @property
    def high(self) -> int:
        """Highest exponent with a nonzero coefficient (-1 for the zero character)."""
        return self._low + self._coeffs.size - 1 if self._coeffs.size else -1

    @property
    def dense(self) -> IntArray:
        """Read-only coefficient vector starting at exponent `low`."""
        return self._coeffs

    @property
    def coefficients(self) -> dict[int, int]:
        """Sparse view: exponent -> nonzero coefficient."""
        return {
            self._low + int(i): int(self._coeffs[i]) for i in np.flatnonzero(self._coeffs)
        }

    def coefficient(self, exponent: int) -> int:
        index = exponent - self._low
        if 0 <= index < self._coeffs.size:
            return int(self._coeffs[index])
        return 0

    def terms(self) -> Iterator[tuple[int, int]]:
        """(exponent, coefficient) pairs in strictly decreasing exponent order."""
        for i in np.flatnonzero(self._coeffs)[::-1]:
            yield self._low + int(i), int(self._coeffs[i])

    @property
    def is_zero(self) -> bool:
        return self._coeffs.size == 0

    @property
    def is_symmetric(self) -> bool:
        """Invariance under x -> 1/x (the Weyl group symmetry)."""
        if self.is_zero:
            return True
        return self._low == -self.high and bool(np.array_equal(self._coeffs, self._coeffs[::-1]))

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = LaurentChar.monomial(0, other) if other else LaurentChar()
        if not isinstance(other, LaurentChar):
            return NotImplemented
        return self._low == other._low and bool(np.array_equal(self._coeffs, other._coeffs))

    def __hash__(self) -> int:
        # constants hash like the ints they compare equal to
        if self._coeffs.size == 0:
            return hash(0)
        if self._low == 0 and self._coeffs.size == 1:
            return hash(int(self._coeffs[0]))
        return hash((self._low, self._coeffs.tobytes()))

    def __neg__(self) -> LaurentChar:
        return LaurentChar._wrap(self._low, -self._coeffs)

    def __add__(self, other: LaurentChar) -> LaurentChar:
        if not isinstance(other, LaurentChar):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        _check_sum_bound(self._coeffs, other._coeffs)
        low = min(self._low, other._low)
        high = max(self.high, other.high)
        dense = np.zeros(high - low + 1, dtype=np.int64)
        dense[self._low - low : self.high - low + 1] += self._coeffs
        dense[other._low - low : other.high - low + 1] += other._coeffs
        return LaurentChar._wrap(low, dense)

    def __sub__(self, other: LaurentChar) -> LaurentChar:
        if not isinstance(other, LaurentChar):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: LaurentChar | int) -> LaurentChar:
        if isinstance(other, int) and not isinstance(other, bool):
            if abs(other) * _max_abs(self._coeffs) >= _COEFFICIENT_BOUND:
                raise CharacterOverflowError("scalar multiple exceeds the int64 guard")
            return LaurentChar._wrap(self._low, self._coeffs * other)
        if not isinstance(other, LaurentChar):
            return NotImplemented
        return multiply(self, other)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"LaurentChar({render_character(self)})"

    def __str__(self) -> str:
        return render_character(self)


@dataclass(frozen=True)
class NotDivisible:
    """Outcome of `exact_divide` when the divisor does not divide."""

    exponent: int
    reason: str


class WeylExpansion(BaseModel):
    """
    A character written in the basis of Weyl characters chi(m).

    Multiplicities are nonzero integers; genuine module characters have only
    positive ones.
    """

    model_config = ConfigDict(frozen=True)

    multiplicities: dict[int, int] = Field(default_factory=dict)

    @field_validator("multiplicities")
    @classmethod
    def _check_entries(cls, value: dict[int, int]) -> dict[int, int]:
        for weight, mult in value.items():
            if weight < 0:
                raise ValueError(f"Weyl weights are dominant, got {weight}")
            if mult == 0:
                raise ValueError(f"zero multiplicity stored for weight {weight}")
        return dict(sorted(value.items(), reverse=True))

    @property
    def is_nonnegative(self) -> bool:
        return all(mult > 0 for mult in self.multiplicities.values())

    @property
    def dimension(self) -> int:
        return sum(mult * (weight + 1) for weight, mult in self.multiplicities.items())

    @property
    def top_weight(self) -> int:
        return max(self.multiplicities, default=-1)

    def to_character(self) -> LaurentChar:
        return weyl_character(self.multiplicities)

    def __str__(self) -> str:
        return render_weyl(self.multiplicities)


def _max_abs(dense: IntArray) -> int:
    return int(np.abs(dense).max()) if dense.size else 0


def _check_exponents(low: int, high: int) -> None:
    if low < -MAX_EXPONENT or high > MAX_EXPONENT:
        raise CharacterOverflowError(
            f"exponent range [{low}, {high}] exceeds +/-{MAX_EXPONENT}"
        )


def _check_sum_bound(a: IntArray, b: IntArray) -> None:
    if _max_abs(a) + _max_abs(b) >= _COEFFICIENT_BOUND:
        raise CharacterOverflowError("sum of characters exceeds the int64 guard")


def _check_weight(r: int) -> None:
    if r < -1:
        raise WeightError(f"weights are >= -1, got {r}")
    limit = get_settings().max_weight
    if r > limit:
        raise WeightError(f"weight {r} exceeds the supported maximum {limit}")


def chi(r: int) -> LaurentChar:
    """
    Weyl character chi(r) = sum of x^(r - 2i) for i = 0..r.

    Args:
        r: Weight, at least -1 (chi(-1) is the zero character)

    Raises:
        WeightError: r < -1 or r above the configured maximum
    """
    _check_weight(r)
    return _chi(r)


@lru_cache(maxsize=4096)
def _chi(r: int) -> LaurentChar:
    if r == -1:
        return LaurentChar()
    dense = np.zeros(2 * r + 1, dtype=np.int64)
    dense[::2] = 1
    return LaurentChar._wrap(-r, dense)


def multiply(a: LaurentChar, b: LaurentChar) -> LaurentChar:
    """Exact product of two characters (convolution of coefficient vectors)."""
    if a.is_zero or b.is_zero:
        return LaurentChar()
    abs_a, abs_b = np.abs(a.dense), np.abs(b.dense)
    bound = min(
        float(abs_a.max()) * float(abs_b.sum(dtype=np.float64)),
        float(abs_b.max()) * float(abs_a.sum(dtype=np.float64)),
    )
    if bound >= _COEFFICIENT_BOUND:
        raise CharacterOverflowError("product coefficients exceed the int64 guard")
    _check_exponents(a.low + b.low, a.high + b.high)
    return LaurentChar._wrap(a.low + b.low, np.convolve(a.dense, b.dense))


def dimension(c: LaurentChar) -> int:
    """Value of the character at x = 1."""
    return int(c.dense.sum())


def clebsch_gordan(r: int, s: int) -> list[int]:
    """
    Weights of the Weyl characters in chi(r) * chi(s), for r >= s >= 0.

    Returns:
        [r + s, r + s - 2, ..., r - s]
    """
    require_nonnegative(r, s)
    if r < s:
        raise ValueError(f"clebsch_gordan expects r >= s, got r={r}, s={s}; swap first")
    return list(range(r + s, r - s - 1, -2))


def weyl_character(multiplicities: Mapping[int, int]) -> LaurentChar:
    """
    Character sum(mult(m) * chi(m)).

    The coefficient of x^e (e >= 0) is the sum of mult(m) over m >= e with
    m = e mod 2, which is a reversed cumulative sum along each parity class.
    Terms of weight -1 contribute chi(-1) = 0.
    """
    for weight in multiplicities:
        _check_weight(weight)
    items = [(m, k) for m, k in multiplicities.items() if k and m >= 0]
    if not items:
        return LaurentChar()
    top = max(m for m, _ in items)
    mults = np.zeros(top + 1, dtype=np.int64)
    for weight, mult in items:
        mults[weight] += mult
    if float(np.abs(mults).sum(dtype=np.float64)) >= _COEFFICIENT_BOUND:
        raise CharacterOverflowError("Weyl multiplicities exceed the int64 guard")
    positive = np.zeros(top + 1, dtype=np.int64)
    for parity in (0, 1):
        column = mults[parity::2]
        positive[parity::2] = np.cumsum(column[::-1])[::-1]
    return LaurentChar._wrap(-top, np.concatenate((positive[:0:-1], positive)))


def weyl_expand(c: LaurentChar, nonnegative: bool = False) -> WeylExpansion:
    """
    Rewrite a symmetric character in the Weyl basis.

    Equivalent to repeatedly peeling the top exponent e with coefficient k and
    subtracting k * chi(e): the multiplicity of chi(m) is c(m) - c(m + 2).

    Args:
        c: Character invariant under x -> 1/x
        nonnegative: Require every multiplicity to be positive

    Raises:
        AsymmetricCharacterError: c is not symmetric
        NegativeMultiplicityError: nonnegative was requested and the top-down
            peeling hits a negative multiplicity (reported at that weight)
    """
    if not c.is_symmetric:
        raise AsymmetricCharacterError(f"character is not symmetric: {render_character(c)}")
    if c.is_zero:
        return WeylExpansion()
    top = c.high
    positive = np.zeros(top + 3, dtype=np.int64)
    positive[: top + 1] = c.dense[top:]
    mults = positive[: top + 1] - positive[2 : top + 3]
    weights = np.flatnonzero(mults)[::-1]
    if nonnegative:
        negative = weights[mults[weights] < 0]
        if negative.size:
            weight = int(negative[0])
            raise NegativeMultiplicityError(weight, int(mults[weight]))
    return WeylExpansion(multiplicities={int(m): int(mults[m]) for m in weights})


def frobenius_twist(c: LaurentChar, p: int) -> LaurentChar:
    """Scale every exponent by p (character of the Frobenius twist)."""
    require_prime(p)
    if c.is_zero:
        return c
    _check_exponents(c.low * p, c.high * p)
    dense = np.zeros((c.dense.size - 1) * p + 1, dtype=np.int64)
    dense[::p] = c.dense
    return LaurentChar._wrap(c.low * p, dense)


def exact_divide(numerator: LaurentChar, divisor: LaurentChar) -> LaurentChar | NotDivisible:
    """
    Exact long division over the integers, working down from the top exponent.

    Args:
        numerator: Character to divide
        divisor: Nonzero character

    Returns:
        The quotient q with q * divisor == numerator, or NotDivisible

    Raises:
        ZeroDivisionError: divisor is zero
    """
    if divisor.is_zero:
        raise ZeroDivisionError("division by the zero character")
    if numerator.is_zero:
        return LaurentChar()

    remainder = numerator.dense.tolist()
    size = divisor.dense.size
    lead = int(divisor.dense[-1])
    support = [(j, int(v)) for j, v in enumerate(divisor.dense.tolist()) if v]
    q_size = len(remainder) - size + 1
    if q_size <= 0:
        return NotDivisible(exponent=numerator.high, reason="numerator span shorter than divisor")

    quotient = [0] * q_size
    for i in range(q_size - 1, -1, -1):
        top = remainder[i + size - 1]
        if not top:
            continue
        q, rest = divmod(top, lead)
        if rest:
            return NotDivisible(
                exponent=numerator.low + i + size - 1,
                reason=f"coefficient {top} not divisible by leading coefficient {lead}",
            )
        quotient[i] = q
        for j, v in support:
            remainder[i + j] -= q * v

    leftover = next((i for i in range(size - 2, -1, -1) if remainder[i]), None)
    if leftover is not None:
        return NotDivisible(exponent=numerator.low + leftover, reason="nonzero remainder")
    return LaurentChar._wrap(
        numerator.low - divisor.low, np.array(quotient, dtype=np.int64)
    )


def divides(divisor: LaurentChar, numerator: LaurentChar) -> bool:
    return isinstance(exact_divide(numerator, divisor), LaurentChar)


def cyclotomic_orders(r: int) -> frozenset[int]:
    """
    Orders of the roots of unity that are roots of chi(r).

    x^r * chi(r) = (x^(2r+2) - 1) / (x^2 - 1), so the roots are the
    (2r+2)-th roots of unity other than +1 and -1, all of them simple.
    """
    require_nonnegative(r)
    return frozenset(d for d in divisors(2 * r + 2) if d > 2)


def steinberg_divides_by_roots(p: int, r: int) -> bool:
    """chi(p-1) divides chi(r) iff every root of chi(p-1) is a root of chi(r)."""
    require_prime(p)
    return cyclotomic_orders(p - 1) <= cyclotomic_orders(r)


def steinberg_divides(p: int, r: int) -> bool:
    """
    Whether the Steinberg character chi(p-1) divides chi(r).

    Computed by exact long division and by the congruence p | r + 1.

    Raises:
        InconsistencyError: the two methods disagree
    """
    require_prime(p)
    require_nonnegative(r)
    by_division = divides(chi(p - 1), chi(r))
    by_congruence = (r + 1) % p == 0
    if by_division != by_congruence:
        logger.error(
            "steinberg_divisibility_mismatch",
            p=p,
            r=r,
            by_division=by_division,
            by_congruence=by_congruence,
        )
        raise InconsistencyError(
            f"chi({p - 1}) | chi({r}): division says {by_division}, "
            f"congruence says {by_congruence}"
        )
    return by_division


def jantzen_identity_check(p: int, t: int, v: int) -> bool:
    """
    Check chi(pt + v) = chi(v) chi(t)^F + chi(p - 2 - v) chi(t - 1)^F.

    Args:
        p: Prime
        t: Nonnegative integer
        v: Residue in [0, p - 2]

    Raises:
        ValueError: v outside [0, p - 2]
    """
    require_prime(p)
    require_nonnegative(t)
    if not 0 <= v <= p - 2:
        raise ValueError(f"v must lie in [0, {p - 2}], got {v}")
    lhs = chi(p * t + v)
    rhs = chi(v) * frobenius_twist(chi(t), p) + chi(p - 2 - v) * frobenius_twist(chi(t - 1), p)
    return lhs == rhs


def steinberg_twist_identity_check(p: int, t: int) -> bool:
    """Check chi(pt + p - 1) = chi(p - 1) * chi(t)^F."""
    require_prime(p)
    require_nonnegative(t)
    return chi(p * t + p - 1) == chi(p - 1) * frobenius_twist(chi(t), p)


def natural_tensor_identity_check(r: int) -> bool:
    """Check chi(r) chi(1) = chi(r - 1) + chi(r + 1)."""
    require_nonnegative(r)
    return chi(r) * chi(1) == chi(r - 1) + chi(r + 1)


def splits_with_natural(p: int, r: int) -> bool:
    """Whether 0 -> (r-1) -> (r) x E -> (r+1) -> 0 splits: p does not divide r + 1."""
    require_prime(p)
    require_nonnegative(r)
    return (r + 1) % p != 0


def _render_term(exponent: int, magnitude: int) -> str:
    if exponent == 0:
        return str(magnitude)
    power = "x" if exponent == 1 else f"x^{exponent}"
    return power if magnitude == 1 else f"{magnitude}{power}"


def render_character(c: LaurentChar) -> str:
    """Render as e.g. "x^5 + 2x + 2x^-1 + x^-5" (decreasing exponents)."""
    parts: list[str] = []
    for exponent, value in c.terms():
        term = _render_term(exponent, abs(value))
        if not parts:
            parts.append(term if value > 0 else f"-{term}")
        else:
            parts.append(f"{'+' if value > 0 else '-'} {term}")
    return " ".join(parts) if parts else "0"


def render_weyl(multiplicities: Mapping[int, int], symbol: str = "χ") -> str:
    """Render a Weyl-basis expansion as e.g. "χ(5) + 2χ(1)"."""
    parts: list[str] = []
    for weight, mult in sorted(multiplicities.items(), reverse=True):
        term = f"{symbol}({weight})" if abs(mult) == 1 else f"{abs(mult)}{symbol}({weight})"
        if not parts:
            parts.append(term if mult > 0 else f"-{term}")
        else:
            parts.append(f"{'+' if mult > 0 else '-'} {term}")
    return " ".join(parts) if parts else "0"
