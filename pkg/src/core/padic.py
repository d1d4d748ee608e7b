"""
Base-p digit arithmetic.

Digit expansions are stored least-significant first, so index i of a digit
sequence is the exponent of p it multiplies. The primitive of a pair (r, s)
is obtained by deleting the base-p digits the two numbers share above the
highest position where they differ; the deleted part is epsilon.
"""

from __future__ import annotations

from collections.abc import Sequence
from functools import lru_cache

from pydantic import BaseModel, ConfigDict, Field, model_validator
from sympy import isprime

from src.core.errors import InvalidPrimeError, WeightError


@lru_cache(maxsize=256)
def _is_prime(p: int) -> bool:
    return bool(isprime(p))


def require_prime(p: int) -> int:
    """
    Validate a characteristic.

    Raises:
        InvalidPrimeError: p is not a prime integer
    """
    if isinstance(p, bool) or not isinstance(p, int) or not _is_prime(p):
        raise InvalidPrimeError(p)
    return p


def require_nonnegative(*values: int) -> None:
    for value in values:
        if value < 0:
            raise WeightError(f"expected a nonnegative integer, got {value}")


class Digits(BaseModel):
    """Canonical base-p expansion of a nonnegative integer."""

    model_config = ConfigDict(frozen=True)

    base: int = Field(ge=2)
    digits: tuple[int, ...] = ()

    @model_validator(mode="after")
    def _check_canonical(self) -> Digits:
        require_prime(self.base)
        if any(d < 0 or d >= self.base for d in self.digits):
            raise ValueError(f"digits must lie in [0, {self.base - 1}]: {self.digits}")
        if self.digits and self.digits[-1] == 0:
            raise ValueError("canonical digit sequences carry no trailing zeros")
        return self

    @property
    def value(self) -> int:
        return from_digits(self.base, self.digits)

    def digit(self, index: int) -> int:
        """Digit at position ``index``; positions past the top are zero."""
        return self.digits[index] if 0 <= index < len(self.digits) else 0

    def __len__(self) -> int:
        return len(self.digits)


class PrimitivePair(BaseModel):
    """
    The primitive (r_hat, s_hat) of a pair together with epsilon and m.

    ``m`` is the index of the highest differing digit, -1 when r = s. In that
    case the primitive is (0, 0) and epsilon = r.
    """

    model_config = ConfigDict(frozen=True)

    r_hat: int = Field(ge=0)
    s_hat: int = Field(ge=0)
    epsilon: int = Field(ge=0)
    m: int = Field(ge=-1)

    @property
    def r(self) -> int:
        return self.r_hat + self.epsilon

    @property
    def s(self) -> int:
        return self.s_hat + self.epsilon

    def swapped(self) -> PrimitivePair:
        return PrimitivePair(r_hat=self.s_hat, s_hat=self.r_hat, epsilon=self.epsilon, m=self.m)


def digits(p: int, n: int) -> Digits:
    """
    Base-p expansion of n, least-significant digit first.

    Args:
        p: Prime base
        n: Nonnegative integer

    Returns:
        Canonical digit sequence (empty for n = 0)
    """
    require_prime(p)
    require_nonnegative(n)
    out: list[int] = []
    while n:
        n, d = divmod(n, p)
        out.append(d)
    return Digits(base=p, digits=tuple(out))


def from_digits(p: int, seq: Sequence[int]) -> int:
    """Positional reconstruction sum(d_i * p**i)."""
    value = 0
    for d in reversed(seq):
        value = value * p + d
    return value


def len_p(p: int, n: int) -> int:
    """p-length of n: index of the top nonzero digit, -1 for n = 0."""
    require_prime(p)
    require_nonnegative(n)
    length = -1
    while n:
        n //= p
        length += 1
    return length


def primitive_split(p: int, r: int, s: int) -> tuple[int, int, int, int]:
    """
    Unvalidated core of `primitive_pair`.

    Returns:
        (r_hat, s_hat, epsilon, m)
    """
    if r == s:
        return 0, 0, r, -1
    k = 0
    power = 1
    while r // power != s // power:
        power *= p
        k += 1
    eps = (r // power) * power
    return r - eps, s - eps, eps, k - 1


def primitive_pair(p: int, r: int, s: int) -> PrimitivePair:
    """
    Primitive of (r, s) in base p.

    Args:
        p: Prime base
        r: First weight
        s: Second weight

    Returns:
        PrimitivePair with r = r_hat + epsilon and s = s_hat + epsilon
    """
    require_prime(p)
    require_nonnegative(r, s)
    r_hat, s_hat, eps, m = primitive_split(p, r, s)
    return PrimitivePair(r_hat=r_hat, s_hat=s_hat, epsilon=eps, m=m)


def epsilon(p: int, r: int, s: int) -> int:
    """The shared high part r - r_hat = s - s_hat."""
    return primitive_pair(p, r, s).epsilon


def is_primitive(p: int, r: int, s: int) -> bool:
    """True when (r, s) equals its own primitive."""
    require_prime(p)
    require_nonnegative(r, s)
    return primitive_split(p, r, s)[:2] == (r, s)
