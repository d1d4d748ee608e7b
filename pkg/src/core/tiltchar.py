"""
Characters of the indecomposable tilting modules T(m) for SL2.

    0 <= m <= p-1            Ch T(m) = chi(m)
    m = p-1+t, 1 <= t <= p-1 Ch T(m) = chi(p-1+t) + chi(p-1-t)
    m = p-1+t+pn, n >= 1     Ch T(m) = Ch T(p-1+t) * (Ch T(n))^F,  0 <= t <= p-1

Tensor-product characters are split into tilting characters by peeling the
top weight, which is possible because Ch T(m) = chi(m) + lower terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.core.charring import (
    LaurentChar,
    chi,
    frobenius_twist,
    render_weyl,
    weyl_character,
    weyl_expand,
)
from src.core.padic import require_nonnegative, require_prime
from src.utils.logging import get_logger

logger = get_logger(__name__)


class TiltingDecomposition(BaseModel):
    """Multiset of indecomposable tilting characters, highest weight -> multiplicity."""

    model_config = ConfigDict(frozen=True)

    p: int
    multiplicities: dict[int, int] = Field(default_factory=dict)

    @field_validator("multiplicities")
    @classmethod
    def _check_entries(cls, value: dict[int, int]) -> dict[int, int]:
        for weight, mult in value.items():
            if weight < 0 or mult <= 0:
                raise ValueError(f"invalid tilting summand T({weight}) x {mult}")
        return dict(sorted(value.items(), reverse=True))

    def weyl_multiplicities(self) -> dict[int, int]:
        """Weyl-basis expansion of the sum of the tilting characters."""
        total: dict[int, int] = {}
        for weight, mult in self.multiplicities.items():
            for m, k in tilting_weyl_expansion(self.p, weight).items():
                total[m] = total.get(m, 0) + mult * k
        return {m: k for m, k in total.items() if k}

    def to_character(self) -> LaurentChar:
        return weyl_character(self.weyl_multiplicities())

    @property
    def dimension(self) -> int:
        return sum(
            mult * tilting_dimension(self.p, weight)
            for weight, mult in self.multiplicities.items()
        )

    def as_json_dict(self) -> dict[str, int]:
        """String keys, highest weight first."""
        return {str(weight): mult for weight, mult in self.multiplicities.items()}

    def __str__(self) -> str:
        return render_weyl(self.multiplicities, symbol="T")


@dataclass(frozen=True)
class DecompositionFailure:
    """The greedy peeling met a negative Weyl multiplicity at `weight`."""

    weight: int
    multiplicity: int


def tilting_char(p: int, m: int) -> LaurentChar:
    """
    Character of the indecomposable tilting module T(m).

    Args:
        p: Prime characteristic
        m: Highest weight, m >= 0
    """
    require_prime(p)
    require_nonnegative(m)
    return _tilting_char(p, m)


@lru_cache(maxsize=8192)
def _tilting_char(p: int, m: int) -> LaurentChar:
    if m <= p - 1:
        return chi(m)
    if m <= 2 * p - 2:
        t = m - (p - 1)
        return chi(p - 1 + t) + chi(p - 1 - t)
    n, t = divmod(m - (p - 1), p)
    return _tilting_char(p, p - 1 + t) * frobenius_twist(_tilting_char(p, n), p)


@lru_cache(maxsize=8192)
def _tilting_weyl(p: int, m: int) -> tuple[tuple[int, int], ...]:
    expansion = weyl_expand(_tilting_char(p, m), nonnegative=True)
    return tuple(expansion.multiplicities.items())


def tilting_weyl_expansion(p: int, m: int) -> dict[int, int]:
    """Weyl-basis expansion of Ch T(m); contains chi(m) exactly once."""
    require_prime(p)
    require_nonnegative(m)
    return dict(_tilting_weyl(p, m))


def tilting_dimension(p: int, m: int) -> int:
    return sum(k * (w + 1) for w, k in tilting_weyl_expansion(p, m).items())


def greedy_decompose(p: int, c: LaurentChar) -> TiltingDecomposition | DecompositionFailure:
    """
    Split a character into indecomposable tilting characters.

    Repeatedly take the top surviving weight m with Weyl multiplicity k > 0
    and subtract k * Ch T(m). Success is a consistency statement about the
    character only; it does not prove that a module is tilting.

    Args:
        p: Prime characteristic
        c: Symmetric character with a non-negative Weyl expansion

    Returns:
        TiltingDecomposition, or DecompositionFailure at the first weight whose
        multiplicity turned negative

    Raises:
        AsymmetricCharacterError: c is not symmetric
        NegativeMultiplicityError: c itself is not a non-negative sum of chi(m)
    """
    require_prime(p)
    expansion = weyl_expand(c, nonnegative=True)
    top = expansion.top_weight
    if top < 0:
        return TiltingDecomposition(p=p)

    remaining = np.zeros(top + 1, dtype=np.int64)
    for weight, mult in expansion.multiplicities.items():
        remaining[weight] = mult

    result: dict[int, int] = {}
    for m in range(top, -1, -1):
        k = int(remaining[m])
        if k == 0:
            continue
        if k < 0:
            logger.debug("greedy_decomposition_failed", p=p, weight=m, multiplicity=k)
            return DecompositionFailure(weight=m, multiplicity=k)
        result[m] = k
        for weight, mult in _tilting_weyl(p, m):
            remaining[weight] -= k * mult
    return TiltingDecomposition(p=p, multiplicities=result)


def decompose_product(p: int, r: int, s: int) -> TiltingDecomposition | DecompositionFailure:
    """Greedy decomposition of chi(r) * chi(s)."""
    require_nonnegative(r, s)
    return greedy_decompose(p, chi(r) * chi(s))
