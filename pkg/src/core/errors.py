"""
Exceptions raised by the character and decision engines.

Invalid input is a ValueError, as everywhere else in the codebase. Outcomes
that are mathematically normal (a character that is not divisible, a greedy
decomposition that breaks) are returned as values, never raised.
"""

from __future__ import annotations


class InvalidPrimeError(ValueError):
    """The characteristic is not a prime number."""

    def __init__(self, p: object):
        super().__init__(f"characteristic must be a prime, got {p!r}")
        self.p = p


class WeightError(ValueError):
    """A weight lies outside the supported range."""


class AsymmetricCharacterError(ValueError):
    """A character is not invariant under x -> 1/x."""


class NegativeMultiplicityError(ValueError):
    """A Weyl expansion that must be non-negative has a negative entry."""

    def __init__(self, weight: int, multiplicity: int):
        super().__init__(f"negative multiplicity {multiplicity} at weight {weight}")
        self.weight = weight
        self.multiplicity = multiplicity


class CharacterOverflowError(ArithmeticError):
    """An exponent or coefficient would leave the int64 range."""


class InconsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""
