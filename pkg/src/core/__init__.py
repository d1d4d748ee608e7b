"""Digit arithmetic, character ring, tilting characters and the decision procedures."""

from src.core.charring import LaurentChar, WeylExpansion, chi, weyl_expand
from src.core.decide import Verdict, is_tilting_explicit, is_tilting_recursive
from src.core.padic import Digits, PrimitivePair, digits, primitive_pair
from src.core.tiltchar import TiltingDecomposition, greedy_decompose, tilting_char

__all__ = [
    "LaurentChar",
    "WeylExpansion",
    "chi",
    "weyl_expand",
    "Verdict",
    "is_tilting_explicit",
    "is_tilting_recursive",
    "Digits",
    "PrimitivePair",
    "digits",
    "primitive_pair",
    "TiltingDecomposition",
    "greedy_decompose",
    "tilting_char",
]
