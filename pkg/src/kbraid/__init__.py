"""Free k-braid groups, k-biquandle colorings and the virtual surface singular braid monoid."""

__version__ = "0.1.0"

from .biquandle import (
    FiniteKBiquandle,
    FlatBiquandle,
    Involution,
    check_axioms,
    conditional_involution,
    flat_check,
    flat_derived3,
    gaussian,
    involution_kbiquandle,
    is_isomorphic,
    multiplicity_vector,
)
from .coloring import binding_number, count_colorings, fundamental_presentation, hom_count, propagate
from .enumeration import classify, enumerate_kbiquandles
from .perm import Permutation
from .vssb import act, is_pure, parse_vssb, phi, relations, rho, vssb_invariant
from .words import FreeKBraidWord, equal_bounded, free_reduce, neighbors, parity_vector, parse_word, realize

__all__ = [
    "FiniteKBiquandle", "FlatBiquandle", "FreeKBraidWord", "Involution", "Permutation",
    "act", "binding_number", "check_axioms", "classify", "conditional_involution", "count_colorings",
    "enumerate_kbiquandles", "equal_bounded", "flat_check", "flat_derived3", "free_reduce",
    "fundamental_presentation", "gaussian", "hom_count", "involution_kbiquandle", "is_isomorphic",
    "is_pure", "multiplicity_vector", "neighbors", "parity_vector", "parse_vssb", "parse_word", "phi",
    "propagate", "realize", "relations", "rho", "vssb_invariant",
]
