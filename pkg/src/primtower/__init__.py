"""Degree-truncated verification that the primitives functor has monadic length at most two."""

__version__ = "0.1.0"

from .checks import Check, NonConfluentError, StabilizationError
from .free import Alphabet, NCPoly, primitives
from .lie import LieData, b1_from_lie, build_enveloping, extract_lie
from .linalg import Basis, Field, LinearMap, Subspace
from .tower import B1Object, build_L1, check_b1_axioms, check_b2

__all__ = [
    "Alphabet",
    "B1Object",
    "Basis",
    "Check",
    "Field",
    "LieData",
    "LinearMap",
    "NCPoly",
    "NonConfluentError",
    "StabilizationError",
    "Subspace",
    "b1_from_lie",
    "build_L1",
    "build_enveloping",
    "check_b1_axioms",
    "check_b2",
    "extract_lie",
    "primitives",
]
