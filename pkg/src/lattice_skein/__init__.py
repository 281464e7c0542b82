"""Exact coefficients of Catalan states of the lattice crossing L(m, n)."""

from .catalan import CatalanState, from_json, reflect_x, split_at, stack_v, validate
from .coefficients import coefficient, family_Cm, property_report
from .kernel import BACKEND
from .laurent import LaurentPoly, QPoly
from .oracle import full_expansion, restricted_expansion
from .plucking import PlaneTree, tree_of
from .poset import fiber, hasse, state_of

__all__ = [
    "BACKEND",
    "CatalanState",
    "LaurentPoly",
    "PlaneTree",
    "QPoly",
    "coefficient",
    "family_Cm",
    "fiber",
    "from_json",
    "full_expansion",
    "hasse",
    "property_report",
    "reflect_x",
    "restricted_expansion",
    "split_at",
    "stack_v",
    "state_of",
    "tree_of",
    "validate",
]
__version__ = "0.1.0"
