"""Knot and link invariants computed from planar diagrams."""

from .engine import ConsistencyError, InvariantSet, arf_from_jones, identity_checks, invariants, special_values
from .goeritz import GoeritzForm, double_cover_homology, goeritz, link_determinant, signature
from .jones import jones, kauffman_bracket
from .qpoly import QBudgetExceeded, QEvaluator, q_polynomial

__all__ = [
    "ConsistencyError", "GoeritzForm", "InvariantSet", "QBudgetExceeded", "QEvaluator", "arf_from_jones",
    "double_cover_homology", "goeritz", "identity_checks", "invariants", "jones", "kauffman_bracket", "link_determinant",
    "q_polynomial", "signature", "special_values",
]
