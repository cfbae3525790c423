"""Exact finite-level computations for semigroup crossed products of Z^n by integer matrices.

Layers, bottom up: ``exact_linalg`` (Smith/Hermite forms, quotients),
``acting_system`` (the matrix semigroup and its conditions),
``inverse_semigroup`` (projections and normal forms), ``regular_rep``
(brute-force oracle), ``tight_space`` (cylinders and the groupoid) and
``duality`` (trace forms and pairings).
"""

from .acting_system import Family, GroupElement, SystemSpec, factorize, ore_witness
from .exact_linalg import IntegerMatrix, RationalMatrix, quotient_group, smith_normal_form
from .inverse_semigroup import Projection, TElement, t_adjoint, t_equal, t_mul
from .syntax import format_element, parse_element

__all__ = [
    "Family",
    "GroupElement",
    "IntegerMatrix",
    "Projection",
    "RationalMatrix",
    "SystemSpec",
    "TElement",
    "factorize",
    "format_element",
    "ore_witness",
    "parse_element",
    "quotient_group",
    "smith_normal_form",
    "t_adjoint",
    "t_equal",
    "t_mul",
]
