"""Exact rational kernel: linear algebra, LP, polytopes.

No floating point anywhere; every value is an ``int`` or a
``fractions.Fraction`` and every predicate is decided exactly.
"""

from .linalg import (
    NO_SOLUTION,
    UNDERDETERMINED,
    UNIQUE,
    DimensionMismatchError,
    LinearSolveResult,
    NonSymmetricError,
    as_fraction,
    char_poly,
    descartes_positive_roots,
    determinant,
    dot,
    is_negative_definite,
    is_symmetric,
    mat_vec,
    matrix_inverse,
    primitive_vector,
    rank,
    rational_direction_to_primitive,
    solve_linear,
    solve_unique,
)
from .lp import EQ, GE, INFEASIBLE, LE, OPTIMAL, UNBOUNDED, LPResult, lp_maximize
from .polytope import (
    EmptyPolytopeError,
    Polytope,
    UnboundedPolytopeError,
    UnsupportedDimensionError,
    bounding_box,
    convex_hull,
    enumerate_vertices,
    lattice_points,
    point_in_hull,
    support_eval,
)

__all__ = [
    "NO_SOLUTION", "UNDERDETERMINED", "UNIQUE",
    "DimensionMismatchError", "LinearSolveResult", "NonSymmetricError",
    "as_fraction", "char_poly", "descartes_positive_roots", "determinant",
    "dot", "is_negative_definite", "is_symmetric", "mat_vec",
    "matrix_inverse", "primitive_vector", "rank",
    "rational_direction_to_primitive", "solve_linear", "solve_unique",
    "EQ", "GE", "INFEASIBLE", "LE", "OPTIMAL", "UNBOUNDED",
    "LPResult", "lp_maximize",
    "EmptyPolytopeError", "Polytope", "UnboundedPolytopeError",
    "UnsupportedDimensionError", "bounding_box", "convex_hull",
    "enumerate_vertices", "lattice_points", "point_in_hull", "support_eval",
]
