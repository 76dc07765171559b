"""Finite-dimensional *-algebras, group actions on them and states."""

from .star_algebra import MatrixStarAlgebra, full_matrix_algebra, build_algebra, commutant, centre
from .actions import GroupAction, fixed_point_algebra, conditional_expectation, galois_stabilizer
from .states import StateFunctional, central_decompose_state

__all__ = [
    'MatrixStarAlgebra', 'full_matrix_algebra', 'build_algebra', 'commutant', 'centre',
    'GroupAction', 'fixed_point_algebra', 'conditional_expectation', 'galois_stabilizer',
    'StateFunctional', 'central_decompose_state',
]
