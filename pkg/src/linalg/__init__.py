"""Dense linear algebra kernels shared by the solvers."""

from .kernels import (
    LiftedNormalSolver,
    RegularizedGramFactor,
    as_matrix,
    as_vector,
    factorize_regularized_gram,
    h_norm_sq,
    sherman_morrison_solve,
    solve_regularized_gram,
    spectral_norm_sq,
)

__all__ = [
    "LiftedNormalSolver",
    "RegularizedGramFactor",
    "as_matrix",
    "as_vector",
    "factorize_regularized_gram",
    "h_norm_sq",
    "sherman_morrison_solve",
    "solve_regularized_gram",
    "spectral_norm_sq",
]
