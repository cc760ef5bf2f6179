"""
Sparse storage, splittings, norm estimates and Matrix Market I/O
"""
from .sparse import SparseMatrix, DiagonalMatrix, as_vector, modulus
from .splitting import Splitting, SplittingKind, SplittingPlan, split, solve_with_M
from .norms import (
    NormEstimate,
    estimate_spectral_norm,
    estimate_inv_norm_of_M,
    spectral_norm,
    inv_norm_of_M,
)
from .matrix_market import read_matrix_market, write_matrix_market

__all__ = [
    "SparseMatrix",
    "DiagonalMatrix",
    "as_vector",
    "modulus",
    "Splitting",
    "SplittingKind",
    "SplittingPlan",
    "split",
    "solve_with_M",
    "NormEstimate",
    "estimate_spectral_norm",
    "estimate_inv_norm_of_M",
    "spectral_norm",
    "inv_norm_of_M",
    "read_matrix_market",
    "write_matrix_market",
]
