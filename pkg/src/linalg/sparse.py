"""
Immutable sparse and diagonal matrix carriers
"""
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from utils.errors import InvalidParameter


def as_vector(values: Iterable[float], n: int = None, name: str = "vector") -> np.ndarray:
    """Copy into a 1-D float64 array, checking the length when n is given"""
    vec = np.array(values, dtype=np.float64).reshape(-1)
    if n is not None and vec.shape[0] != n:
        raise InvalidParameter(f"{name} has length {vec.shape[0]}, expected {n}")
    return vec


def modulus(v: np.ndarray) -> np.ndarray:
    """Component-wise absolute value |v|"""
    return np.abs(v)


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Square real matrix in CSR form.

    Column indices are strictly increasing within each row and all stored
    values are finite. Explicit zeros are allowed.
    """
    csr: sp.csr_matrix = field(repr=False)

    def __post_init__(self):
        mat = self.csr
        if not sp.issparse(mat) or mat.format != "csr":
            raise InvalidParameter("SparseMatrix expects a scipy CSR matrix")
        rows, cols = mat.shape
        if rows != cols:
            raise InvalidParameter(f"matrix must be square, got {rows}x{cols}")
        if rows < 1:
            raise InvalidParameter("matrix dimension must be at least 1")
        if not np.all(np.isfinite(mat.data)):
            raise InvalidParameter("matrix contains NaN or Inf entries")
        if np.any(np.diff(mat.indptr) < 0):
            raise InvalidParameter("row offsets must be nondecreasing")
        if mat.nnz > 1:
            same_row = np.ones(mat.nnz - 1, dtype=bool)
            starts = mat.indptr[1:-1]
            starts = starts[(starts > 0) & (starts < mat.nnz)]
            same_row[starts - 1] = False
            if np.any(np.diff(mat.indices)[same_row] <= 0):
                raise InvalidParameter("column indices are not strictly increasing within a row")

    @classmethod
    def from_scipy(cls, mat) -> "SparseMatrix":
        """Canonical CSR copy of any scipy sparse matrix (duplicates summed, indices sorted)"""
        csr = sp.csr_matrix(mat, dtype=np.float64, copy=True)
        csr.sum_duplicates()
        csr.sort_indices()
        return cls(csr)

    @classmethod
    def from_dense(cls, array) -> "SparseMatrix":
        return cls.from_scipy(sp.csr_matrix(np.asarray(array, dtype=np.float64)))

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls.from_scipy(sp.identity(n, format="csr"))

    @classmethod
    def from_diagonal(cls, entries) -> "SparseMatrix":
        return cls.from_scipy(sp.diags(as_vector(entries), 0, format="csr"))

    @property
    def n(self) -> int:
        return self.csr.shape[0]

    @property
    def row_offsets(self) -> np.ndarray:
        return self.csr.indptr

    @property
    def col_indices(self) -> np.ndarray:
        return self.csr.indices

    @property
    def values(self) -> np.ndarray:
        return self.csr.data

    @property
    def nnz(self) -> int:
        return self.csr.nnz

    def diagonal(self) -> np.ndarray:
        return self.csr.diagonal()

    def is_diagonal(self) -> bool:
        """True when no off-diagonal entry is stored"""
        rows = np.repeat(np.arange(self.n), np.diff(self.csr.indptr))
        return bool(np.all(rows == self.csr.indices))

    def is_lower_triangular(self) -> bool:
        rows = np.repeat(np.arange(self.n), np.diff(self.csr.indptr))
        return bool(np.all(self.csr.indices <= rows))

    def is_symmetric(self) -> bool:
        return (self.csr != self.csr.T).nnz == 0

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.csr @ x

    def rmatvec(self, x: np.ndarray) -> np.ndarray:
        """Product with the transpose"""
        return self.csr.T @ x

    def __matmul__(self, x):
        return self.matvec(x)

    def toarray(self) -> np.ndarray:
        return self.csr.toarray()

    def combine(self, weights: np.ndarray, other: "SparseMatrix", sign: float = 1.0) -> "SparseMatrix":
        """self + sign * diag(weights) @ other, e.g. A + Omega B or A - Omega B"""
        if other.n != self.n:
            raise InvalidParameter(f"dimension mismatch: {self.n} vs {other.n}")
        scaled = sp.diags(sign * as_vector(weights, self.n, "weights"), 0, format="csr") @ other.csr
        return SparseMatrix.from_scipy(self.csr + scaled)

    def permuted(self, perm: np.ndarray) -> "SparseMatrix":
        """P A P^T for the permutation that sends index perm[i] to i"""
        perm = np.asarray(perm)
        return SparseMatrix.from_scipy(self.csr[perm][:, perm])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix) or other.n != self.n:
            return False
        return (self.csr != other.csr).nnz == 0

    __hash__ = None

    def __repr__(self) -> str:
        return f"SparseMatrix(n={self.n}, nnz={self.nnz})"


@dataclass(frozen=True, eq=False)
class DiagonalMatrix:
    """Diagonal matrix stored as its entries"""
    entries: np.ndarray

    def __post_init__(self):
        entries = as_vector(self.entries, name="diagonal entries")
        if entries.shape[0] < 1:
            raise InvalidParameter("diagonal matrix needs at least one entry")
        if not np.all(np.isfinite(entries)):
            raise InvalidParameter("diagonal entries must be finite")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def scalar(cls, value: float, n: int) -> "DiagonalMatrix":
        return cls(np.full(n, float(value)))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def is_positive(self) -> bool:
        return bool(np.all(self.entries > 0))

    def norm(self) -> float:
        """Spectral norm, exact for a diagonal matrix"""
        return float(np.max(np.abs(self.entries)))

    def to_sparse(self) -> SparseMatrix:
        return SparseMatrix.from_diagonal(self.entries)

    def __matmul__(self, x):
        return self.entries * x

    def __eq__(self, other) -> bool:
        return isinstance(other, DiagonalMatrix) and np.array_equal(self.entries, other.entries)

    __hash__ = None
