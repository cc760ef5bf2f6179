"""
Structural splittings C = M - N of the iteration matrix C = A + Omega B

With C = D - L - U (D diagonal, -L strictly lower, -U strictly upper part):
  Jacobi:        M = D,             N = L + U
  Gauss-Seidel:  M = D - L,         N = U
  SOR(alpha):    M = D/alpha - L,   N = (1/alpha - 1) D + U
M and N are assembled from copies of the entries of C, never by subtracting
C from something, so M - N reproduces C. For SOR the diagonal of N is
D/alpha - D, which is exact for alpha >= 0.5; below that the diagonal of
M - N can be off by a rounding unit.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve_triangular

from linalg.sparse import SparseMatrix, as_vector
from utils.errors import InvalidParameter, SingularSplitting


class SplittingKind(str, Enum):
    JACOBI = "jacobi"
    GAUSS_SEIDEL = "gauss-seidel"
    SOR = "sor"


@dataclass(frozen=True)
class Splitting:
    """Which splitting to build; relaxation_alpha only matters for SOR"""
    kind: SplittingKind
    relaxation_alpha: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", SplittingKind(self.kind))
        if self.kind is SplittingKind.SOR:
            if not 0.0 < self.relaxation_alpha < 2.0:
                raise InvalidParameter(
                    f"SOR relaxation_alpha must lie in (0, 2), got {self.relaxation_alpha}")
        else:
            object.__setattr__(self, "relaxation_alpha", 1.0)

    @classmethod
    def jacobi(cls) -> "Splitting":
        return cls(SplittingKind.JACOBI)

    @classmethod
    def gauss_seidel(cls) -> "Splitting":
        return cls(SplittingKind.GAUSS_SEIDEL)

    @classmethod
    def sor(cls, relaxation_alpha: float) -> "Splitting":
        return cls(SplittingKind.SOR, float(relaxation_alpha))

    @property
    def suffix(self) -> str:
        """Short label used in method names: J, GS, SOR"""
        return {SplittingKind.JACOBI: "J",
                SplittingKind.GAUSS_SEIDEL: "GS",
                SplittingKind.SOR: "SOR"}[self.kind]


@dataclass(frozen=True, eq=False)
class SplittingPlan:
    """M - N decomposition of `source` with a cheap solve against M"""
    splitting: Splitting
    source: SparseMatrix = field(repr=False)
    M: SparseMatrix = field(repr=False)
    N: SparseMatrix = field(repr=False)
    _m_diagonal: np.ndarray = field(repr=False)
    _m_transpose: Optional[sp.csr_matrix] = field(repr=False, default=None)

    @property
    def size(self) -> int:
        return self.source.n

    @property
    def is_diagonal(self) -> bool:
        return self.splitting.kind is SplittingKind.JACOBI

    def solve_with_M(self, b: np.ndarray) -> np.ndarray:
        """z with M z = b by diagonal division or forward substitution"""
        b = as_vector(b, self.size, "right-hand side")
        if self.is_diagonal:
            return b / self._m_diagonal
        return spsolve_triangular(self.M.csr, b, lower=True)

    def solve_with_M_transpose(self, b: np.ndarray) -> np.ndarray:
        """z with M^T z = b by diagonal division or back substitution"""
        b = as_vector(b, self.size, "right-hand side")
        if self.is_diagonal:
            return b / self._m_diagonal
        return spsolve_triangular(self._m_transpose, b, lower=False)


def split(c: SparseMatrix, splitting: Splitting) -> SplittingPlan:
    """Build the Jacobi, Gauss-Seidel or SOR splitting of c"""
    diag = c.diagonal()
    zero = np.flatnonzero(diag == 0)
    if zero.size:
        raise SingularSplitting(f"zero diagonal entry at row {int(zero[0])}; M would be singular")

    lower = sp.tril(c.csr, k=-1, format="csr")
    upper = sp.triu(c.csr, k=1, format="csr")

    kind = splitting.kind
    if kind is SplittingKind.JACOBI:
        m_diag = diag.copy()
        m = sp.diags(m_diag, 0, format="csr")
        n = -(lower + upper)
    elif kind is SplittingKind.GAUSS_SEIDEL:
        m_diag = diag.copy()
        m = sp.diags(m_diag, 0, format="csr") + lower
        n = -upper
    else:
        m_diag = diag / splitting.relaxation_alpha
        m = sp.diags(m_diag, 0, format="csr") + lower
        n = sp.diags(m_diag - diag, 0, format="csr") - upper

    m_matrix = SparseMatrix.from_scipy(m)
    n_matrix = SparseMatrix.from_scipy(n)
    m_transpose = None if kind is SplittingKind.JACOBI else sp.csr_matrix(m_matrix.csr.T)

    return SplittingPlan(
        splitting=splitting,
        source=c,
        M=m_matrix,
        N=n_matrix,
        _m_diagonal=m_diag,
        _m_transpose=m_transpose,
    )


def solve_with_M(plan: SplittingPlan, b: np.ndarray) -> np.ndarray:
    """Module-level form of SplittingPlan.solve_with_M"""
    return plan.solve_with_M(b)
