"""
Test problem generators

Example 4.1: A = tridiag(-1, 8, -1), B = tridiag(-1, 4, -1), n x n.
Example 4.2: n = m^2, A = blocktridiag(-I, S, -I) + mu1 I, B = blockdiag(S) + mu2 I,
             with S = tridiag(-1, 8, -1) of size m x m.
"""
import math
from dataclasses import dataclass, field

import scipy.sparse as sp

from linalg.sparse import SparseMatrix
from model.functions import NonlinearFn
from model.instance import VncpInstance
from utils.errors import InvalidParameter


@dataclass(frozen=True, eq=False)
class MatrixPair:
    """A and B of a test problem, before phi and psi are chosen"""
    A: SparseMatrix = field(repr=False)
    B: SparseMatrix = field(repr=False)
    name: str

    @property
    def n(self) -> int:
        return self.A.n

    def instance(self, phi: NonlinearFn, psi: NonlinearFn) -> VncpInstance:
        return VncpInstance(A=self.A, B=self.B, phi=phi, psi=psi, name=self.name)


def tridiagonal(n: int, sub: float, diag: float, sup: float) -> sp.csr_matrix:
    return sp.diags([sub, diag, sup], [-1, 0, 1], shape=(n, n), format="csr")


def generate_example_4_1(n: int) -> MatrixPair:
    if n < 2:
        raise InvalidParameter(f"Example 4.1 needs n >= 2, got {n}")
    a = tridiagonal(n, -1.0, 8.0, -1.0)
    b = tridiagonal(n, -1.0, 4.0, -1.0)
    return MatrixPair(SparseMatrix.from_scipy(a), SparseMatrix.from_scipy(b), f"example-4.1(n={n})")


def generate_example_4_2(m: int, mu1: float, mu2: float) -> MatrixPair:
    if m < 2:
        raise InvalidParameter(f"Example 4.2 needs m >= 2, got {m}")
    s = tridiagonal(m, -1.0, 8.0, -1.0)
    eye_m = sp.identity(m, format="csr")
    coupling = sp.diags([1.0, 1.0], [-1, 1], shape=(m, m), format="csr")
    a_hat = sp.kron(eye_m, s, format="csr") - sp.kron(coupling, eye_m, format="csr")
    b_hat = sp.kron(eye_m, s, format="csr")
    eye_n = sp.identity(m * m, format="csr")
    a = a_hat + mu1 * eye_n
    b = b_hat + mu2 * eye_n
    name = f"example-4.2(m={m},mu1={mu1:g},mu2={mu2:g})"
    return MatrixPair(SparseMatrix.from_scipy(a), SparseMatrix.from_scipy(b), name)


def grid_side(n: int) -> int:
    """m with m^2 = n, for sizing Example 4.2 by its dimension"""
    m = math.isqrt(n)
    if m * m != n:
        raise InvalidParameter(f"Example 4.2 dimension must be a perfect square, got {n}")
    return m
