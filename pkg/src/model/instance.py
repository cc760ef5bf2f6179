"""
VNCP instances: find x with u(x) = Ax + phi(x) >= 0, v(x) = Bx + psi(x) >= 0, u(x)^T v(x) = 0
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from linalg.sparse import DiagonalMatrix, SparseMatrix, as_vector, modulus
from model.functions import NonlinearFn
from utils.errors import InvalidParameter, NonFiniteError
from utils.helpers import read_text_lines


@dataclass(frozen=True, eq=False)
class VncpInstance:
    A: SparseMatrix = field(repr=False)
    B: SparseMatrix = field(repr=False)
    phi: NonlinearFn
    psi: NonlinearFn
    name: str = "custom"

    def __post_init__(self):
        if self.A.n != self.B.n:
            raise InvalidParameter(f"A is {self.A.n}x{self.A.n} but B is {self.B.n}x{self.B.n}")

    @property
    def n(self) -> int:
        return self.A.n

    @property
    def pair_label(self) -> str:
        return f"({self.phi.name},{self.psi.name})"


@dataclass(frozen=True, eq=False)
class OmegaChoice:
    """Positive diagonal scaling Omega of the modulus reformulation"""
    omega: DiagonalMatrix

    def __post_init__(self):
        if not self.omega.is_positive():
            raise InvalidParameter("Omega must have strictly positive diagonal entries")

    @classmethod
    def scalar(cls, scale: float, n: int) -> "OmegaChoice":
        if not scale > 0:
            raise InvalidParameter(f"Omega scale must be positive, got {scale}")
        return cls(DiagonalMatrix.scalar(scale, n))

    @classmethod
    def from_entries(cls, entries) -> "OmegaChoice":
        return cls(DiagonalMatrix(as_vector(entries)))

    @classmethod
    def from_file(cls, path: str, n: Optional[int] = None) -> "OmegaChoice":
        """One positive real per line; blank lines and '#' comments are skipped"""
        entries = []
        for number, line in enumerate(read_text_lines(path), start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                entries.append(float(text))
            except ValueError:
                raise InvalidParameter(f"{path}, line {number}: not a number: '{text}'") from None
        if n is not None and len(entries) != n:
            raise InvalidParameter(f"{path} holds {len(entries)} Omega entries, expected {n}")
        return cls.from_entries(entries)

    @property
    def entries(self) -> np.ndarray:
        return self.omega.entries

    @property
    def n(self) -> int:
        return self.omega.n

    def norm(self) -> float:
        return self.omega.norm()


@dataclass(frozen=True, eq=False)
class Evaluation:
    """phi(x), psi(x), u(x), v(x) at one point"""
    phi: np.ndarray
    psi: np.ndarray
    u: np.ndarray
    v: np.ndarray

    @property
    def residual(self) -> float:
        return float(np.dot(modulus(self.u), modulus(self.v)))


def _check_point(inst: VncpInstance, x) -> np.ndarray:
    return as_vector(x, inst.n, "x")


def _finite(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise NonFiniteError(f"{what} contains NaN or Inf")
    return values


def evaluate(inst: VncpInstance, x) -> Evaluation:
    """All four component vectors at x, evaluating phi and psi once each"""
    x = _check_point(inst, x)
    phi = inst.phi(x)
    psi = inst.psi(x)
    u = _finite(inst.A.matvec(x) + phi, "u(x)")
    v = _finite(inst.B.matvec(x) + psi, "v(x)")
    return Evaluation(phi=phi, psi=psi, u=u, v=v)


def eval_u(inst: VncpInstance, x) -> np.ndarray:
    """u(x) = Ax + phi(x)"""
    x = _check_point(inst, x)
    return _finite(inst.A.matvec(x) + inst.phi(x), "u(x)")


def eval_v(inst: VncpInstance, x) -> np.ndarray:
    """v(x) = Bx + psi(x)"""
    x = _check_point(inst, x)
    return _finite(inst.B.matvec(x) + inst.psi(x), "v(x)")


def residual(inst: VncpInstance, x) -> float:
    """RES = |u(x)|^T |v(x)|"""
    return evaluate(inst, x).residual


def reformulation_residual(inst: VncpInstance, omega: OmegaChoice, x) -> float:
    """||(A+Omega B)x - (|(A-Omega B)x + phi(x) - Omega psi(x)| - phi(x) - Omega psi(x))||_2"""
    x = _check_point(inst, x)
    if omega.n != inst.n:
        raise InvalidParameter(f"Omega has {omega.n} entries, instance dimension is {inst.n}")
    w = omega.entries
    phi = inst.phi(x)
    psi = inst.psi(x)
    lhs = inst.A.matvec(x) + w * inst.B.matvec(x)
    inner = inst.A.matvec(x) - w * inst.B.matvec(x) + (phi - w * psi)
    rhs = modulus(inner) - phi - w * psi
    return float(np.linalg.norm(_finite(lhs - rhs, "reformulation residual")))


def feasibility(inst: VncpInstance, x) -> tuple[float, float]:
    """(min u(x), min v(x)); both should be >= 0 at a solution"""
    ev = evaluate(inst, x)
    return float(np.min(ev.u)), float(np.min(ev.v))
