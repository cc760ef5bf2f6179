"""
Solver configuration and run reports
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from linalg.splitting import Splitting
from model.instance import OmegaChoice
from utils.errors import InvalidParameter


class SolveStatus(str, Enum):
    CONVERGED = "Converged"
    MAX_ITER_REACHED = "MaxIterReached"
    DIVERGED = "Diverged"
    EVALUATION_ERROR = "EvaluationError"


@dataclass(frozen=True, eq=False)
class SolverConfig:
    """Settings for one run; tau is only read by the fixed-point iteration"""
    splitting: Splitting
    omega: OmegaChoice
    tau: Optional[float] = None
    tol: float = 1e-8
    max_iter: int = 1000
    x0: Optional[np.ndarray] = field(default=None, repr=False)
    divergence_cap: float = 1e10

    def __post_init__(self):
        if self.tau is not None and not self.tau > 0:
            raise InvalidParameter(f"tau must be positive, got {self.tau}")
        if not self.tol > 0:
            raise InvalidParameter(f"tol must be positive, got {self.tol}")
        if int(self.max_iter) < 1:
            raise InvalidParameter(f"max_iter must be at least 1, got {self.max_iter}")
        if not self.divergence_cap > 0:
            raise InvalidParameter(f"divergence_cap must be positive, got {self.divergence_cap}")
        object.__setattr__(self, "max_iter", int(self.max_iter))

    def start_vector(self, n: int) -> np.ndarray:
        """x0, defaulting to all ones"""
        if self.x0 is None:
            return np.ones(n)
        x0 = np.array(self.x0, dtype=np.float64).reshape(-1)
        if x0.shape[0] != n:
            raise InvalidParameter(f"x0 has length {x0.shape[0]}, expected {n}")
        return x0


def method_label(family: str, splitting: Splitting, tau: Optional[float] = None) -> str:
    """FPI-GS(tau=0.95), NMSOR(alpha=0.8), NMJ, ..."""
    params = []
    if family == "fpi":
        name = f"FPI-{splitting.suffix}"
        if tau is not None:
            params.append(f"tau={tau:g}")
    else:
        name = f"NM{splitting.suffix}"
    if splitting.suffix == "SOR":
        params.append(f"alpha={splitting.relaxation_alpha:g}")
    return f"{name}({','.join(params)})" if params else name


@dataclass(eq=False)
class SolveReport:
    status: SolveStatus
    iterations: int
    residual_history: List[float]
    wall_time: float
    x_final: np.ndarray
    min_u: float
    min_v: float
    method_label: str
    y_final: Optional[np.ndarray] = None
    message: str = ""

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.CONVERGED

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1] if self.residual_history else float("nan")

    def to_dict(self, include_vectors: bool = True) -> Dict[str, Any]:
        data = {
            "method": self.method_label,
            "status": self.status.value,
            "iterations": self.iterations,
            "final_res": self.final_residual,
            "wall_time": self.wall_time,
            "min_u": self.min_u,
            "min_v": self.min_v,
            "residual_history": list(self.residual_history),
        }
        if self.message:
            data["message"] = self.message
        if include_vectors:
            data["x_final"] = self.x_final
            if self.y_final is not None:
                data["y_final"] = self.y_final
        return data
