"""
Spectral norm estimates by power iteration

The start vector is the normalized all-ones vector so every estimate is
reproducible. Diagonal matrices use the exact closed form.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from linalg.sparse import SparseMatrix
from linalg.splitting import SplittingPlan

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 20000

log = logging.getLogger("norms")


@dataclass(frozen=True)
class NormEstimate:
    value: float
    iterations: int
    converged: bool

    def warning(self, label: str) -> str:
        return (f"power iteration for {label} hit the cap of {self.iterations} steps; "
                f"best estimate {self.value:.10g}")


def power_iteration(apply_gram: Callable[[np.ndarray], np.ndarray], n: int,
                    tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> NormEstimate:
    """Largest singular value from x -> G x where G = K^T K.

    Stops once the relative change of the estimate falls below tol.
    """
    x = np.ones(n) / math.sqrt(n)
    sigma_prev = 0.0
    for iteration in range(1, max_iter + 1):
        w = apply_gram(x)
        lam = float(np.linalg.norm(w))
        if lam == 0.0:
            return NormEstimate(0.0, iteration, True)
        sigma = math.sqrt(lam)
        x = w / lam
        if abs(sigma - sigma_prev) <= tol * sigma:
            return NormEstimate(sigma, iteration, True)
        sigma_prev = sigma
    log.warning(f"⚠️ power iteration did not converge in {max_iter} steps (estimate {sigma_prev:.10g})")
    return NormEstimate(sigma_prev, max_iter, False)


def estimate_spectral_norm(mx: SparseMatrix, tol: float = DEFAULT_TOL,
                           max_iter: int = DEFAULT_MAX_ITER) -> NormEstimate:
    if mx.is_diagonal():
        diag = mx.diagonal()
        return NormEstimate(float(np.max(np.abs(diag))) if diag.size else 0.0, 0, True)
    return power_iteration(lambda x: mx.rmatvec(mx.matvec(x)), mx.n, tol, max_iter)


def spectral_norm(mx: SparseMatrix, tol: float = DEFAULT_TOL,
                  max_iter: int = DEFAULT_MAX_ITER) -> float:
    """||mx||_2, the largest singular value"""
    return estimate_spectral_norm(mx, tol, max_iter).value


def estimate_inv_norm_of_M(plan: SplittingPlan, tol: float = DEFAULT_TOL,
                           max_iter: int = DEFAULT_MAX_ITER) -> NormEstimate:
    if plan.is_diagonal:
        diag = plan.M.diagonal()
        return NormEstimate(1.0 / float(np.min(np.abs(diag))), 0, True)
    return power_iteration(
        lambda x: plan.solve_with_M_transpose(plan.solve_with_M(x)),
        plan.size, tol, max_iter,
    )


def inv_norm_of_M(plan: SplittingPlan, tol: float = DEFAULT_TOL,
                  max_iter: int = DEFAULT_MAX_ITER) -> float:
    """||M^{-1}||_2 through triangular solves, never forming the inverse"""
    return estimate_inv_norm_of_M(plan, tol, max_iter).value
