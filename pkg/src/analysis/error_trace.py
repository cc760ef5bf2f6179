"""
Error instrumentation of the fixed-point iteration against a reference solution
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from analysis.bounds import IterationMatrices, NormTriple, compute_norm_triple, iteration_matrices
from linalg.sparse import modulus
from linalg.splitting import Splitting
from model.instance import OmegaChoice, VncpInstance, evaluate
from solvers.fpi import FixedPointIteration
from solvers.iteration import DivergedIterate, IterateState
from solvers.report import SolveReport, SolverConfig
from utils.errors import InvalidParameter, VncpError

log = logging.getLogger("error_trace")

REFERENCE_RES_LIMIT = 1e-13


@dataclass(eq=False)
class ErrorTrace:
    x_errors: List[float]
    y_errors: List[float]
    weighted: List[float]
    matrices: IterationMatrices
    triple: NormTriple
    report: SolveReport
    ratios: List[float] = field(default_factory=list)

    @property
    def tau(self) -> float:
        return self.matrices.tau

    @property
    def T(self) -> np.ndarray:
        return self.matrices.T

    @property
    def T_gamma(self) -> np.ndarray:
        return self.matrices.T_gamma

    @property
    def t_gamma_inf_norm(self) -> float:
        return self.matrices.t_gamma_inf_norm

    @property
    def pairs(self) -> List[Tuple[float, float]]:
        return list(zip(self.x_errors, self.y_errors))

    def max_ratio(self) -> float:
        return max(self.ratios) if self.ratios else 0.0


def modulus_at(inst: VncpInstance, omega: OmegaChoice, x) -> np.ndarray:
    """y(x) = |(A - Omega B)x + phi(x) - Omega psi(x)|"""
    ev = evaluate(inst, x)
    return modulus(ev.u - omega.entries * ev.v)


def error_trace(inst: VncpInstance, omega: OmegaChoice, config: SolverConfig, x_star) -> ErrorTrace:
    """Run fpi_solve and record ||x^k - x*||, ||y^k - y*|| and max(gamma ||x^k - x*||, ||y^k - y*||)"""
    x_star = np.asarray(x_star, dtype=np.float64)
    res_star = evaluate(inst, x_star).residual
    if not res_star < REFERENCE_RES_LIMIT:
        raise InvalidParameter(f"reference solution has RES = {res_star:.3e}, need < {REFERENCE_RES_LIMIT:g}")
    if config.omega.n != omega.n or not np.array_equal(config.omega.entries, omega.entries):
        raise InvalidParameter("config.omega and omega differ")
    y_star = modulus_at(inst, omega, x_star)

    iteration = FixedPointIteration(inst, config)
    triple = compute_norm_triple(inst, omega, iteration.plan, inst.phi.lipschitz, inst.psi.lipschitz)
    matrices = iteration_matrices(triple, iteration.tau)

    x_errors: List[float] = []
    y_errors: List[float] = []
    weighted: List[float] = []

    def observe(state: IterateState):
        ex = float(np.linalg.norm(state.x - x_star))
        ey = float(np.linalg.norm(state.y - y_star))
        x_errors.append(ex)
        y_errors.append(ey)
        weighted.append(max(triple.gamma * ex, ey))

    report = iteration.solve(observer=observe)
    ratios = [cur / prev for prev, cur in zip(weighted, weighted[1:]) if prev > 0]
    log.debug(f"error trace of {report.method_label}: {len(weighted)} points, "
              f"max ratio {max(ratios) if ratios else 0.0:.4f}, ||T_gamma||_inf {matrices.t_gamma_inf_norm:.4f}")
    return ErrorTrace(x_errors=x_errors, y_errors=y_errors, weighted=weighted, matrices=matrices,
                      triple=triple, report=report, ratios=ratios)


def reference_solution(inst: VncpInstance, omega: OmegaChoice,
                       splitting: Optional[Splitting] = None, tau: float = 1.0,
                       tol: float = 1e-14, max_iter: int = 5000, polish_steps: int = 20) -> np.ndarray:
    """
    Solve to RES < tol with the fixed-point iteration, then keep stepping while
    RES still decreases to settle the iterate at machine precision
    """
    splitting = splitting or Splitting.gauss_seidel()
    config = SolverConfig(splitting=splitting, omega=omega, tau=tau, tol=tol, max_iter=max_iter)
    iteration = FixedPointIteration(inst, config)
    report = iteration.solve()
    if not report.converged:
        raise VncpError(f"reference solve did not converge: {report.status.value} "
                        f"after {report.iterations} steps, RES = {report.final_residual:.3e}")

    state = iteration.initial_state(report.x_final, report.y_final)
    best = state
    for _ in range(polish_steps):
        if best.residual == 0.0:
            break
        try:
            state = iteration.step(state)
        except (VncpError, DivergedIterate):
            break
        if state.residual <= best.residual:
            best = state
    return np.array(best.x, copy=True)
