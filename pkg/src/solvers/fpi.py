"""
Splitting-based fixed-point iteration (FPI-J, FPI-GS, FPI-SOR)

    x^{k+1} = M^{-1}[N x^k + y^k - phi(x^k) - Omega psi(x^k)]
    y^{k+1} = (1 - tau) y^k + tau |(A - Omega B)x^{k+1} + phi(x^{k+1}) - Omega psi(x^{k+1})|

y^0 is taken consistent with x^0: y^0 = |(A - Omega B)x^0 + phi(x^0) - Omega psi(x^0)|.
"""
from typing import Optional

import numpy as np

from linalg.sparse import as_vector
from model.instance import VncpInstance
from solvers.iteration import IterateState, StationaryIteration
from solvers.report import SolveReport, SolverConfig, method_label
from utils.errors import InvalidParameter


class FixedPointIteration(StationaryIteration):
    family = "fpi"

    def __init__(self, inst: VncpInstance, config: SolverConfig):
        if config.tau is None:
            raise InvalidParameter("the fixed-point iteration needs tau > 0")
        super().__init__(inst, config)
        self.tau = float(config.tau)

    @property
    def label(self) -> str:
        return method_label(self.family, self.config.splitting, self.tau)

    def initial_state(self, x0: np.ndarray, y0: Optional[np.ndarray] = None) -> IterateState:
        x0 = as_vector(x0, self.inst.n, "x0")
        ev = self._evaluate(x0)
        y0 = self.modulus_term(ev) if y0 is None else as_vector(y0, self.inst.n, "y0")
        return IterateState(x=x0, evaluation=ev, y=y0, iteration=0)

    def step(self, state: IterateState) -> IterateState:
        x_new = self._update_x(state, state.y)
        ev_new = self._evaluate(x_new)
        y_new = (1.0 - self.tau) * state.y + self.tau * self.modulus_term(ev_new)
        return IterateState(x=x_new, evaluation=ev_new, y=y_new, iteration=state.iteration + 1)


def fpi_solve(inst: VncpInstance, config: SolverConfig) -> SolveReport:
    """Run the fixed-point iteration until RES < tol, max_iter, or divergence"""
    return FixedPointIteration(inst, config).solve()


def fpi_step(inst: VncpInstance, state: IterateState, config: SolverConfig) -> IterateState:
    """One application of both updates"""
    iteration = FixedPointIteration(inst, config)
    if state.y is None:
        state = iteration.initial_state(state.x)
    return iteration.step(state)


def fpi_state(inst: VncpInstance, config: SolverConfig, x, y=None) -> IterateState:
    """Build an iterate at (x, y); y defaults to the value consistent with x"""
    return FixedPointIteration(inst, config).initial_state(np.asarray(x, dtype=np.float64), y)
