"""
Modulus-based matrix splitting baseline (NMJ, NMGS, NMSOR)

    (M_A + Omega M_B) x^{k+1} = (N_A + Omega N_B) x^k
                                + |(A - Omega B)x^k + phi(x^k) - Omega psi(x^k)|
                                - phi(x^k) - Omega psi(x^k)

M_A + Omega M_B is the Jacobi/GS/SOR part of C = A + Omega B; for diagonal
Omega this coincides with splitting A and B separately.
"""
from typing import Optional

import numpy as np

from linalg.sparse import as_vector
from model.instance import VncpInstance
from solvers.iteration import IterateState, StationaryIteration
from solvers.report import SolveReport, SolverConfig, method_label


class ModulusSplittingIteration(StationaryIteration):
    family = "nms"

    @property
    def label(self) -> str:
        return method_label(self.family, self.config.splitting)

    def initial_state(self, x0: np.ndarray, y0: Optional[np.ndarray] = None) -> IterateState:
        x0 = as_vector(x0, self.inst.n, "x0")
        return IterateState(x=x0, evaluation=self._evaluate(x0))

    def step(self, state: IterateState) -> IterateState:
        x_new = self._update_x(state, self.modulus_term(state.evaluation))
        return IterateState(x=x_new, evaluation=self._evaluate(x_new), iteration=state.iteration + 1)


def nms_solve(inst: VncpInstance, config: SolverConfig) -> SolveReport:
    """Run the modulus-based splitting iteration; config.tau is ignored"""
    return ModulusSplittingIteration(inst, config).solve()
