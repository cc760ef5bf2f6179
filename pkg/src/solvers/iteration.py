"""
Shared driver for the stationary splitting iterations

Both methods split C = A + Omega B = M - N once at setup and then apply one
update per step. RES is evaluated after every full update; the reported
iteration count is the number of updates performed.
"""
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from linalg.sparse import modulus
from linalg.splitting import SplittingPlan, split
from model.instance import Evaluation, VncpInstance, evaluate
from solvers.report import SolveReport, SolveStatus, SolverConfig
from utils.errors import InvalidParameter, NonFiniteError, PoleError
from utils.logger import LoggerMixin


@dataclass(frozen=True, eq=False)
class IterateState:
    """x^k (and y^k for the fixed-point method) with the evaluation at x^k"""
    x: np.ndarray
    evaluation: Evaluation
    y: Optional[np.ndarray] = None
    iteration: int = 0

    @property
    def residual(self) -> float:
        return self.evaluation.residual


class DivergedIterate(Exception):
    """Raised inside a step when x^{k+1} is not finite"""


class StationaryIteration(LoggerMixin):
    """Common setup and stopping logic; subclasses implement step()"""

    family = ""

    def __init__(self, inst: VncpInstance, config: SolverConfig):
        if config.omega.n != inst.n:
            raise InvalidParameter(f"Omega has {config.omega.n} entries, instance dimension is {inst.n}")
        self.inst = inst
        self.config = config
        self.w = config.omega.entries
        c = inst.A.combine(self.w, inst.B, sign=1.0)
        self.plan: SplittingPlan = split(c, config.splitting)

    @property
    def label(self) -> str:
        raise NotImplementedError

    def modulus_term(self, ev: Evaluation) -> np.ndarray:
        """|(A - Omega B)x + phi(x) - Omega psi(x)| = |u(x) - Omega v(x)|"""
        return modulus(ev.u - self.w * ev.v)

    def initial_state(self, x0: np.ndarray, y0: Optional[np.ndarray] = None) -> IterateState:
        raise NotImplementedError

    def step(self, state: IterateState) -> IterateState:
        raise NotImplementedError

    def _update_x(self, state: IterateState, extra: np.ndarray) -> np.ndarray:
        """x^{k+1} = M^{-1}[N x^k + extra - phi(x^k) - Omega psi(x^k)]"""
        ev = state.evaluation
        rhs = self.plan.N.matvec(state.x) + extra - ev.phi - self.w * ev.psi
        x_new = self.plan.solve_with_M(rhs)
        if not np.all(np.isfinite(x_new)):
            raise DivergedIterate("x iterate is not finite")
        return x_new

    def _evaluate(self, x: np.ndarray) -> Evaluation:
        try:
            return evaluate(self.inst, x)
        except NonFiniteError:
            if np.max(np.abs(x)) > self.config.divergence_cap:
                raise DivergedIterate("u(x) or v(x) overflowed") from None
            raise

    def solve(self, observer: Optional[Callable[[IterateState], None]] = None) -> SolveReport:
        """Iterate from config.x0; observer, if given, sees x0 and every accepted iterate"""
        config = self.config
        self.log_debug(f"{self.label} on {self.inst.name} {self.inst.pair_label}, "
                       f"n={self.inst.n}, tol={config.tol:g}, max_iter={config.max_iter}")
        x0 = config.start_vector(self.inst.n)
        start = time.perf_counter()

        try:
            state = self.initial_state(x0)
        except (PoleError, NonFiniteError, DivergedIterate) as e:
            return self._report(SolveStatus.EVALUATION_ERROR, None, [], start, x0, str(e))

        if observer is not None:
            observer(state)

        history = [state.residual]
        status = SolveStatus.MAX_ITER_REACHED
        message = ""
        if state.residual < config.tol:
            status = SolveStatus.CONVERGED
        else:
            for _ in range(config.max_iter):
                try:
                    new_state = self.step(state)
                except DivergedIterate as e:
                    history.append(float("inf"))
                    status, message = SolveStatus.DIVERGED, str(e)
                    break
                except (PoleError, NonFiniteError) as e:
                    status, message = SolveStatus.EVALUATION_ERROR, str(e)
                    break

                state = new_state
                if observer is not None:
                    observer(state)
                res = state.residual
                history.append(res)
                if not np.isfinite(res) or res > config.divergence_cap:
                    status, message = SolveStatus.DIVERGED, f"RES = {res:g} exceeded the divergence cap"
                    break
                if res < config.tol:
                    status = SolveStatus.CONVERGED
                    break

        report = self._report(status, state, history, start, state.x, message)
        if report.converged:
            self.log_debug(f"{self.label} converged in {report.iterations} steps, RES={report.final_residual:.3e}")
        else:
            self.log_warning(f"{self.label} stopped with {status.value} after {report.iterations} steps")
        return report

    def _report(self, status: SolveStatus, state: Optional[IterateState], history,
                start: float, x: np.ndarray, message: str) -> SolveReport:
        wall_time = time.perf_counter() - start
        if state is not None:
            min_u = float(np.min(state.evaluation.u))
            min_v = float(np.min(state.evaluation.v))
        else:
            min_u = min_v = float("nan")
        return SolveReport(
            status=status,
            iterations=max(len(history) - 1, 0),
            residual_history=[float(r) for r in history],
            wall_time=wall_time,
            x_final=np.array(x, copy=True),
            min_u=min_u,
            min_v=min_v,
            method_label=self.label,
            y_final=None if state is None or state.y is None else np.array(state.y, copy=True),
            message=message,
        )
