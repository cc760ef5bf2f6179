"""
Convergence constants of the fixed-point iteration

    alpha = ||M^{-1}||
    beta  = ||N|| + L1 + L2 ||Omega||
    gamma = ||A - Omega B|| + L1 + L2 ||Omega||

With alpha (beta + gamma) < 1 the iteration converges for
    0 < tau < 2 (1 - alpha beta) / (1 - alpha beta + alpha gamma)   (spectral radius of T below 1)
    0 < tau < 2 / (alpha (beta + gamma) + 1)                        (||T_gamma||_inf below 1)
and the second interval always sits strictly inside the first.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from linalg.norms import estimate_inv_norm_of_M, estimate_spectral_norm, DEFAULT_MAX_ITER, DEFAULT_TOL
from linalg.splitting import SplittingPlan
from model.instance import OmegaChoice, VncpInstance
from utils.errors import InfeasibleEstimate, InvalidParameter
from utils.logger import log_performance

log = logging.getLogger("bounds")

XI_CEILING = 1.0 - 1e-12
DEFAULT_XI_MARGIN = 1e-6


@dataclass(frozen=True)
class NormTriple:
    alpha_norm: float
    beta: float
    gamma: float
    L1: float
    L2: float
    omega_norm: float
    n_norm: float = 0.0
    a_minus_omega_b_norm: float = 0.0
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    @classmethod
    def from_constants(cls, alpha_norm: float, beta: float, gamma: float) -> "NormTriple":
        """A triple given directly by (alpha, beta, gamma), e.g. for property checks"""
        return cls(alpha_norm=alpha_norm, beta=beta, gamma=gamma, L1=0.0, L2=0.0, omega_norm=0.0,
                   n_norm=beta, a_minus_omega_b_norm=gamma)

    @property
    def lipschitz_shift(self) -> float:
        return self.L1 + self.L2 * self.omega_norm

    @property
    def product(self) -> float:
        """alpha (beta + gamma)"""
        return self.alpha_norm * (self.beta + self.gamma)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha_norm,
            "beta": self.beta,
            "gamma": self.gamma,
            "L1": self.L1,
            "L2": self.L2,
            "omega_norm": self.omega_norm,
            "norm_N": self.n_norm,
            "norm_A_minus_omega_B": self.a_minus_omega_b_norm,
            "alpha_beta_plus_gamma": self.product,
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class TauRange:
    """Admissible tau intervals (0, upper); uppers are meaningless when not feasible"""
    feasible: bool
    upper_spectral: float
    upper_weighted: float

    def contains(self, tau: float, strict_margin: float = 0.0) -> bool:
        return self.feasible and strict_margin < tau < self.upper_spectral - strict_margin

    def contains_strict(self, tau: float, strict_margin: float = 0.0) -> bool:
        return self.feasible and strict_margin < tau < self.upper_weighted - strict_margin

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "tau_range_spectral": [0.0, self.upper_spectral],
            "tau_range_weighted": [0.0, self.upper_weighted],
        }


@dataclass(frozen=True)
class IterationMatrices:
    tau: float
    T: np.ndarray
    T_gamma: np.ndarray
    rho_T: float
    t_gamma_inf_norm: float


@dataclass(frozen=True)
class StepEstimate:
    delta: float
    xi: float
    c: float
    k_min: int
    t_gamma_inf_norm: float


@log_performance(log)
def compute_norm_triple(inst: VncpInstance, omega: OmegaChoice, plan: SplittingPlan,
                        L1: float, L2: float, tol: float = DEFAULT_TOL,
                        max_iter: int = DEFAULT_MAX_ITER) -> NormTriple:
    """Estimate alpha, beta, gamma for the splitting `plan` of A + Omega B"""
    if L1 < 0 or L2 < 0:
        raise InvalidParameter("Lipschitz constants must be nonnegative")
    if plan.size != inst.n or omega.n != inst.n:
        raise InvalidParameter("plan, Omega and instance dimensions differ")

    warnings = []
    alpha = estimate_inv_norm_of_M(plan, tol, max_iter)
    if not alpha.converged:
        warnings.append(alpha.warning("||M^-1||"))
    n_norm = estimate_spectral_norm(plan.N, tol, max_iter)
    if not n_norm.converged:
        warnings.append(n_norm.warning("||N||"))
    a_minus = inst.A.combine(omega.entries, inst.B, sign=-1.0)
    diff_norm = estimate_spectral_norm(a_minus, tol, max_iter)
    if not diff_norm.converged:
        warnings.append(diff_norm.warning("||A - Omega B||"))

    omega_norm = omega.norm()
    shift = L1 + L2 * omega_norm
    for message in warnings:
        log.warning(f"⚠️ {message}")
    return NormTriple(
        alpha_norm=alpha.value,
        beta=n_norm.value + shift,
        gamma=diff_norm.value + shift,
        L1=float(L1),
        L2=float(L2),
        omega_norm=omega_norm,
        n_norm=n_norm.value,
        a_minus_omega_b_norm=diff_norm.value,
        warnings=tuple(warnings),
    )


def _ratio(num: float, den: float) -> float:
    if den == 0:
        return math.inf if num > 0 else math.nan
    return num / den


def tau_range(triple: NormTriple) -> TauRange:
    a, b, g = triple.alpha_norm, triple.beta, triple.gamma
    ab, ag = a * b, a * g
    feasible = a * (b + g) < 1.0
    upper_rho = _ratio(2.0 * (1.0 - ab), 1.0 - ab + ag)
    upper_inf = _ratio(2.0, a * (b + g) + 1.0)
    return TauRange(feasible=feasible, upper_spectral=upper_rho, upper_weighted=upper_inf)


def _spectral_radius_2x2(t: np.ndarray) -> float:
    trace = t[0, 0] + t[1, 1]
    det = t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]
    disc = trace * trace - 4.0 * det
    if disc >= 0:
        root = math.sqrt(disc)
        return max(abs(trace + root), abs(trace - root)) / 2.0
    # complex pair: |lambda|^2 = det
    return math.sqrt(det)


def iteration_matrices(triple: NormTriple, tau: float) -> IterationMatrices:
    """T and T_gamma bounding the error recursion, with rho(T) and ||T_gamma||_inf"""
    if not tau > 0:
        raise InvalidParameter(f"tau must be positive, got {tau}")
    a, b, g = triple.alpha_norm, triple.beta, triple.gamma
    drift = abs(1.0 - tau)
    t = np.array([[a * b, a],
                  [tau * g * a * b, tau * g * a + drift]])
    t_gamma = np.array([[a * b, a * g],
                        [tau * a * b, tau * a * g + drift]])
    inf_norm = max(a * b + a * g, tau * a * b + tau * a * g + drift)
    return IterationMatrices(tau=tau, T=t, T_gamma=t_gamma,
                             rho_T=_spectral_radius_2x2(t), t_gamma_inf_norm=inf_norm)


def min_iteration_steps(c: float, xi: float) -> int:
    """Smallest integer k with k > log(c) / log(xi); 0 when c >= 1"""
    if not 0.0 < xi < 1.0:
        raise InvalidParameter(f"xi must lie in (0, 1), got {xi}")
    if not c > 0:
        raise InvalidParameter(f"c must be positive, got {c}")
    if c >= 1.0:
        return 0
    return int(math.floor(math.log(c) / math.log(xi))) + 1


def step_estimate(triple: NormTriple, tau: float, e0_weighted_norm: float, delta: float,
                  xi_margin: float = DEFAULT_XI_MARGIN) -> StepEstimate:
    """Steps after which ||E_gamma^(k)||_inf < delta is guaranteed"""
    if not delta > 0:
        raise InvalidParameter(f"delta must be positive, got {delta}")
    if not e0_weighted_norm >= 0:
        raise InvalidParameter("initial weighted error must be nonnegative")
    norm = iteration_matrices(triple, tau).t_gamma_inf_norm
    if norm >= 1.0:
        raise InfeasibleEstimate(f"||T_gamma||_inf = {norm:.6g} >= 1 for tau = {tau}")
    xi = min(norm + xi_margin, XI_CEILING)
    if e0_weighted_norm == 0:
        return StepEstimate(delta=delta, xi=xi, c=math.inf, k_min=0, t_gamma_inf_norm=norm)
    c = delta / e0_weighted_norm
    return StepEstimate(delta=delta, xi=xi, c=c, k_min=min_iteration_steps(c, xi), t_gamma_inf_norm=norm)
