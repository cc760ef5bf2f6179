"""
Experiment orchestration: which problem, which methods, and running them
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from analysis.bounds import NormTriple, TauRange, compute_norm_triple, tau_range
from linalg.matrix_market import read_matrix_market
from linalg.splitting import Splitting, SplittingKind, split
from model.functions import get_function
from model.generators import MatrixPair, generate_example_4_1, generate_example_4_2, grid_side
from model.instance import OmegaChoice, VncpInstance
from solvers.fpi import fpi_solve
from solvers.modulus import nms_solve
from solvers.report import SolveReport, SolverConfig, method_label
from utils.config_manager import AppConfig
from utils.errors import InvalidParameter
from utils.logger import LoggerMixin, log_performance

EXAMPLE_4_1 = "4.1"
EXAMPLE_4_2 = "4.2"
FILES = "files"

# name -> (family, splitting kind)
METHOD_NAMES: Dict[str, Tuple[str, SplittingKind]] = {
    "nmj": ("nms", SplittingKind.JACOBI),
    "nmgs": ("nms", SplittingKind.GAUSS_SEIDEL),
    "nmsor": ("nms", SplittingKind.SOR),
    "fpi-j": ("fpi", SplittingKind.JACOBI),
    "fpi-gs": ("fpi", SplittingKind.GAUSS_SEIDEL),
    "fpi-sor": ("fpi", SplittingKind.SOR),
}


@dataclass(frozen=True)
class ProblemSpec:
    """Example 4.1 (n), Example 4.2 (m, mu1, mu2) or a pair of Matrix Market files"""
    kind: str
    n: Optional[int] = None
    m: Optional[int] = None
    mu1: float = 4.0
    mu2: float = 4.0
    matrix_a: Optional[str] = None
    matrix_b: Optional[str] = None

    def __post_init__(self):
        if self.kind == EXAMPLE_4_1:
            if self.n is None or self.n < 2:
                raise InvalidParameter(f"Example 4.1 needs n >= 2, got {self.n}")
        elif self.kind == EXAMPLE_4_2:
            if self.m is None or self.m < 2:
                raise InvalidParameter(f"Example 4.2 needs m >= 2, got {self.m}")
        elif self.kind == FILES:
            if not self.matrix_a or not self.matrix_b:
                raise InvalidParameter("file problems need both --matrix-a and --matrix-b")
        else:
            raise InvalidParameter(f"unknown problem kind '{self.kind}'")

    @classmethod
    def example_4_1(cls, n: int) -> "ProblemSpec":
        return cls(EXAMPLE_4_1, n=int(n))

    @classmethod
    def example_4_2(cls, m: int, mu1: float = 4.0, mu2: float = 4.0) -> "ProblemSpec":
        return cls(EXAMPLE_4_2, m=int(m), mu1=float(mu1), mu2=float(mu2))

    @classmethod
    def example_4_2_by_dimension(cls, n: int, mu1: float = 4.0, mu2: float = 4.0) -> "ProblemSpec":
        return cls.example_4_2(grid_side(int(n)), mu1, mu2)

    @classmethod
    def files(cls, matrix_a: str, matrix_b: str) -> "ProblemSpec":
        return cls(FILES, matrix_a=matrix_a, matrix_b=matrix_b)

    @property
    def dimension(self) -> Optional[int]:
        if self.kind == EXAMPLE_4_1:
            return self.n
        if self.kind == EXAMPLE_4_2:
            return self.m * self.m
        return None

    def build(self) -> MatrixPair:
        if self.kind == EXAMPLE_4_1:
            return generate_example_4_1(self.n)
        if self.kind == EXAMPLE_4_2:
            return generate_example_4_2(self.m, self.mu1, self.mu2)
        a = read_matrix_market(self.matrix_a)
        b = read_matrix_market(self.matrix_b)
        return MatrixPair(a, b, f"files({self.matrix_a},{self.matrix_b})")

    def to_dict(self) -> dict:
        data = {"kind": self.kind}
        if self.kind == EXAMPLE_4_1:
            data["n"] = self.n
        elif self.kind == EXAMPLE_4_2:
            data.update({"m": self.m, "n": self.m * self.m, "mu1": self.mu1, "mu2": self.mu2})
        else:
            data.update({"matrix_a": self.matrix_a, "matrix_b": self.matrix_b})
        return data


@dataclass(frozen=True)
class MethodSpec:
    family: str
    splitting: Splitting
    tau: Optional[float] = None

    @property
    def label(self) -> str:
        return method_label(self.family, self.splitting, self.tau)

    @property
    def name(self) -> str:
        prefix = "fpi-" if self.family == "fpi" else "nm"
        return f"{prefix}{self.splitting.suffix.lower()}"

    @property
    def sor_alpha(self) -> Optional[float]:
        if self.splitting.kind is SplittingKind.SOR:
            return self.splitting.relaxation_alpha
        return None

    def with_tau(self, tau: float) -> "MethodSpec":
        if self.family != "fpi":
            raise InvalidParameter(f"{self.label} has no tau parameter")
        return MethodSpec(self.family, self.splitting, float(tau))


def parse_method(name: str, tau: Optional[float] = None, sor_alpha: Optional[float] = None) -> MethodSpec:
    """
    nmj, nmgs, nmsor, fpi-j, fpi-gs, fpi-sor

    The fixed-point methods need tau; the SOR variants need sor_alpha.
    """
    key = name.strip().lower()
    if key not in METHOD_NAMES:
        raise InvalidParameter(f"unknown method '{name}' (choose from {', '.join(METHOD_NAMES)})")
    family, kind = METHOD_NAMES[key]

    if kind is SplittingKind.SOR:
        if sor_alpha is None:
            raise InvalidParameter(f"{key} needs --sor-alpha")
        splitting = Splitting.sor(sor_alpha)
    elif kind is SplittingKind.GAUSS_SEIDEL:
        splitting = Splitting.gauss_seidel()
    else:
        splitting = Splitting.jacobi()

    if family == "fpi":
        if tau is None:
            raise InvalidParameter(f"{key} needs --tau")
        if not tau > 0:
            raise InvalidParameter(f"tau must be positive, got {tau}")
        return MethodSpec(family, splitting, float(tau))
    return MethodSpec(family, splitting)


@dataclass(frozen=True)
class ExperimentSpec:
    problem: ProblemSpec
    phi: str
    psi: str
    methods: Tuple[MethodSpec, ...]
    omega_scale: float = 5.0
    omega_file: Optional[str] = None
    tol: float = 1e-8
    max_iter: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.methods:
            raise InvalidParameter("an experiment needs at least one method")
        if self.omega_file is None and not self.omega_scale > 0:
            raise InvalidParameter(f"omega scale must be positive, got {self.omega_scale}")
        get_function(self.phi)
        get_function(self.psi)


@dataclass
class MethodBounds:
    method: MethodSpec
    triple: NormTriple
    ranges: TauRange


class ExperimentRunner(LoggerMixin):
    """Builds instances and runs methods with the configured solver defaults"""

    def __init__(self, config: AppConfig):
        self.config = config

    @log_performance(logging.getLogger("ExperimentRunner"))
    def build_pair(self, problem: ProblemSpec) -> MatrixPair:
        pair = problem.build()
        self.log_debug(f"Built {pair.name} with n={pair.n}, nnz(A)={pair.A.nnz}, nnz(B)={pair.B.nnz}")
        return pair

    def build_instance(self, spec: ExperimentSpec, pair: Optional[MatrixPair] = None) -> VncpInstance:
        pair = pair or self.build_pair(spec.problem)
        return pair.instance(get_function(spec.phi), get_function(spec.psi))

    def build_omega(self, spec: ExperimentSpec, n: int) -> OmegaChoice:
        if spec.omega_file:
            return OmegaChoice.from_file(spec.omega_file, n)
        return OmegaChoice.scalar(spec.omega_scale, n)

    def solver_config(self, spec: ExperimentSpec, method: MethodSpec, omega: OmegaChoice) -> SolverConfig:
        return SolverConfig(
            splitting=method.splitting,
            omega=omega,
            tau=method.tau,
            tol=spec.tol,
            max_iter=spec.max_iter,
            divergence_cap=self.config.solver.divergence_cap,
        )

    def run_method(self, inst: VncpInstance, omega: OmegaChoice, method: MethodSpec,
                   spec: ExperimentSpec) -> SolveReport:
        config = self.solver_config(spec, method, omega)
        if method.family == "fpi":
            return fpi_solve(inst, config)
        return nms_solve(inst, config)

    def run(self, spec: ExperimentSpec) -> List[SolveReport]:
        inst = self.build_instance(spec)
        omega = self.build_omega(spec, inst.n)
        reports = []
        for method in spec.methods:
            report = self.run_method(inst, omega, method, spec)
            self.log_info(f"{report.method_label}: {report.status.value}, IT={report.iterations}, "
                          f"RES={report.final_residual:.3e}")
            reports.append(report)
        return reports

    def bounds(self, inst: VncpInstance, omega: OmegaChoice, method: MethodSpec) -> MethodBounds:
        """Norm constants and tau ranges of the fixed-point iteration built on method's splitting"""
        c = inst.A.combine(omega.entries, inst.B, sign=1.0)
        plan = split(c, method.splitting)
        triple = compute_norm_triple(
            inst, omega, plan, inst.phi.lipschitz, inst.psi.lipschitz,
            tol=self.config.norms.tol, max_iter=self.config.norms.max_iter,
        )
        for warning in triple.warnings:
            self.log_warning(warning)
        return MethodBounds(method=method, triple=triple, ranges=tau_range(triple))


def bounds_methods(names: Sequence[str], sor_alpha: Optional[float]) -> List[MethodSpec]:
    """Fixed-point methods for range reports; tau is irrelevant there"""
    methods = []
    for name in names:
        key = name.strip().lower()
        if key.startswith("nm"):
            key = "fpi-" + key[2:]
        methods.append(parse_method(key, tau=1.0, sor_alpha=sor_alpha))
    return methods
