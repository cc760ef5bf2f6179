"""
Catalog of component-wise nonlinear terms phi, psi
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict

import numpy as np

from utils.errors import InvalidParameter, NonFiniteError, PoleError

# |1 + t| below this is treated as a numerical pole of t / (1 + t)
RATIONAL_POLE_GUARD = 1e-14


class FunctionKind(str, Enum):
    ABS = "abs"
    SIN = "sin"
    COS = "cos"
    RATIONAL = "rational"
    ZERO = "zero"


# Declared constants; the rational term uses the value the experiments assume
DECLARED_LIPSCHITZ: Dict[FunctionKind, float] = {
    FunctionKind.ABS: 1.0,
    FunctionKind.SIN: 1.0,
    FunctionKind.COS: 1.0,
    FunctionKind.RATIONAL: 1.0,
    FunctionKind.ZERO: 0.0,
}

DISPLAY_LABELS: Dict[FunctionKind, str] = {
    FunctionKind.ABS: "|x|",
    FunctionKind.SIN: "sin(x)",
    FunctionKind.COS: "cos(x)",
    FunctionKind.RATIONAL: "x/(1+x)",
    FunctionKind.ZERO: "0",
}


def _rational(x: np.ndarray) -> np.ndarray:
    denom = 1.0 + x
    if np.any(x == -1.0):
        raise PoleError("t/(1+t) evaluated at its pole t = -1")
    if np.any(np.abs(denom) < RATIONAL_POLE_GUARD):
        raise NonFiniteError("t/(1+t) evaluated too close to its pole t = -1")
    return x / denom


_EVALUATORS = {
    FunctionKind.ABS: np.abs,
    FunctionKind.SIN: np.sin,
    FunctionKind.COS: np.cos,
    FunctionKind.RATIONAL: _rational,
    FunctionKind.ZERO: np.zeros_like,
}


@dataclass(frozen=True)
class NonlinearFn:
    """A component-wise scalar function with its declared Lipschitz constant"""
    kind: FunctionKind
    lipschitz: float

    def __call__(self, x: np.ndarray) -> np.ndarray:
        values = _EVALUATORS[self.kind](np.asarray(x, dtype=np.float64))
        if not np.all(np.isfinite(values)):
            raise NonFiniteError(f"{self.name}(x) produced NaN or Inf")
        return values

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def label(self) -> str:
        return DISPLAY_LABELS[self.kind]


def get_function(name: str) -> NonlinearFn:
    """Look up a catalog entry by name: abs, sin, cos, rational, zero"""
    try:
        kind = FunctionKind(name.strip().lower())
    except ValueError:
        known = ", ".join(k.value for k in FunctionKind)
        raise InvalidParameter(f"unknown function '{name}' (choose from {known})") from None
    return NonlinearFn(kind, DECLARED_LIPSCHITZ[kind])


CATALOG: Dict[str, NonlinearFn] = {kind.value: get_function(kind.value) for kind in FunctionKind}
