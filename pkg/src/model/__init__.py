"""
VNCP problem model: nonlinear terms, instances, residuals and test problems
"""
from .functions import NonlinearFn, FunctionKind, get_function, CATALOG
from .instance import (
    VncpInstance,
    OmegaChoice,
    Evaluation,
    evaluate,
    eval_u,
    eval_v,
    residual,
    reformulation_residual,
    feasibility,
)
from .generators import MatrixPair, generate_example_4_1, generate_example_4_2, grid_side

__all__ = [
    "NonlinearFn",
    "FunctionKind",
    "get_function",
    "CATALOG",
    "VncpInstance",
    "OmegaChoice",
    "Evaluation",
    "evaluate",
    "eval_u",
    "eval_v",
    "residual",
    "reformulation_residual",
    "feasibility",
    "MatrixPair",
    "generate_example_4_1",
    "generate_example_4_2",
    "grid_side",
]
