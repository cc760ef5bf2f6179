"""
Convergence analysis: norm constants, admissible tau ranges, iteration matrices and step estimates
"""
from .bounds import (
    NormTriple,
    TauRange,
    IterationMatrices,
    StepEstimate,
    compute_norm_triple,
    tau_range,
    iteration_matrices,
    min_iteration_steps,
    step_estimate,
)
from .error_trace import ErrorTrace, error_trace, reference_solution, modulus_at

__all__ = [
    "NormTriple",
    "TauRange",
    "IterationMatrices",
    "StepEstimate",
    "compute_norm_triple",
    "tau_range",
    "iteration_matrices",
    "min_iteration_steps",
    "step_estimate",
    "ErrorTrace",
    "error_trace",
    "reference_solution",
    "modulus_at",
]
