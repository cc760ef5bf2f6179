"""
Splitting iterations for the VNCP
"""
from .report import SolveStatus, SolverConfig, SolveReport, method_label
from .iteration import IterateState, StationaryIteration
from .fpi import FixedPointIteration, fpi_solve, fpi_step, fpi_state
from .modulus import ModulusSplittingIteration, nms_solve

__all__ = [
    "SolveStatus",
    "SolverConfig",
    "SolveReport",
    "method_label",
    "IterateState",
    "StationaryIteration",
    "FixedPointIteration",
    "fpi_solve",
    "fpi_step",
    "fpi_state",
    "ModulusSplittingIteration",
    "nms_solve",
]
