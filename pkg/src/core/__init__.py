"""Core package"""
from .experiment import (
    ProblemSpec,
    MethodSpec,
    ExperimentSpec,
    ExperimentRunner,
    MethodBounds,
    parse_method,
    bounds_methods,
)

__all__ = [
    'ProblemSpec',
    'MethodSpec',
    'ExperimentSpec',
    'ExperimentRunner',
    'MethodBounds',
    'parse_method',
    'bounds_methods',
]
