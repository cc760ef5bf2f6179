"""
Exception hierarchy shared by the solver library and the CLI
"""
from typing import Optional


class VncpError(Exception):
    """Base class for every error raised by this package"""


class InvalidParameter(VncpError, ValueError):
    """A parameter is outside its admissible range"""


class SingularSplitting(VncpError, ValueError):
    """The splitting matrix M has a zero diagonal entry"""


class ParseError(VncpError, ValueError):
    """Malformed or undecodable input file"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class PoleError(VncpError):
    """A nonlinear function was evaluated exactly at its pole"""


class NonFiniteError(VncpError):
    """An evaluation produced NaN or Inf"""


class InfeasibleEstimate(VncpError):
    """The iteration-step estimate needs ||T_gamma||_inf < 1"""
