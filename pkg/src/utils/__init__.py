"""Utilities package"""
from .config_manager import ConfigManager, AppConfig, resolve_path
from .logger import setup_logging, LoggerMixin
from .errors import (
    VncpError,
    InvalidParameter,
    SingularSplitting,
    ParseError,
    PoleError,
    NonFiniteError,
    InfeasibleEstimate,
)

__all__ = [
    'ConfigManager',
    'AppConfig',
    'resolve_path',
    'setup_logging',
    'LoggerMixin',
    'VncpError',
    'InvalidParameter',
    'SingularSplitting',
    'ParseError',
    'PoleError',
    'NonFiniteError',
    'InfeasibleEstimate',
]
