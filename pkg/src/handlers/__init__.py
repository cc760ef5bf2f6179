"""Command handlers for the benchmark CLI"""
from .cli_handler import CommandHandler, EXIT_OK, EXIT_INPUT_ERROR, EXIT_NOT_CONVERGED

__all__ = ['CommandHandler', 'EXIT_OK', 'EXIT_INPUT_ERROR', 'EXIT_NOT_CONVERGED']
