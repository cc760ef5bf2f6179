"""
Flat-file persistence: the parameter book and benchmark result tables
"""
from .parameter_book import ParameterBook, BookTable, BookEntry, TauRangeReference, load_parameter_book
from .results import (
    ResultRow,
    ResultTable,
    SweepRow,
    default_metadata,
    write_result_csv,
    read_result_csv,
    save_result_table,
    load_result_table,
    write_sweep_csv,
    read_sweep_csv,
)

__all__ = [
    "ParameterBook",
    "BookTable",
    "BookEntry",
    "TauRangeReference",
    "load_parameter_book",
    "ResultRow",
    "ResultTable",
    "SweepRow",
    "default_metadata",
    "write_result_csv",
    "read_result_csv",
    "save_result_table",
    "load_result_table",
    "write_sweep_csv",
    "read_sweep_csv",
]
