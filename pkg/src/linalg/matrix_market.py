"""
Matrix Market coordinate files (real/integer, general/symmetric, 1-based)
"""
import os
from typing import List

import numpy as np
import scipy.sparse as sp
from scipy.io import mmwrite

from linalg.sparse import SparseMatrix
from utils.errors import InvalidParameter, ParseError
from utils.helpers import read_text_lines

HEADER_PREFIX = "%%MatrixMarket"
SUPPORTED_FIELDS = ("real", "integer", "double")
SUPPORTED_SYMMETRY = ("general", "symmetric")


def _parse_header(line: str) -> str:
    tokens = line.strip().split()
    if len(tokens) != 5 or tokens[0] != HEADER_PREFIX:
        raise ParseError(f"expected '{HEADER_PREFIX} matrix coordinate <field> <symmetry>'", 1)
    obj, fmt, field_type, symmetry = (t.lower() for t in tokens[1:])
    if obj != "matrix":
        raise ParseError(f"unsupported object '{obj}'", 1)
    if fmt != "coordinate":
        raise ParseError(f"only coordinate format is supported, got '{fmt}'", 1)
    if field_type not in SUPPORTED_FIELDS:
        raise ParseError(f"unsupported field '{field_type}' (only real matrices)", 1)
    if symmetry not in SUPPORTED_SYMMETRY:
        raise ParseError(f"unsupported symmetry '{symmetry}'", 1)
    return symmetry


def read_matrix_market(path: str) -> SparseMatrix:
    """Read a square coordinate Matrix Market file into CSR, expanding symmetric storage"""
    lines = read_text_lines(path)
    if not lines:
        raise ParseError("empty file", 1)

    symmetry = _parse_header(lines[0])

    line_no = 1
    size_line = None
    for idx in range(1, len(lines)):
        stripped = lines[idx].strip()
        if stripped and not stripped.startswith("%"):
            line_no, size_line = idx + 1, stripped
            break
    if size_line is None:
        raise ParseError("missing size line", len(lines))

    try:
        rows, cols, nnz = (int(tok) for tok in size_line.split())
    except ValueError:
        raise ParseError(f"bad size line '{size_line}'", line_no) from None
    if rows != cols:
        raise ParseError(f"non-square matrix {rows}x{cols}", line_no)
    if rows < 1 or nnz < 0:
        raise ParseError(f"invalid dimensions {rows}x{cols} with {nnz} entries", line_no)

    row_idx: List[int] = []
    col_idx: List[int] = []
    values: List[float] = []
    entries_read = 0
    for idx in range(line_no, len(lines)):
        stripped = lines[idx].strip()
        if not stripped or stripped.startswith("%"):
            continue
        number = idx + 1
        tokens = stripped.split()
        if len(tokens) != 3:
            raise ParseError(f"expected 'row col value', got '{stripped}'", number)
        try:
            i, j, value = int(tokens[0]), int(tokens[1]), float(tokens[2])
        except ValueError:
            raise ParseError(f"cannot parse entry '{stripped}'", number) from None
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise ParseError(f"index ({i}, {j}) outside {rows}x{cols}", number)
        if not np.isfinite(value):
            raise ParseError(f"non-finite value '{tokens[2]}'", number)
        entries_read += 1
        row_idx.append(i - 1)
        col_idx.append(j - 1)
        values.append(value)
        if symmetry == "symmetric" and i != j:
            row_idx.append(j - 1)
            col_idx.append(i - 1)
            values.append(value)

    if entries_read != nnz:
        raise ParseError(f"size line declares {nnz} entries, found {entries_read}", line_no)

    coo = sp.coo_matrix((values, (row_idx, col_idx)), shape=(rows, cols), dtype=np.float64)
    return SparseMatrix.from_scipy(coo)


def write_matrix_market(mx: SparseMatrix, path: str, symmetric: bool = False) -> None:
    """Write mx with 17 significant digits; symmetric=True stores the lower triangle"""
    if symmetric and not mx.is_symmetric():
        raise InvalidParameter("matrix is not symmetric")

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    # a file object keeps mmwrite from appending ".mtx" to the path
    with open(path, "wb") as f:
        mmwrite(f, mx.csr, field="real", precision=17,
                symmetry="symmetric" if symmetric else "general")
