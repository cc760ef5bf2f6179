"""
Utility functions for the benchmark CLI
"""
import os
import json
import math
from typing import Any, Dict, List, Optional
from datetime import datetime

import numpy as np

from utils.errors import ParseError


def ensure_directory(path: str) -> bool:
    """Ensure directory exists, create if not"""
    if not path:
        return True
    try:
        os.makedirs(path, exist_ok=True)
        return True
    except OSError:
        return False


def read_text_lines(path: str) -> List[str]:
    """Lines of a UTF-8 text file without line endings; undecodable bytes raise ParseError"""
    with open(path, "rb") as f:
        raw = f.read().splitlines()
    lines = []
    for number, chunk in enumerate(raw, start=1):
        try:
            lines.append(chunk.decode("utf-8"))
        except UnicodeDecodeError as e:
            raise ParseError(f"{path} is not valid UTF-8 (byte 0x{chunk[e.start]:02x} at column {e.start + 1})",
                             number) from None
    return lines


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and non-finite floats into JSON-safe values"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def dump_json(data: Any) -> str:
    """Serialize to an indented JSON string"""
    return json.dumps(to_jsonable(data), indent=2, ensure_ascii=False)


def safe_json_save(data: Any, file_path: str) -> bool:
    """Safely save data to JSON file"""
    try:
        ensure_directory(os.path.dirname(file_path))

        with open(file_path, 'w', encoding='utf-8') as f:
            f.write(dump_json(data))
            f.write("\n")
        return True
    except OSError:
        return False


def relative_difference(value: float, reference: float) -> float:
    """|value - reference| / |reference| (inf for a zero reference)"""
    if reference == 0:
        return 0.0 if value == 0 else math.inf
    return abs(value - reference) / abs(reference)


def create_error_response(error_type: str, message: str, details: Optional[Dict] = None) -> Dict:
    """Create standardized error response"""
    response = {
        'success': False,
        'error': {
            'type': error_type,
            'message': message,
            'timestamp': datetime.now().isoformat()
        }
    }

    if details:
        response['error']['details'] = details

    return response

