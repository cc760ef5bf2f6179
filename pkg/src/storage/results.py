"""
Result tables on disk: CSV with '#' metadata lines, plus a JSON twin
"""
import csv
import io
import json
import math
import os
import platform
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime
from typing import Any, Dict, Iterable, List, Optional, TextIO

import numpy as np

from utils.helpers import ensure_directory, safe_json_save


@dataclass
class ResultRow:
    """One (pair, method, n) cell of a benchmark table"""
    table: str
    pair: str
    method: str
    n: int
    it: int
    wall_time: float
    status: str
    final_res: float
    tau: Optional[float] = None
    sor_alpha: Optional[float] = None
    reference_it: Optional[int] = None
    delta_it: Optional[int] = None
    reference_time: Optional[float] = None
    reform_res: Optional[float] = None
    lemma_ok: Optional[bool] = None
    min_u: Optional[float] = None
    min_v: Optional[float] = None
    message: str = ""

    @property
    def converged(self) -> bool:
        return self.status == "Converged"

    def key(self):
        return self.pair, self.method, self.n


@dataclass
class SweepRow:
    tau: float
    it: int
    status: str
    final_res: float


@dataclass
class ResultTable:
    rows: List[ResultRow] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def cell(self, pair: str, method_prefix: str, n: int) -> Optional[ResultRow]:
        for row in self.rows:
            if row.pair == pair and row.n == n and row.method.startswith(method_prefix):
                return row
        return None

    def mismatches(self, threshold: int) -> List[ResultRow]:
        return [r for r in self.rows if r.delta_it is not None and abs(r.delta_it) > threshold]


def machine_note() -> str:
    return f"{platform.system()} {platform.machine()}, Python {platform.python_version()}, numpy {np.__version__}"


def default_metadata(table_id: str, book_version: str, **extra) -> Dict[str, Any]:
    meta = {
        "table": table_id,
        "parameter_book_version": book_version,
        "machine": machine_note(),
        "created": datetime.now().isoformat(timespec="seconds"),
    }
    meta.update(extra)
    return meta


_ROW_FIELDS = [f.name for f in fields(ResultRow)]
_INT_FIELDS = {"n", "it", "reference_it", "delta_it"}
_STR_FIELDS = {"table", "pair", "method", "status", "message"}
_BOOL_FIELDS = {"lemma_ok"}


def _format(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(name: str, text: str) -> Any:
    if name in _STR_FIELDS:
        return text
    if text == "":
        return None
    if name in _INT_FIELDS:
        return int(text)
    if name in _BOOL_FIELDS:
        return text == "True"
    return float(text)


def write_result_csv(table: ResultTable, stream: TextIO):
    for key, value in table.metadata.items():
        stream.write(f"# {key}={json.dumps(value)}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(_ROW_FIELDS)
    for row in table.rows:
        writer.writerow([_format(getattr(row, name)) for name in _ROW_FIELDS])


def read_result_csv(stream: TextIO) -> ResultTable:
    metadata: Dict[str, Any] = {}
    body = []
    for line in stream:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            metadata[key.strip()] = json.loads(value) if value else None
        elif line.strip():
            body.append(line)
    rows = []
    for record in csv.DictReader(io.StringIO("".join(body))):
        rows.append(ResultRow(**{name: _parse(name, record.get(name, "")) for name in _ROW_FIELDS}))
    return ResultTable(rows=rows, metadata=metadata)


def _json_float(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def result_table_to_dict(table: ResultTable) -> Dict[str, Any]:
    return {
        "metadata": table.metadata,
        "rows": [{k: _json_float(v) for k, v in asdict(row).items()} for row in table.rows],
    }


def save_result_table(table: ResultTable, out_path: str) -> Dict[str, str]:
    """Write <out>.csv and <out>.json; returns the two paths"""
    base, ext = os.path.splitext(out_path)
    if ext.lower() not in (".csv", ".json"):
        base = out_path
    csv_path, json_path = f"{base}.csv", f"{base}.json"
    ensure_directory(os.path.dirname(csv_path))
    with open(csv_path, "w", encoding="utf-8", newline="") as f:
        write_result_csv(table, f)
    if not safe_json_save(result_table_to_dict(table), json_path):
        raise OSError(f"could not write {json_path}")
    return {"csv": csv_path, "json": json_path}


def load_result_table(csv_path: str) -> ResultTable:
    with open(csv_path, "r", encoding="utf-8", newline="") as f:
        return read_result_csv(f)


def write_sweep_csv(rows: Iterable[SweepRow], stream: TextIO, metadata: Optional[Dict[str, Any]] = None):
    for key, value in (metadata or {}).items():
        stream.write(f"# {key}={json.dumps(value)}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["tau", "it", "status", "final_res"])
    for row in rows:
        writer.writerow([repr(float(row.tau)), row.it, row.status, repr(float(row.final_res))])


def read_sweep_csv(stream: TextIO) -> List[SweepRow]:
    body = [line for line in stream if line.strip() and not line.startswith("#")]
    return [
        SweepRow(tau=float(r["tau"]), it=int(r["it"]), status=r["status"], final_res=float(r["final_res"]))
        for r in csv.DictReader(io.StringIO("".join(body)))
    ]
