"""
Parameter book: per-cell tau/alpha settings and reference results of the benchmark tables

The book is a versioned JSON file (configs/parameter_book.json) keyed by
table id, (phi, psi) pair and method.
"""
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from core.experiment import EXAMPLE_4_1, EXAMPLE_4_2, MethodSpec, ProblemSpec, parse_method
from utils.errors import InvalidParameter, VncpError
from utils.logger import LoggerMixin


@dataclass(frozen=True)
class BookEntry:
    phi: str
    psi: str
    method: MethodSpec
    reference_it: Tuple[int, ...]
    reference_time: Tuple[float, ...] = ()

    @property
    def pair_label(self) -> str:
        return f"({self.phi},{self.psi})"


@dataclass(frozen=True)
class BookTable:
    table_id: str
    title: str
    problem: Dict
    sizes: Tuple[int, ...]
    entries: Tuple[BookEntry, ...]

    @property
    def example(self) -> str:
        return str(self.problem["example"])

    def problem_for(self, n: int) -> ProblemSpec:
        """The table's test problem at dimension n"""
        if self.example == EXAMPLE_4_1:
            return ProblemSpec.example_4_1(n)
        return ProblemSpec.example_4_2_by_dimension(
            n, float(self.problem.get("mu1", 4.0)), float(self.problem.get("mu2", 4.0)))

    def column(self, n: int) -> Optional[int]:
        try:
            return self.sizes.index(int(n))
        except ValueError:
            return None

    def reference(self, entry: BookEntry, n: int) -> Tuple[Optional[int], Optional[float]]:
        """(IT, time) listed for the column of n; (None, None) off the book sizes"""
        col = self.column(n)
        if col is None:
            return None, None
        time = entry.reference_time[col] if col < len(entry.reference_time) else None
        return entry.reference_it[col], time

    def pairs(self) -> List[Tuple[str, str]]:
        seen = []
        for entry in self.entries:
            if (entry.phi, entry.psi) not in seen:
                seen.append((entry.phi, entry.psi))
        return seen


@dataclass(frozen=True)
class TauRangeReference:
    problem: Dict
    method: str
    upper_spectral: float
    upper_weighted: float

    def matches(self, problem: ProblemSpec, method_name: str) -> bool:
        if method_name != self.method or problem.kind != str(self.problem["example"]):
            return False
        if problem.kind == EXAMPLE_4_2:
            return (float(self.problem.get("mu1", 4.0)) == problem.mu1
                    and float(self.problem.get("mu2", 4.0)) == problem.mu2)
        return True


@dataclass
class ParameterBook(LoggerMixin):
    version: str
    tables: Dict[str, BookTable]
    tau_references: List[TauRangeReference] = field(default_factory=list)
    tau_reference_sor_alpha: float = 1.05
    path: str = ""

    @classmethod
    def load(cls, path: str) -> "ParameterBook":
        """Read and validate a parameter book; raises OSError or InvalidParameter"""
        with open(path, "r", encoding="utf-8") as f:
            try:
                data = json.load(f)
            except ValueError as e:
                raise InvalidParameter(f"parameter book {path} is not valid JSON: {e}") from None
        try:
            book = cls._parse(data, path)
        except (KeyError, TypeError) as e:
            raise InvalidParameter(f"parameter book {path} is malformed: missing or bad field {e}") from None
        book.log_debug(f"Loaded parameter book v{book.version} with tables {', '.join(book.tables)}")
        return book

    @classmethod
    def _parse(cls, data: Dict, path: str) -> "ParameterBook":
        tables = {}
        for table_id, raw in data["tables"].items():
            sizes = tuple(int(n) for n in raw["sizes"])
            entries = []
            for pair in raw["pairs"]:
                for cell in pair["methods"]:
                    method = parse_method(cell["method"], cell.get("tau"), cell.get("sor_alpha"))
                    it = tuple(int(v) for v in cell["it"])
                    if len(it) != len(sizes):
                        raise InvalidParameter(
                            f"table {table_id} {cell['method']} lists {len(it)} IT values for {len(sizes)} sizes")
                    entries.append(BookEntry(
                        phi=pair["phi"],
                        psi=pair["psi"],
                        method=method,
                        reference_it=it,
                        reference_time=tuple(float(v) for v in cell.get("time", [])),
                    ))
            tables[str(table_id)] = BookTable(
                table_id=str(table_id),
                title=raw.get("title", ""),
                problem=dict(raw["problem"]),
                sizes=sizes,
                entries=tuple(entries),
            )

        ranges = data.get("tau_ranges", {})
        references = [
            TauRangeReference(
                problem=dict(item["problem"]),
                method=item["method"],
                upper_spectral=float(item["upper_spectral"]),
                upper_weighted=float(item["upper_weighted"]),
            )
            for item in ranges.get("entries", [])
        ]
        return cls(
            version=str(data.get("version", "0")),
            tables=tables,
            tau_references=references,
            tau_reference_sor_alpha=float(ranges.get("sor_alpha", 1.05)),
            path=path,
        )

    def table(self, table_id) -> BookTable:
        key = str(table_id)
        if key not in self.tables:
            raise InvalidParameter(f"unknown table {table_id} (book has {', '.join(self.tables)})")
        return self.tables[key]

    def find_tau_reference(self, problem: ProblemSpec, method_name: str) -> Optional[TauRangeReference]:
        for ref in self.tau_references:
            if ref.matches(problem, method_name):
                return ref
        return None


def load_parameter_book(path: str) -> ParameterBook:
    try:
        return ParameterBook.load(path)
    except OSError as e:
        raise VncpError(f"cannot read parameter book {path}: {e}") from e
