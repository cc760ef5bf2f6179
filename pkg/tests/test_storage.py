import io
import json
import math

import pytest

from storage.parameter_book import ParameterBook, load_parameter_book
from storage.results import (ResultRow, ResultTable, SweepRow, default_metadata, load_result_table,
                             read_result_csv, read_sweep_csv, save_result_table, write_result_csv,
                             write_sweep_csv)
from core.experiment import ProblemSpec
from utils.errors import InvalidParameter, VncpError


def _rows():
    return [
        ResultRow(table="2", pair="(abs,abs)", method="FPI-GS(tau=0.95)", n=1000, it=8, wall_time=0.1,
                  status="Converged", final_res=3.5e-9, tau=0.95, reference_it=8, delta_it=0, reference_time=0.124,
                  reform_res=1.2e-10, lemma_ok=True, min_u=-5e-7, min_v=2e-7),
        ResultRow(table="2", pair="(abs,abs)", method="NMJ", n=1000, it=1000, wall_time=2.5,
                  status="MaxIterReached", final_res=0.25, message="stopped, with a comma"),
    ]


class TestResultCsv:
    def test_round_trip(self):
        table = ResultTable(rows=_rows(), metadata={"table": "2", "sizes": [1000], "tol": 1e-8})
        buffer = io.StringIO()
        write_result_csv(table, buffer)
        buffer.seek(0)
        loaded = read_result_csv(buffer)
        assert loaded.rows == table.rows
        assert loaded.metadata == table.metadata

    def test_cell_and_mismatches(self):
        rows = _rows()
        rows[1].reference_it, rows[1].delta_it = 17, 983
        table = ResultTable(rows=rows)
        assert table.cell("(abs,abs)", "FPI-GS", 1000).it == 8
        assert table.cell("(abs,abs)", "FPI-J", 1000) is None
        assert table.mismatches(2) == [rows[1]]

    def test_save_writes_csv_and_json(self, tmp_path):
        rows = _rows()
        rows[1].final_res = math.inf
        table = ResultTable(rows=rows, metadata=default_metadata("2", "1.0.0", sizes=[1000]))
        files = save_result_table(table, str(tmp_path / "out" / "table2"))
        assert files["csv"].endswith("table2.csv")
        data = json.loads(open(files["json"], encoding="utf-8").read())
        assert data["metadata"]["parameter_book_version"] == "1.0.0"
        assert data["rows"][1]["final_res"] == "inf"
        assert load_result_table(files["csv"]).rows[1].final_res == math.inf


class TestSweepCsv:
    def test_round_trip(self):
        rows = [SweepRow(0.5, 40, "Converged", 9e-9), SweepRow(50.0, 1000, "Diverged", math.inf)]
        buffer = io.StringIO()
        write_sweep_csv(rows, buffer, {"method": "fpi-gs"})
        text = buffer.getvalue()
        assert text.splitlines()[1] == "tau,it,status,final_res"
        assert read_sweep_csv(io.StringIO(text)) == rows


class TestParameterBook:
    def test_tables(self, book_path):
        book = load_parameter_book(book_path)
        assert set(book.tables) == {"2", "3", "4"}
        table = book.table(2)
        assert table.sizes == (1000, 2000, 5000)
        assert len(table.pairs()) == 6
        assert len(table.entries) == 36

    def test_reference_values(self, book_path):
        book = load_parameter_book(book_path)
        table = book.table("2")
        entry = next(e for e in table.entries if e.pair_label == "(abs,abs)" and e.method.name == "fpi-gs")
        assert entry.method.tau == 0.95
        assert table.reference(entry, 1000) == (8, 0.124)
        assert table.reference(entry, 777) == (None, None)

        table3 = book.table("3")
        entry = next(e for e in table3.entries if e.pair_label == "(abs,abs)" and e.method.name == "fpi-sor")
        assert table3.reference(entry, 1600)[0] == 7
        assert table3.problem_for(1600).m == 40

    def test_tau_references(self, book_path):
        book = load_parameter_book(book_path)
        ref = book.find_tau_reference(ProblemSpec.example_4_1(100), "fpi-j")
        assert (ref.upper_spectral, ref.upper_weighted) == (1.1667, 1.0667)
        ref = book.find_tau_reference(ProblemSpec.example_4_2(10, 8.0, 4.0), "fpi-sor")
        assert ref.upper_weighted == 1.3123
        assert book.find_tau_reference(ProblemSpec.example_4_2(10, 2.0, 4.0), "fpi-j") is None

    def test_unknown_table(self, book_path):
        with pytest.raises(InvalidParameter):
            load_parameter_book(book_path).table("9")

    def test_malformed(self, tmp_path):
        path = tmp_path / "book.json"
        path.write_text(json.dumps({"tables": {"2": {"sizes": [10], "problem": {"example": "4.1"},
                                                     "pairs": [{"phi": "abs", "psi": "abs", "methods": [
                                                         {"method": "nmj", "it": [1, 2]}]}]}}}),
                        encoding="utf-8")
        with pytest.raises(InvalidParameter):
            ParameterBook.load(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(VncpError):
            load_parameter_book(str(tmp_path / "missing.json"))
