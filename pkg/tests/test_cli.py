import io
import json
import os

import numpy as np
import pytest

from handlers.cli_handler import CommandHandler
from linalg.matrix_market import write_matrix_market
from linalg.sparse import SparseMatrix
from main import main
from storage.results import ResultRow, load_result_table, read_sweep_csv


def _run(capsys, test_config_path, *argv):
    code = main([*argv, "--config", test_config_path])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolveCommand:
    def test_small_problem(self, capsys, test_config_path):
        code, out, _ = _run(capsys, test_config_path, "solve", "--example", "4.1", "--n", "2",
                            "--phi", "zero", "--psi", "zero", "--method", "nmj", "--include-solution")
        assert code == 0
        data = json.loads(out)
        assert data["status"] == "Converged"
        assert data["method"] == "NMJ"
        assert data["n"] == 2
        assert np.max(np.abs(data["x_final"])) < 1e-3
        assert data["reformulation_residual"] < 1e-3

    def test_vectors_are_optional(self, capsys, test_config_path):
        code, out, _ = _run(capsys, test_config_path, "solve", "--n", "20", "--method", "fpi-gs", "--tau", "0.95")
        assert code == 0
        data = json.loads(out)
        assert "x_final" not in data
        assert data["method"] == "FPI-GS(tau=0.95)"

    def test_missing_sor_alpha(self, capsys, test_config_path):
        code, out, err = _run(capsys, test_config_path, "solve", "--n", "20", "--method", "fpi-sor", "--tau", "1.01")
        assert code == 1
        assert out == ""
        assert '"success": false' in err

    def test_unknown_function(self, capsys, test_config_path):
        code, _, _ = _run(capsys, test_config_path, "solve", "--n", "20", "--phi", "exp", "--method", "nmj")
        assert code == 1

    def test_non_convergence_exit_code(self, capsys, test_config_path):
        code, out, _ = _run(capsys, test_config_path, "solve", "--n", "50", "--method", "nmgs", "--max-iter", "1")
        assert code == 2
        assert json.loads(out)["status"] == "MaxIterReached"

    def test_repeated_runs_are_identical(self, capsys, test_config_path):
        argv = ("solve", "--n", "100", "--phi", "abs", "--psi", "abs", "--method", "fpi-gs",
                "--tau", "0.95", "--include-solution")
        runs = []
        for _ in range(2):
            code, out, _ = _run(capsys, test_config_path, *argv)
            assert code == 0
            data = json.loads(out)
            data.pop("wall_time")
            runs.append(data)
        assert runs[0] == runs[1]

    def test_example_4_2_needs_square_dimension(self, capsys, test_config_path):
        code, _, _ = _run(capsys, test_config_path, "solve", "--example", "4.2", "--n", "50", "--method", "nmj")
        assert code == 1


class TestBoundsCommand:
    def test_matrix_market_input(self, capsys, test_config_path, tmp_path):
        a_path, b_path = str(tmp_path / "a.mtx"), str(tmp_path / "b.mtx")
        write_matrix_market(SparseMatrix.from_dense(2.0 * np.eye(3)), a_path)
        write_matrix_market(SparseMatrix.identity(3), b_path)
        code, out, _ = _run(capsys, test_config_path, "bounds", "--matrix-a", a_path, "--matrix-b", b_path,
                            "--phi", "zero", "--psi", "zero", "--omega-scale", "1", "--method", "fpi-j")
        assert code == 0
        entry = json.loads(out)["methods"][0]
        assert entry["alpha"] == pytest.approx(1.0 / 3.0)
        assert entry["beta"] == 0.0
        assert entry["gamma"] == 1.0
        assert entry["feasible"] is True
        assert entry["tau_range_weighted"][1] == pytest.approx(1.5)

    def test_undecodable_matrix_file(self, capsys, test_config_path, tmp_path):
        a_path, b_path = tmp_path / "a.mtx", str(tmp_path / "b.mtx")
        a_path.write_bytes(b"%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 \xff2.0\n")
        write_matrix_market(SparseMatrix.identity(1), b_path)
        code, out, err = _run(capsys, test_config_path, "bounds", "--matrix-a", str(a_path), "--matrix-b", b_path,
                              "--method", "fpi-j")
        assert code == 1
        assert out == ""
        assert '"ParseError"' in err
        assert "line 3" in err

    def test_compare_with_tabulated_ranges(self, capsys, test_config_path):
        code, out, _ = _run(capsys, test_config_path, "bounds", "--n", "50", "--compare-table1")
        assert code == 0
        methods = json.loads(out)["methods"]
        assert [m["method"] for m in methods] == ["fpi-j", "fpi-gs", "fpi-sor"]
        assert methods[0]["table1"]["reference_spectral"] == 1.1667
        assert methods[2]["sor_alpha"] == 1.05
        assert "rel_diff_weighted" in methods[1]["table1"]


class TestSweepCommand:
    def test_sweep_to_stdout(self, capsys, test_config_path):
        code, out, _ = _run(capsys, test_config_path, "sweep-tau", "--n", "500", "--method", "fpi-gs",
                            "--tau-start", "0.1", "--tau-stop", "1.0", "--tau-step", "0.1")
        assert code == 0
        rows = read_sweep_csv(io.StringIO(out))
        assert [row.tau for row in rows] == pytest.approx([0.1 * k for k in range(1, 11)])
        assert all(row.status == "Converged" for row in rows)

    def test_sweep_to_file(self, capsys, test_config_path, tmp_path):
        out_path = str(tmp_path / "sweep" / "fpi_gs.csv")
        code, out, _ = _run(capsys, test_config_path, "sweep-tau", "--n", "50", "--method", "fpi-gs",
                            "--taus", "0.95", "50.0", "--out", out_path)
        assert code == 0
        assert out == ""
        with open(out_path, encoding="utf-8") as f:
            text = f.read()
        assert text.startswith("# ")
        rows = read_sweep_csv(io.StringIO(text))
        assert rows[0].status == "Converged"
        assert rows[1].status == "Diverged"
        assert rows[1].it == 1000

    def test_single_value_is_rejected(self, capsys, test_config_path):
        code, _, _ = _run(capsys, test_config_path, "sweep-tau", "--n", "50", "--method", "fpi-gs",
                          "--taus", "0.95")
        assert code == 1

    def test_modulus_method_is_rejected(self, capsys, test_config_path):
        code, _, _ = _run(capsys, test_config_path, "sweep-tau", "--n", "50", "--method", "nmgs",
                          "--taus", "0.5", "1.0")
        assert code == 1


class TestBenchCommand:
    def test_small_table(self, capsys, test_config_path, tmp_path):
        out_base = str(tmp_path / "bench" / "table2")
        code, out, _ = _run(capsys, test_config_path, "bench", "--table", "2", "--n", "8", "--out", out_base)
        assert code == 0
        summary = json.loads(out)
        assert summary["cells"] == 36
        assert os.path.exists(summary["files"]["csv"])
        assert os.path.exists(summary["files"]["json"])

        table = load_result_table(summary["files"]["csv"])
        assert len(table.rows) == 36
        assert all(row.reference_it is None for row in table.rows)
        assert table.metadata["table"] == "2"
        assert table.metadata["sizes"] == [8]
        assert {row.pair for row in table.rows} == {"(abs,abs)", "(sin,cos)", "(sin,abs)", "(abs,sin)",
                                                    "(abs,rational)", "(sin,rational)"}

        converged = [row for row in table.rows if row.converged]
        for row in converged:
            expected = row.reform_res < 1e-6 and row.min_u > -1e-6 and row.min_v > -1e-6
            assert row.lemma_ok is expected
        assert summary["lemma_checks"]["lemma_breaches"] == sum(1 for row in converged if row.lemma_ok is False)
        assert all(row.lemma_ok is None for row in table.rows if not row.converged)

        # v stays near 1 for psi = cos, so the modulus equation residual is at most 2 RES there
        sin_cos = [row for row in converged if row.pair == "(sin,cos)"]
        assert sin_cos
        assert all(row.lemma_ok for row in sin_cos)

    def test_repeated_runs_are_identical(self, capsys, test_config_path, tmp_path):
        tables = []
        for name in ("first", "second"):
            code, out, _ = _run(capsys, test_config_path, "bench", "--table", "3", "--n", "16",
                                "--out", str(tmp_path / name / "table3"))
            assert code == 0
            tables.append(load_result_table(json.loads(out)["files"]["csv"]))
        first, second = tables
        assert [(r.key(), r.status, r.it, repr(r.final_res)) for r in first.rows] == \
            [(r.key(), r.status, r.it, repr(r.final_res)) for r in second.rows]

    def test_relative_performance_needs_strictly_fewer_iterations(self):
        def row(method, it, wall_time):
            return ResultRow(table="4", pair="(abs,abs)", method=method, n=1600, it=it,
                             wall_time=wall_time, status="Converged", final_res=1e-9)

        rows = [row("NMJ", 40, 0.01), row("NMGS", 33, 0.50), row("FPI-GS(tau=1.0)", 33, 0.20),
                row("FPI-J(tau=1.0)", 50, 0.001)]
        summary = CommandHandler._relative_performance(rows)
        assert len(summary) == 1
        cell = summary[0]
        assert cell["best_fpi_it"] == cell["best_nm_it"] == 33
        assert cell["fpi_fewer_iterations"] is False
        assert cell["best_fpi_time"] == 0.20
        assert cell["best_nm_time"] == 0.50
        assert cell["fpi_faster"] is True

        rows.append(row("FPI-SOR(tau=1.01)", 30, 0.90))
        cell = CommandHandler._relative_performance(rows)[0]
        assert cell["fpi_fewer_iterations"] is True
        assert cell["fpi_faster"] is False

    def test_unknown_table(self, capsys, test_config_path):
        code, _, _ = _run(capsys, test_config_path, "bench", "--table", "7")
        assert code == 1
