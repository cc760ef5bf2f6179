"""
CLI Command Handler
One method per subcommand: solve, bounds, sweep-tau, bench
"""
import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, TextIO, Tuple

import numpy as np

from core.experiment import (
    EXAMPLE_4_1,
    ExperimentRunner,
    ExperimentSpec,
    MethodSpec,
    ProblemSpec,
    bounds_methods,
    parse_method,
)
from model.functions import get_function
from model.generators import MatrixPair
from model.instance import OmegaChoice, VncpInstance, reformulation_residual
from solvers.report import SolveReport, SolveStatus
from storage.parameter_book import BookEntry, BookTable, ParameterBook, load_parameter_book
from storage.results import (
    ResultRow,
    ResultTable,
    SweepRow,
    default_metadata,
    save_result_table,
    write_sweep_csv,
)
from utils.config_manager import AppConfig, resolve_path
from utils.errors import InvalidParameter, VncpError
from utils.helpers import create_error_response, dump_json, ensure_directory, relative_difference
from utils.logger import LoggerMixin

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_CONVERGED = 2

ALL_FPI_METHODS = ("fpi-j", "fpi-gs", "fpi-sor")

# a converged cell should satisfy the modulus equation and u, v >= 0 to these tolerances
REFORMULATION_TOL = 1e-6
FEASIBILITY_TOL = 1e-6


class CommandHandler(LoggerMixin):
    """Runs CLI subcommands and maps their outcome to exit codes"""

    def __init__(self, config: AppConfig, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None):
        self.config = config
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.runner = ExperimentRunner(config)

    def dispatch(self, args: argparse.Namespace) -> int:
        commands = {
            "solve": self.solve_command,
            "bounds": self.bounds_command,
            "sweep-tau": self.sweep_tau_command,
            "bench": self.bench_command,
        }
        self.log_method_call(args.command, **{k: v for k, v in vars(args).items()
                                              if v is not None and k != "command"})
        try:
            return commands[args.command](args)
        except (VncpError, OSError) as e:
            self.log_error(f"{args.command} failed: {e}")
            self.stderr.write(dump_json(create_error_response(type(e).__name__, str(e))) + "\n")
            return EXIT_INPUT_ERROR

    # ----- argument plumbing -----

    def _problem(self, args: argparse.Namespace) -> ProblemSpec:
        if getattr(args, "matrix_a", None) or getattr(args, "matrix_b", None):
            return ProblemSpec.files(args.matrix_a, args.matrix_b)
        if args.example == EXAMPLE_4_1:
            if args.n is None:
                raise InvalidParameter("--example 4.1 needs --n")
            return ProblemSpec.example_4_1(args.n)
        if args.m is not None:
            return ProblemSpec.example_4_2(args.m, args.mu1, args.mu2)
        if args.n is None:
            raise InvalidParameter("--example 4.2 needs --m or --n")
        return ProblemSpec.example_4_2_by_dimension(args.n, args.mu1, args.mu2)

    def _solver_value(self, args: argparse.Namespace, name: str):
        value = getattr(args, name, None)
        return getattr(self.config.solver, name) if value is None else value

    def _experiment(self, args: argparse.Namespace, problem: ProblemSpec,
                    methods: List[MethodSpec], phi: str = None, psi: str = None) -> ExperimentSpec:
        return ExperimentSpec(
            problem=problem,
            phi=phi or args.phi,
            psi=psi or args.psi,
            methods=tuple(methods),
            omega_scale=float(self._solver_value(args, "omega_scale")),
            omega_file=getattr(args, "omega_file", None),
            tol=float(self._solver_value(args, "tol")),
            max_iter=int(self._solver_value(args, "max_iter")),
        )

    def _workers(self, args: argparse.Namespace) -> int:
        workers = getattr(args, "workers", None) or self.config.bench.workers
        if workers < 1:
            raise InvalidParameter(f"--workers must be at least 1, got {workers}")
        return workers

    def _book(self, args: argparse.Namespace) -> ParameterBook:
        return load_parameter_book(resolve_path(getattr(args, "book", None) or self.config.bench.parameter_book))

    def _emit(self, data) -> None:
        self.stdout.write(dump_json(data) + "\n")

    @staticmethod
    def _lemma_check(inst: VncpInstance, omega: OmegaChoice, report: SolveReport) -> Optional[float]:
        """Residual of the modulus equation at the final iterate (None when it cannot be evaluated)"""
        if report.status is SolveStatus.EVALUATION_ERROR or not np.all(np.isfinite(report.x_final)):
            return None
        try:
            return reformulation_residual(inst, omega, report.x_final)
        except VncpError:
            return None

    # ----- solve -----

    def solve_command(self, args: argparse.Namespace) -> int:
        """Solve one instance with one method and print the report as JSON"""
        method = parse_method(args.method, args.tau, args.sor_alpha)
        spec = self._experiment(args, self._problem(args), [method])
        self.log_info(f"Solving {spec.problem.kind} ({spec.phi},{spec.psi}) with {method.label}")

        inst = self.runner.build_instance(spec)
        omega = self.runner.build_omega(spec, inst.n)
        report = self.runner.run_method(inst, omega, method, spec)

        data = {
            "problem": spec.problem.to_dict(),
            "pair": inst.pair_label,
            "n": inst.n,
            "omega_scale": None if spec.omega_file else spec.omega_scale,
            "omega_file": spec.omega_file,
            "tol": spec.tol,
            "max_iter": spec.max_iter,
            "reformulation_residual": self._lemma_check(inst, omega, report),
        }
        data.update(report.to_dict(include_vectors=args.include_solution))
        self._emit(data)

        if report.converged:
            self.log_success(f"{report.method_label} converged in {report.iterations} steps")
            return EXIT_OK
        return EXIT_NOT_CONVERGED

    # ----- bounds -----

    def bounds_command(self, args: argparse.Namespace) -> int:
        """Norm constants and admissible tau ranges, optionally next to the tabulated ranges"""
        problem = self._problem(args)
        names = args.method or list(ALL_FPI_METHODS)
        book = self._book(args) if args.compare_table1 else None
        sor_alpha = args.sor_alpha
        if sor_alpha is None and any(name.endswith("sor") for name in names):
            sor_alpha = book.tau_reference_sor_alpha if book else 1.05
        methods = bounds_methods(names, sor_alpha)

        spec = self._experiment(args, problem, methods)
        inst = self.runner.build_instance(spec)
        omega = self.runner.build_omega(spec, inst.n)

        results = []
        for method in methods:
            bounds = self.runner.bounds(inst, omega, method)
            entry = {"method": method.name, "sor_alpha": method.sor_alpha}
            entry.update(bounds.triple.to_dict())
            entry.update(bounds.ranges.to_dict())
            if not bounds.ranges.feasible:
                self.log_warning(f"{method.name}: alpha(beta+gamma) = {bounds.triple.product:.4f} >= 1, "
                                 f"tau ranges are not guaranteed")
            if book is not None:
                entry["table1"] = self._table1_comparison(book, problem, method, bounds.ranges)
            results.append(entry)

        self._emit({
            "problem": problem.to_dict(),
            "pair": inst.pair_label,
            "n": inst.n,
            "omega_norm": omega.norm(),
            "methods": results,
        })
        return EXIT_OK

    def _table1_comparison(self, book: ParameterBook, problem: ProblemSpec,
                           method: MethodSpec, ranges) -> Optional[Dict]:
        ref = book.find_tau_reference(problem, method.name)
        if ref is None:
            return None
        rel_tol = self.config.bench.table1_rel_tol
        diff_spectral = relative_difference(ranges.upper_spectral, ref.upper_spectral)
        diff_weighted = relative_difference(ranges.upper_weighted, ref.upper_weighted)
        comparison = {
            "reference_spectral": ref.upper_spectral,
            "reference_weighted": ref.upper_weighted,
            "rel_diff_spectral": diff_spectral,
            "rel_diff_weighted": diff_weighted,
            "match_spectral": bool(ranges.feasible and diff_spectral <= rel_tol),
            "match_weighted": bool(ranges.feasible and diff_weighted <= rel_tol),
        }
        if method.sor_alpha is not None and method.sor_alpha != book.tau_reference_sor_alpha:
            comparison["note"] = f"reference uses sor_alpha={book.tau_reference_sor_alpha:g}"
        if not (comparison["match_spectral"] and comparison["match_weighted"]):
            self.log_warning(f"{method.name}: computed tau ranges differ from the tabulated "
                             f"(0,{ref.upper_spectral:g}) / (0,{ref.upper_weighted:g})")
        return comparison

    # ----- sweep-tau -----

    def _tau_grid(self, args: argparse.Namespace, inst: VncpInstance, omega: OmegaChoice,
                  method: MethodSpec) -> List[float]:
        if args.taus:
            taus = [float(t) for t in args.taus]
        elif args.grid_points is not None:
            bounds = self.runner.bounds(inst, omega, method)
            if not bounds.ranges.feasible or not math.isfinite(bounds.ranges.upper_spectral):
                raise InvalidParameter(
                    f"{method.name}: alpha(beta+gamma) = {bounds.triple.product:.4f} >= 1, no guaranteed "
                    f"tau range to place a grid in; pass --taus or --tau-start/--tau-stop/--tau-step")
            k = int(args.grid_points)
            upper = bounds.ranges.upper_spectral
            taus = [upper * i / (k + 1) for i in range(1, k + 1)]
        elif args.tau_start is not None and args.tau_stop is not None and args.tau_step is not None:
            if not args.tau_step > 0:
                raise InvalidParameter(f"--tau-step must be positive, got {args.tau_step}")
            grid = np.arange(args.tau_start, args.tau_stop + args.tau_step / 2, args.tau_step)
            taus = [round(float(t), 12) for t in grid]
        else:
            raise InvalidParameter("give --taus, --grid-points or --tau-start/--tau-stop/--tau-step")

        if len(taus) < 2:
            raise InvalidParameter(f"a tau sweep needs at least 2 values, got {len(taus)}")
        bad = [t for t in taus if not t > 0]
        if bad:
            raise InvalidParameter(f"tau must be positive, got {bad[0]}")
        return taus

    def sweep_tau_command(self, args: argparse.Namespace) -> int:
        """IT against tau for one fixed-point method; plot-ready CSV"""
        if not args.method.strip().lower().startswith("fpi"):
            raise InvalidParameter(f"sweep-tau needs a fixed-point method (fpi-j, fpi-gs, fpi-sor), got {args.method}")
        base = parse_method(args.method, 1.0, args.sor_alpha)
        spec = self._experiment(args, self._problem(args), [base])
        inst = self.runner.build_instance(spec)
        omega = self.runner.build_omega(spec, inst.n)
        taus = self._tau_grid(args, inst, omega, base)
        self.log_info(f"Sweeping {len(taus)} tau values for {base.name} on {inst.name} {inst.pair_label}")

        def run(tau: float) -> SweepRow:
            report = self.runner.run_method(inst, omega, base.with_tau(tau), spec)
            it = spec.max_iter if report.status is SolveStatus.DIVERGED else report.iterations
            return SweepRow(tau=tau, it=it, status=report.status.value, final_res=report.final_residual)

        with ThreadPoolExecutor(max_workers=self._workers(args)) as pool:
            rows = list(pool.map(run, taus))

        converged = [row for row in rows if row.status == SolveStatus.CONVERGED.value]
        if converged:
            best = min(converged, key=lambda row: (row.it, row.tau))
            self.log_info(f"Fewest iterations: tau={best.tau:g} with IT={best.it}")
        else:
            self.log_warning("No tau in the grid converged")

        if args.out:
            ensure_directory(os.path.dirname(args.out))
            metadata = {"method": base.name, "sor_alpha": base.sor_alpha, "problem": spec.problem.to_dict(),
                        "pair": inst.pair_label, "tol": spec.tol, "max_iter": spec.max_iter}
            with open(args.out, "w", encoding="utf-8", newline="") as f:
                write_sweep_csv(rows, f, metadata)
            self.log_success(f"Sweep written to {args.out}")
        else:
            write_sweep_csv(rows, self.stdout)
        return EXIT_OK if converged else EXIT_NOT_CONVERGED

    # ----- bench -----

    def _bench_cell(self, table: BookTable, entry: BookEntry, pair: MatrixPair, n: int,
                    spec_args: argparse.Namespace) -> ResultRow:
        method = entry.method
        spec = self._experiment(spec_args, table.problem_for(n), [method], entry.phi, entry.psi)
        reference_it, reference_time = table.reference(entry, n)
        row = ResultRow(
            table=table.table_id, pair=entry.pair_label, method=method.label, n=n, it=0,
            wall_time=0.0, status="Error", final_res=math.nan, tau=method.tau,
            sor_alpha=method.sor_alpha, reference_it=reference_it, reference_time=reference_time,
        )
        try:
            inst = pair.instance(get_function(entry.phi), get_function(entry.psi))
            omega = self.runner.build_omega(spec, inst.n)
            report = self.runner.run_method(inst, omega, method, spec)
        except VncpError as e:
            self.log_error(f"{entry.pair_label} {method.label} n={n}: {e}")
            row.message = str(e)
            return row

        row.it = report.iterations
        row.wall_time = report.wall_time
        row.status = report.status.value
        row.final_res = report.final_residual
        row.min_u = report.min_u
        row.min_v = report.min_v
        row.reform_res = self._lemma_check(inst, omega, report)
        if report.converged and row.reform_res is not None:
            row.lemma_ok = bool(row.reform_res < REFORMULATION_TOL
                                and row.min_u > -FEASIBILITY_TOL and row.min_v > -FEASIBILITY_TOL)
        row.message = report.message
        if reference_it is not None:
            row.delta_it = row.it - reference_it
        return row

    @staticmethod
    def _relative_performance(rows: List[ResultRow]) -> List[Dict]:
        """Best fixed-point method against best modulus method per (pair, n)"""
        groups: Dict[Tuple[str, int], List[ResultRow]] = {}
        for row in rows:
            if row.converged:
                groups.setdefault((row.pair, row.n), []).append(row)
        summary = []
        for (pair, n), cells in groups.items():
            fpi = [r for r in cells if r.method.startswith("FPI")]
            nms = [r for r in cells if r.method.startswith("NM")]
            if not fpi or not nms:
                continue
            best_fpi = min(fpi, key=lambda r: (r.it, r.wall_time))
            best_nms = min(nms, key=lambda r: (r.it, r.wall_time))
            summary.append({
                "pair": pair,
                "n": n,
                "best_fpi": best_fpi.method,
                "best_fpi_it": best_fpi.it,
                "best_nm": best_nms.method,
                "best_nm_it": best_nms.it,
                "best_fpi_time": best_fpi.wall_time,
                "best_nm_time": best_nms.wall_time,
                "fpi_fewer_iterations": best_fpi.it < best_nms.it,
                "fpi_faster": best_fpi.wall_time < best_nms.wall_time,
            })
        return summary

    @staticmethod
    def _lemma_summary(rows: List[ResultRow]) -> Dict:
        converged = [r for r in rows if r.converged]
        reform = [r.reform_res for r in converged if r.reform_res is not None]
        return {
            "converged_cells": len(converged),
            "max_reformulation_residual": max(reform) if reform else None,
            "reformulation_tol": REFORMULATION_TOL,
            "lemma_breaches": sum(1 for r in converged if r.lemma_ok is False),
            "min_u": min((r.min_u for r in converged), default=None),
            "min_v": min((r.min_v for r in converged), default=None),
        }

    def bench_command(self, args: argparse.Namespace) -> int:
        """Run every (pair, method, n) cell of a benchmark table with the book's parameters"""
        book = self._book(args)
        table = book.table(args.table)
        sizes = [int(n) for n in (args.n or [table.sizes[0]])]
        pairs = {n: self.runner.build_pair(table.problem_for(n)) for n in sizes}
        cells = [(entry, n) for entry in table.entries for n in sizes]
        self.log_info(f"Table {table.table_id}: {len(cells)} cells over n = {', '.join(map(str, sizes))}")

        with ThreadPoolExecutor(max_workers=self._workers(args)) as pool:
            rows = list(pool.map(lambda cell: self._bench_cell(table, cell[0], pairs[cell[1]], cell[1], args),
                                 cells))

        result = ResultTable(rows=rows, metadata=default_metadata(
            table.table_id, book.version, title=table.title, sizes=sizes,
            tol=float(self._solver_value(args, "tol")),
            max_iter=int(self._solver_value(args, "max_iter")),
            omega_scale=float(self._solver_value(args, "omega_scale")),
        ))
        out = args.out or os.path.join(self.config.bench.output_dir, f"table{table.table_id}")
        files = save_result_table(result, out)

        threshold = self.config.bench.it_mismatch_threshold
        mismatches = result.mismatches(threshold)
        for row in mismatches:
            self.log_warning(f"{row.pair} {row.method} n={row.n}: IT {row.it} vs {row.reference_it}")
        breaches = [r for r in rows if r.lemma_ok is False]
        if breaches:
            self.log_warning(f"{len(breaches)} converged cells miss the reformulation tolerance {REFORMULATION_TOL:g}")
        failed = [r for r in rows if not r.converged]

        self._emit({
            "table": table.table_id,
            "cells": len(rows),
            "failed_cells": len(failed),
            "files": files,
            "mismatch_threshold": threshold,
            "mismatches": len(mismatches),
            "relative_performance": self._relative_performance(rows),
            "lemma_checks": self._lemma_summary(rows),
        })
        self.log_success(f"Table {table.table_id}: {len(rows)} cells, {len(mismatches)} with |dIT| > {threshold}")
        return EXIT_OK
