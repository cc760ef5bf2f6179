"""
Main Entry Point for the VNCP splitting-iteration benchmark CLI

    python src/main.py solve  --example 4.1 --n 1000 --phi abs --psi abs --method fpi-gs --tau 0.95
    python src/main.py bounds --example 4.2 --n 1600 --mu1 8 --mu2 4 --compare-table1
    python src/main.py sweep-tau --example 4.1 --n 500 --method fpi-gs --tau-start 0.1 --tau-stop 1.0 --tau-step 0.1
    python src/main.py bench  --table 2 --n 1000 --out results/table2
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from utils import ConfigManager, setup_logging
from utils.errors import InvalidParameter
from utils.helpers import create_error_response, dump_json
from handlers.cli_handler import CommandHandler, EXIT_INPUT_ERROR
from model.functions import CATALOG

METHOD_CHOICES = ["nmj", "nmgs", "nmsor", "fpi-j", "fpi-gs", "fpi-sor"]


class CliArgumentParser(argparse.ArgumentParser):
    """Usage errors are input errors (exit 1), not argparse's exit 2"""

    def error(self, message):
        raise InvalidParameter(f"{self.prog}: {message}")


def _add_common_args(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="settings file (overrides ENVIRONMENT / CONFIG_PATH)")
    parser.add_argument("--verbose", action="store_true", help="debug logging")


def _add_problem_args(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("problem")
    group.add_argument("--example", choices=["4.1", "4.2"], default="4.1")
    group.add_argument("--n", type=int, help="dimension (Example 4.2: a perfect square)")
    group.add_argument("--m", type=int, help="grid side of Example 4.2 (n = m^2)")
    group.add_argument("--mu1", type=float, default=4.0)
    group.add_argument("--mu2", type=float, default=4.0)
    group.add_argument("--matrix-a", dest="matrix_a", help="Matrix Market file for A")
    group.add_argument("--matrix-b", dest="matrix_b", help="Matrix Market file for B")
    group.add_argument("--phi", default="abs", choices=sorted(CATALOG))
    group.add_argument("--psi", default="abs", choices=sorted(CATALOG))


def _add_solver_args(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("solver")
    group.add_argument("--omega-scale", dest="omega_scale", type=float, help="Omega = scale * I (default 5)")
    group.add_argument("--omega-file", dest="omega_file", help="diagonal of Omega, one positive value per line")
    group.add_argument("--tol", type=float, help="stop when RES < tol (default 1e-8)")
    group.add_argument("--max-iter", dest="max_iter", type=int, help="iteration cap (default 1000)")


def build_parser() -> argparse.ArgumentParser:
    common = CliArgumentParser(add_help=False)
    _add_common_args(common)

    parser = CliArgumentParser(prog="vncp", description="Splitting iterations for vertical nonlinear complementarity problems")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common], help="solve one instance with one method")
    _add_problem_args(solve)
    _add_solver_args(solve)
    solve.add_argument("--method", required=True, choices=METHOD_CHOICES)
    solve.add_argument("--tau", type=float)
    solve.add_argument("--sor-alpha", dest="sor_alpha", type=float)
    solve.add_argument("--include-solution", dest="include_solution", action="store_true",
                       help="include x (and y) in the JSON output")

    bounds = sub.add_parser("bounds", parents=[common], help="norm constants and admissible tau ranges")
    _add_problem_args(bounds)
    _add_solver_args(bounds)
    bounds.add_argument("--method", action="append", choices=METHOD_CHOICES,
                        help="repeatable; default: fpi-j, fpi-gs and fpi-sor")
    bounds.add_argument("--sor-alpha", dest="sor_alpha", type=float)
    bounds.add_argument("--compare-table1", dest="compare_table1", action="store_true")
    bounds.add_argument("--book", help="parameter book with the reference ranges")

    sweep = sub.add_parser("sweep-tau", parents=[common], help="iteration count against tau")
    _add_problem_args(sweep)
    _add_solver_args(sweep)
    sweep.add_argument("--method", required=True, choices=["fpi-j", "fpi-gs", "fpi-sor"])
    sweep.add_argument("--sor-alpha", dest="sor_alpha", type=float)
    sweep.add_argument("--taus", type=float, nargs="+")
    sweep.add_argument("--tau-start", dest="tau_start", type=float)
    sweep.add_argument("--tau-stop", dest="tau_stop", type=float)
    sweep.add_argument("--tau-step", dest="tau_step", type=float)
    sweep.add_argument("--grid-points", dest="grid_points", type=int,
                       help="K values spaced inside the computed guaranteed tau range")
    sweep.add_argument("--workers", type=int)
    sweep.add_argument("--out", help="CSV file (default: stdout)")

    bench = sub.add_parser("bench", parents=[common], help="reproduce a benchmark table")
    bench.add_argument("--table", required=True, choices=["2", "3", "4"])
    bench.add_argument("--n", type=int, nargs="+", help="dimensions (default: the first tabulated one)")
    bench.add_argument("--book", help="parameter book (default from config)")
    bench.add_argument("--out", help="output path without extension; writes .csv and .json")
    bench.add_argument("--workers", type=int)
    _add_solver_args(bench)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, load settings, run the subcommand; returns the exit code"""
    load_dotenv()

    try:
        args = build_parser().parse_args(argv)
    except InvalidParameter as e:
        sys.stderr.write(dump_json(create_error_response("InvalidParameter", str(e))) + "\n")
        return EXIT_INPUT_ERROR

    config_manager = ConfigManager(args.config)
    config = config_manager.config
    if args.verbose:
        config.logging.verbose = True

    logger = setup_logging(config.logging)
    log = logger.get_logger("Main")
    log.debug(f"📋 {config_manager.describe()}")

    is_valid, errors = config_manager.validate_config()
    if not is_valid:
        for error in errors:
            log.warning(f"  - {error}")

    return CommandHandler(config).dispatch(args)


if __name__ == '__main__':
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.stderr.write("\n👋 Interrupted\n")
        sys.exit(130)
