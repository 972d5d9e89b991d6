"""
Run the Monge-Ampere solvers on the test problems: solve one problem, build an error
table over several grid sizes, or time the methods against each other.
"""

import logging
import sys
from argparse import ArgumentParser, Namespace
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path
from typing import Iterator, Optional, Sequence, TextIO

from monge_ampere.bench import (
    BenchSpec,
    format_table,
    format_timing,
    make_row,
    run_table,
    run_timing,
    solve_example,
    write_history_csv,
    write_solution_csv,
    write_table_csv,
    write_timing_csv,
)
from monge_ampere.cli.common import (
    add_common_args,
    add_example_args,
    add_method_arg,
    add_output_args,
    add_solver_args,
)
from monge_ampere.constants import DEFAULT_N_VALUES
from monge_ampere.enums import OutputFormat
from monge_ampere.methods.config import MethodConfig
from monge_ampere.problems import EXAMPLES
from monge_ampere.version import VERSION

logger = logging.getLogger(__name__)


def main() -> None:
    sys.exit(run(parse_args()))


def run(args: Namespace) -> int:
    """
    Carry out a parsed command line, returning the exit code
    """
    logging.basicConfig(level=logging.DEBUG if args.v else logging.WARNING)

    try:
        if args.command == "solve":
            return solve(args)
        elif args.command == "table":
            return table(args)
        else:
            return timing(args)
    except Exception as e:
        if not args.v:
            print(e, file=sys.stderr)
            return 1
        else:
            raise


def config_from_args(args: Namespace) -> MethodConfig:
    return replace(
        MethodConfig(),
        alpha=args.alpha,
        tolerance=args.tol,
        max_iterations=args.max_iters,
        stencil_width=args.stencil_width,
        delta=args.delta,
        g0=args.g0,
        initial_guess=args.initial_guess,
        poisson_solver=args.poisson_solver,
    )


@contextmanager
def open_output(filename: Optional[str]) -> Iterator[TextIO]:
    if filename is None:
        yield sys.stdout
    else:
        with Path(filename).open("w", newline="") as out:
            yield out


def _use_color(filename: Optional[str]) -> bool:
    return filename is None and sys.stdout.isatty()


def solve(args: Namespace) -> int:
    config = config_from_args(args)
    config.validate()
    report = solve_example(args.method, args.example, args.n, config)
    row = make_row(args.method, args.example, args.n, report)

    if args.format is OutputFormat.CSV:
        write_table_csv([row], sys.stdout)
    else:
        print(format_table([row], color=sys.stdout.isatty()))
        print(f"Stopped: {report.stop_reason.value}")

    if args.out is not None:
        with open_output(args.out) as out:
            write_history_csv(report, out)
        print(f"Iteration history written to {args.out}", file=sys.stderr)
    if args.solution_out is not None:
        with open_output(args.solution_out) as out:
            write_solution_csv(report, EXAMPLES[args.example](), out)
        print(f"Solution written to {args.solution_out}", file=sys.stderr)
    return 0


def table(args: Namespace) -> int:
    spec = BenchSpec(
        method=args.method,
        example=args.example,
        n_values=args.n,
        config=config_from_args(args),
        output_format=args.format,
    )
    rows = run_table(spec)

    with open_output(args.out) as out:
        if spec.output_format is OutputFormat.CSV:
            write_table_csv(rows, out)
        else:
            print(format_table(rows, color=_use_color(args.out)), file=out)

    return 1 if any(row.failure is not None for row in rows) else 0


def timing(args: Namespace) -> int:
    spec = BenchSpec(
        example=args.example,
        n_values=args.n,
        config=config_from_args(args),
        output_format=args.format,
    )
    rows = run_timing(spec, args.method)

    with open_output(args.out) as out:
        if spec.output_format is OutputFormat.CSV:
            write_timing_csv(rows, out)
        else:
            print(format_timing(rows), file=out)

    return 1 if any(row.failure is not None for row in rows) else 0


def parse_args(argv: Optional[Sequence[str]] = None) -> Namespace:
    parser = ArgumentParser(description=__doc__)
    add_common_args(parser)
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    solve_parser = commands.add_parser(
        "solve", help="Solve one example on one grid and report the error"
    )
    add_method_arg(solve_parser)
    add_example_args(solve_parser)
    solve_parser.add_argument(
        "--n", type=int, default=DEFAULT_N_VALUES[0], help="Nodes per side"
    )
    add_solver_args(solve_parser)
    add_output_args(
        solve_parser, out_help="Write the iteration history to this CSV file"
    )
    solve_parser.add_argument(
        "--solution-out",
        metavar="FILENAME",
        help="Write the nodal solution (x, y, u, exact, g) to this CSV file",
    )

    table_parser = commands.add_parser(
        "table", help="Error table of one method on one example over several N"
    )
    add_method_arg(table_parser)
    add_example_args(table_parser)
    table_parser.add_argument(
        "--n",
        type=int,
        nargs="*",
        default=list(DEFAULT_N_VALUES),
        help=f"Nodes per side, default: {' '.join(map(str, DEFAULT_N_VALUES))}",
    )
    add_solver_args(table_parser)
    add_output_args(table_parser)

    timing_parser = commands.add_parser(
        "timing", help="Wall clock time of full solves versus N"
    )
    add_method_arg(timing_parser, many=True)
    add_example_args(timing_parser)
    timing_parser.add_argument(
        "--n",
        type=int,
        nargs="*",
        default=list(DEFAULT_N_VALUES),
        help=f"Nodes per side, default: {' '.join(map(str, DEFAULT_N_VALUES))}",
    )
    add_solver_args(timing_parser)
    add_output_args(timing_parser)

    return parser.parse_args(argv)


if __name__ == "__main__":
    main()
