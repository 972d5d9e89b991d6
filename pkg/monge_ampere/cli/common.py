from argparse import ArgumentParser

from monge_ampere.constants import (
    DEFAULT_ALPHA,
    DEFAULT_DELTA,
    DEFAULT_G0,
    DEFAULT_STENCIL_WIDTH,
    DEFAULT_TOLERANCE,
)
from monge_ampere.enums import InitialGuess, Method, OutputFormat, PoissonSolver
from monge_ampere.problems import EXAMPLES


def add_common_args(parser: ArgumentParser) -> None:
    parser.add_argument(
        "-v",
        help="Verbose mode",
        action="store_true",
    )


def add_example_args(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--example",
        type=int,
        choices=sorted(EXAMPLES),
        default=1,
        help="Test problem to solve, default: 1",
    )


def add_output_args(
    parser: ArgumentParser,
    out_help: str = "Write results to this file instead of stdout",
) -> None:
    parser.add_argument("--out", metavar="FILENAME", help=out_help)
    parser.add_argument(
        "--format",
        type=OutputFormat,
        choices=list(OutputFormat),
        default=OutputFormat.TEXT,
        help=f"Output format, default: {OutputFormat.TEXT}",
    )


def add_method_arg(parser: ArgumentParser, many: bool = False) -> None:
    if many:
        parser.add_argument(
            "--method",
            type=Method,
            choices=list(Method),
            nargs="+",
            default=list(Method),
            help="Methods to time, default: all of them",
        )
    else:
        parser.add_argument(
            "--method",
            type=Method,
            choices=list(Method),
            default=Method.B,
            help=f"Solution method, default: {Method.B}",
        )


def add_solver_args(parser: ArgumentParser) -> None:
    """
    Flags overriding MethodConfig fields. Anything left out keeps the config default.
    """
    parser.add_argument(
        "--alpha",
        type=float,
        default=DEFAULT_ALPHA,
        help=f"Method C relaxation in (0, 1), default: {DEFAULT_ALPHA}",
    )
    parser.add_argument(
        "--tol",
        type=float,
        default=DEFAULT_TOLERANCE,
        help=f"Outer iteration tolerance, default: {DEFAULT_TOLERANCE}",
    )
    parser.add_argument(
        "--max-iters",
        type=int,
        help="Outer iteration cap, default depends on the method",
    )
    parser.add_argument(
        "--stencil-width",
        type=int,
        default=DEFAULT_STENCIL_WIDTH,
        help=f"Wide stencil width, default: {DEFAULT_STENCIL_WIDTH}",
    )
    parser.add_argument(
        "--delta",
        type=float,
        default=DEFAULT_DELTA,
        help=f"Eigenvalue clamp of Method A, default: {DEFAULT_DELTA}",
    )
    parser.add_argument(
        "--g0",
        type=float,
        default=DEFAULT_G0,
        help=f"Starting value of g for Methods B and C, default: {DEFAULT_G0}",
    )
    parser.add_argument(
        "--initial-guess",
        type=InitialGuess,
        choices=list(InitialGuess),
        default=InitialGuess.POISSON,
        help=f"Method A starting point, default: {InitialGuess.POISSON}",
    )
    parser.add_argument(
        "--poisson-solver",
        type=PoissonSolver,
        choices=list(PoissonSolver),
        default=PoissonSolver.AUTO,
        help=f"Linear solver for Poisson problems, default: {PoissonSolver.AUTO}",
    )
