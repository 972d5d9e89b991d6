"""
Benchmark harness: run the methods on the test problems over a range of grid sizes
and collect error tables, timings and iteration histories as CSV or text.
"""

import logging
import math
from csv import DictReader, DictWriter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, TextIO

import numpy as np
from colorama import Fore, Style
from tqdm import tqdm

from monge_ampere.constants import DEFAULT_N_VALUES
from monge_ampere.enums import Method, OutputFormat
from monge_ampere.grid import Grid2D, build_grid
from monge_ampere.methods.config import MethodConfig
from monge_ampere.methods.poisson_iteration import method_b_solve, method_c_solve
from monge_ampere.methods.report import SolveReport
from monge_ampere.methods.wide_stencil import method_a_euler, method_a_newton
from monge_ampere.problems import EXAMPLES, Problem, linf_error

logger = logging.getLogger(__name__)

Solver = Callable[[Problem, Grid2D, MethodConfig], SolveReport]

SOLVERS: dict[Method, Solver] = {
    Method.A_EULER: method_a_euler,
    Method.A_NEWTON: method_a_newton,
    Method.B: method_b_solve,
    Method.C: method_c_solve,
}

# Errors published for the three methods, by (method letter, example) and then N
PUBLISHED_ERRORS: dict[tuple[str, int], dict[int, float]] = {
    ("A", 1): {31: 2.965e-4, 45: 3.052e-4, 63: 2.801e-4, 89: 8.035e-4, 127: 2.015e-4},
    ("B", 1): {31: 4.226e-4, 45: 2.202e-4, 63: 1.190e-4, 89: 6.494e-5, 127: 3.888e-5},
    ("C", 1): {31: 1.8e-3, 45: 1.8e-3, 63: 1.7e-3, 89: 1.7e-3, 127: 1.7e-3},
    ("A", 2): {31: 5.806e-4, 45: 4.92e-4, 63: 4.914e-4, 89: 4.085e-4, 127: 4.056e-4},
    ("B", 2): {31: 6.853e-4, 45: 6.719e-4, 63: 2.733e-4, 89: 2.09e-5, 127: 1.08e-5},
    ("C", 2): {31: 8.794e-4, 45: 8.727e-4, 63: 8.601e-4, 89: 8.173e-4, 127: 8.164e-4},
    ("A", 3): {31: 1.7e-3, 45: 1.5e-3, 63: 8.9e-4, 89: 8.9e-4, 127: 8.2e-4},
    ("B", 3): {31: 5.1e-3, 45: 4.8e-3, 63: 3.9e-3, 89: 3.1e-3, 127: 2.4e-3},
    ("C", 3): {31: 5.7e-3, 45: 5.5e-3, 63: 5.5e-3, 89: 5.5e-3, 127: 5.5e-3},
}

# Order that the BenchRow fields will be written in each CSV row
CSV_FIELDS = (
    "method",
    "example",
    "N",
    "error",
    "iters",
    "seconds",
    "converged",
    "min_lambda1",
    "min_gtilde",
)

TIMING_CSV_FIELDS = ("method", "N", "seconds")
HISTORY_CSV_FIELDS = ("iteration", "residual", "increment")
SOLUTION_CSV_FIELDS = ("x", "y", "u", "exact", "g")


def published_error(method: Method, example: int, n: int) -> Optional[float]:
    return PUBLISHED_ERRORS.get((method.column, example), {}).get(n)


def parse_bool(s: str) -> bool:
    if s.lower() == "true":
        return True
    elif s.lower() == "false":
        return False
    else:
        raise ValueError(f"Could not parse '{s}' as true/false")


def _format_float(value: float) -> str:
    # 17 significant digits, enough to read back the exact same double
    return f"{value:.16e}"


@dataclass
class BenchRow:
    method: Method
    example: int
    n: int
    error: float
    iterations: int
    seconds: float
    converged: bool
    min_lambda1: float
    min_gtilde: float

    # Set when the solve raised instead of returning a report. Not written to CSV.
    failure: Optional[str] = field(default=None, compare=False)

    def to_csv_row(self) -> dict[str, str]:
        return {
            "method": str(self.method),
            "example": str(self.example),
            "N": str(self.n),
            "error": _format_float(self.error),
            "iters": str(self.iterations),
            "seconds": _format_float(self.seconds),
            "converged": str(self.converged).lower(),
            "min_lambda1": _format_float(self.min_lambda1),
            "min_gtilde": _format_float(self.min_gtilde),
        }

    @classmethod
    def from_csv_row(cls, row: dict[str, str]) -> "BenchRow":
        return cls(
            method=Method(row["method"]),
            example=int(row["example"]),
            n=int(row["N"]),
            error=float(row["error"]),
            iterations=int(row["iters"]),
            seconds=float(row["seconds"]),
            converged=parse_bool(row["converged"]),
            min_lambda1=float(row["min_lambda1"]),
            min_gtilde=float(row["min_gtilde"]),
        )


@dataclass
class TimingRow:
    method: Method
    n: int
    seconds: float
    failure: Optional[str] = field(default=None, compare=False)

    def to_csv_row(self) -> dict[str, str]:
        return {
            "method": str(self.method),
            "N": str(self.n),
            "seconds": _format_float(self.seconds),
        }

    @classmethod
    def from_csv_row(cls, row: dict[str, str]) -> "TimingRow":
        return cls(Method(row["method"]), int(row["N"]), float(row["seconds"]))


@dataclass
class BenchSpec:
    method: Method = Method.B
    example: int = 1
    n_values: Sequence[int] = DEFAULT_N_VALUES
    config: MethodConfig = field(default_factory=MethodConfig)
    output_format: OutputFormat = OutputFormat.TEXT

    def validate(self) -> None:
        """
        Raises a ValueError if something is wrong with this BenchSpec
        """
        if self.example not in EXAMPLES:
            raise ValueError(
                f"Unknown example {self.example}, pick one of {sorted(EXAMPLES)}"
            )
        for n in self.n_values:
            if n < 3:
                raise ValueError(f"N must be at least 3, got {n}")
        self.config.validate()


def solve_example(
    method: Method, example: int, n: int, config: MethodConfig
) -> SolveReport:
    problem = EXAMPLES[example]()
    grid = build_grid(problem.domain, n)
    return SOLVERS[method](problem, grid, config)


def make_row(method: Method, example: int, n: int, report: SolveReport) -> BenchRow:
    problem = EXAMPLES[example]()
    return BenchRow(
        method=method,
        example=example,
        n=n,
        error=linf_error(report.solution, problem),
        iterations=report.iterations,
        seconds=report.seconds,
        converged=report.converged,
        min_lambda1=report.min_lambda1,
        min_gtilde=report.min_gtilde,
    )


def run_solve(method: Method, example: int, n: int, config: MethodConfig) -> BenchRow:
    """
    Solve one example at one grid size. A solve that raises still gives a row,
    with NaN values and the failure message.
    """
    try:
        report = solve_example(method, example, n, config)
    except (ValueError, RuntimeError) as e:
        logger.error(f"Method {method}, example {example}, N={n} failed: {e}")
        nan = float("nan")
        return BenchRow(
            method, example, n, nan, 0, nan, False, nan, nan, failure=str(e)
        )

    return make_row(method, example, n, report)


def run_table(spec: BenchSpec, progress: bool = True) -> list[BenchRow]:
    spec.validate()
    return [
        run_solve(spec.method, spec.example, n, spec.config)
        for n in tqdm(spec.n_values, disable=not progress)
    ]


def run_timing(
    spec: BenchSpec, methods: Iterable[Method], progress: bool = True
) -> list[TimingRow]:
    spec.validate()
    jobs = [(method, n) for method in methods for n in spec.n_values]
    rows = []
    for method, n in tqdm(jobs, disable=not progress):
        row = run_solve(method, spec.example, n, spec.config)
        rows.append(TimingRow(method, n, row.seconds, failure=row.failure))
    return rows


def write_table_csv(rows: Iterable[BenchRow], out: TextIO) -> None:
    writer = DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.to_csv_row())


def read_table_csv(source: TextIO) -> list[BenchRow]:
    return [BenchRow.from_csv_row(row) for row in DictReader(source)]


def write_timing_csv(rows: Iterable[TimingRow], out: TextIO) -> None:
    writer = DictWriter(out, fieldnames=TIMING_CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.to_csv_row())


def read_timing_csv(source: TextIO) -> list[TimingRow]:
    return [TimingRow.from_csv_row(row) for row in DictReader(source)]


def write_history_csv(report: SolveReport, out: TextIO) -> None:
    writer = DictWriter(out, fieldnames=HISTORY_CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for i, (residual, increment) in enumerate(
        zip(report.residual_history, report.increment_history), start=1
    ):
        writer.writerow(
            {
                "iteration": i,
                "residual": _format_float(residual),
                "increment": _format_float(increment),
            }
        )


def write_solution_csv(report: SolveReport, problem: Problem, out: TextIO) -> None:
    """
    One line per node, for plotting the solution surface elsewhere
    """
    grid = report.solution.grid
    x, y = grid.mesh()
    exact = None
    if problem.exact is not None:
        exact = np.broadcast_to(problem.exact(x, y), grid.shape)

    writer = DictWriter(out, fieldnames=SOLUTION_CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for i, j in np.ndindex(*grid.shape):
        writer.writerow(
            {
                "x": _format_float(x[i, j]),
                "y": _format_float(y[i, j]),
                "u": _format_float(report.solution.values[i, j]),
                "exact": "" if exact is None else _format_float(exact[i, j]),
                "g": _format_float(report.g.values[i, j]),
            }
        )


def convergence_rates(rows: Sequence[BenchRow]) -> list[Optional[float]]:
    """
    Observed order log(e_i / e_i-1) / log(h_i / h_i-1) between consecutive rows,
    None for the first row and wherever an error isn't positive
    """
    rates: list[Optional[float]] = [None]
    for previous, current in zip(rows, rows[1:]):
        if previous.error > 0 and current.error > 0 and previous.n != current.n:
            # h = L / (N - 1), L cancels out
            ratio = (previous.n - 1) / (current.n - 1)
            rates.append(math.log(current.error / previous.error) / math.log(ratio))
        else:
            rates.append(None)
    return rates


def _or_dash(value: Optional[float], fmt: str) -> str:
    return "-" if value is None else format(value, fmt)


def format_table(rows: Sequence[BenchRow], color: bool = False) -> str:
    """
    Render rows as text, one block per method and example
    """
    header = (
        f"{'N':>5} {'error':>10} {'rate':>6} {'published':>10} {'iters':>6} "
        f"{'seconds':>9} {'converged':>9} {'min l1':>10} {'min g~':>10}"
    )
    lines: list[str] = []

    groups: dict[tuple[Method, int], list[BenchRow]] = {}
    for row in rows:
        groups.setdefault((row.method, row.example), []).append(row)

    for (method, example), group in groups.items():
        if lines:
            lines.append("")
        lines.append(f"Method {method}, example {example}")
        lines.append(header)
        for row, rate in zip(group, convergence_rates(group)):
            line = (
                f"{row.n:>5} {row.error:>10.3e} {_or_dash(rate, '.2f'):>6} "
                f"{_or_dash(published_error(method, example, row.n), '.3e'):>10} "
                f"{row.iterations:>6} {row.seconds:>9.3f} "
                f"{str(row.converged).lower():>9} "
                f"{row.min_lambda1:>10.2e} {row.min_gtilde:>10.2e}"
            )
            if row.failure is not None:
                line += f"  ({row.failure})"
            # Make non-converged rows red, they shouldn't be trusted
            if color and not row.converged:
                line = Fore.RED + line + Style.RESET_ALL
            lines.append(line)

    return "\n".join(lines)


def format_timing(rows: Sequence[TimingRow]) -> str:
    lines = [f"{'method':>8} {'N':>5} {'seconds':>9}"]
    for row in rows:
        line = f"{str(row.method):>8} {row.n:>5} {row.seconds:>9.3f}"
        if row.failure is not None:
            line += f"  ({row.failure})"
        lines.append(line)
    return "\n".join(lines)
