import logging
from dataclasses import dataclass, field

import numpy as np

from monge_ampere.enums import Method, StopReason
from monge_ampere.grid import GridFunction, build_stencil
from monge_ampere.methods.config import MethodConfig
from monge_ampere.operators import eigenvalue_fields, laplacian5_field
from monge_ampere.problems import DiscreteProblem

logger = logging.getLogger(__name__)


@dataclass
class SolveReport:
    method: Method
    solution: GridFunction
    # The auxiliary function of the Poisson formulation. Methods B and C iterate on
    # it; for Method A it is recovered as Laplacian(u) - 2 sqrt(f).
    g: GridFunction
    iterations: int
    seconds: float
    converged: bool
    stop_reason: StopReason
    residual_history: list[float] = field(default_factory=list, repr=False)
    increment_history: list[float] = field(default_factory=list, repr=False)
    # Convexity diagnostics over the interior nodes
    min_lambda1: float = float("nan")
    min_gtilde: float = float("nan")


def finish_report(
    method: Method,
    discrete: DiscreteProblem,
    config: MethodConfig,
    solution: GridFunction,
    g: GridFunction,
    residuals: list[float],
    increments: list[float],
    seconds: float,
    stop_reason: StopReason,
) -> SolveReport:
    """
    Bundle up the end state of a solve along with its convexity diagnostics
    """
    stencil = build_stencil(config.stencil_width)
    lambda1 = eigenvalue_fields(solution, stencil).lambda_min
    gtilde = laplacian5_field(solution) - discrete.sqrt_f * 2

    report = SolveReport(
        method=method,
        solution=solution,
        g=g,
        iterations=len(increments),
        seconds=seconds,
        converged=stop_reason is StopReason.CONVERGED,
        stop_reason=stop_reason,
        residual_history=residuals,
        increment_history=increments,
        min_lambda1=float(np.min(lambda1)),
        min_gtilde=float(np.min(gtilde)),
    )
    logger.info(
        f"Method {method} on {discrete.problem.name}, N={discrete.grid.n}: "
        f"{stop_reason.value} after {report.iterations} iterations "
        f"in {seconds:.3f}s"
    )
    return report
