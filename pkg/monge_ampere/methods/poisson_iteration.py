"""
Methods B and C: fixed point iterations on g, each step solving the Poisson
problem Laplacian(u) = 2 sqrt(f) + g with u = phi on the boundary.

    B:  g <- sqrt(uxx^2 + uyy^2 + 2 uxy^2 + 2 f) - 2 sqrt(f)
    C:  g <- alpha * sqrt(|det(D^2 u) - f|) + g

Second derivatives come from central differences, using the boundary values of
u at nodes next to the boundary.
"""

import logging
import math
import time
from typing import Optional, Tuple

import numpy as np

from monge_ampere.constants import DIVERGENCE_FACTOR
from monge_ampere.enums import Method, StopReason
from monge_ampere.grid import Grid2D, GridFunction
from monge_ampere.methods.config import MethodConfig
from monge_ampere.methods.report import SolveReport, finish_report
from monge_ampere.operators import central_hessian_field, determinant_field
from monge_ampere.poisson import PoissonSystem, solve_poisson
from monge_ampere.problems import DiscreteProblem, Problem

logger = logging.getLogger(__name__)


def solve_for_g(
    g: GridFunction,
    discrete: DiscreteProblem,
    config: MethodConfig = MethodConfig(),
    initial: Optional[GridFunction] = None,
) -> GridFunction:
    """
    u^g: the solution of Laplacian(u) = 2 sqrt(f) + max(g, 0), u = phi on the
    boundary. initial warm starts the iterative Poisson solver.
    """
    rhs = GridFunction.zeros(discrete.grid).with_interior(
        2 * discrete.sqrt_f + np.maximum(g.interior, 0.0)
    )
    system = PoissonSystem(
        discrete.grid,
        rhs,
        discrete.phi,
        tolerance=config.poisson_tolerance,
        solver=config.poisson_solver,
        initial=initial,
    )
    return solve_poisson(system)


def _determinant_gap(u: GridFunction, discrete: DiscreteProblem) -> np.ndarray:
    return np.abs(determinant_field(u) - discrete.f.interior)


def determinant_residual(u: GridFunction, discrete: DiscreteProblem) -> float:
    return float(_determinant_gap(u, discrete).max())


def method_b_step(
    g: GridFunction,
    discrete: DiscreteProblem,
    config: MethodConfig = MethodConfig(),
    initial: Optional[GridFunction] = None,
) -> Tuple[GridFunction, GridFunction]:
    """
    Returns (Q(g), u^g)
    """
    u = solve_for_g(g, discrete, config, initial)
    uxx, uyy, uxy = central_hessian_field(u)
    f = discrete.f.interior
    q = np.sqrt(uxx**2 + uyy**2 + 2 * uxy**2 + 2 * f) - 2 * np.sqrt(f)
    return g.with_interior(np.maximum(q, 0.0)), u


def method_c_step(
    g: GridFunction,
    discrete: DiscreteProblem,
    alpha: float,
    config: MethodConfig = MethodConfig(),
    initial: Optional[GridFunction] = None,
) -> Tuple[GridFunction, GridFunction]:
    """
    Returns (F(g), u^g). F(g) >= g at every node.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be strictly between 0 and 1, got {alpha}")
    u = solve_for_g(g, discrete, config, initial)
    return _relaxed_update(g, _determinant_gap(u, discrete), alpha), u


def _relaxed_update(g: GridFunction, gap: np.ndarray, alpha: float) -> GridFunction:
    return g.with_interior(g.interior + alpha * np.sqrt(gap))


def _starting_g(grid: Grid2D, config: MethodConfig) -> GridFunction:
    return GridFunction.zeros(grid).with_interior(
        np.full((grid.n - 2, grid.n - 2), config.g0)
    )


def method_b_solve(
    problem: Problem, grid: Grid2D, config: MethodConfig = MethodConfig()
) -> SolveReport:
    config.validate()
    discrete = problem.discretize(grid)
    cap = config.iteration_cap(Method.B, grid.n)

    start = time.perf_counter()
    g = _starting_g(grid, config)
    limit = DIVERGENCE_FACTOR * (1 + g.max_abs())
    u: Optional[GridFunction] = None
    # The g that u was solved for
    solved_g = g

    residuals: list[float] = []
    increments: list[float] = []
    stop_reason = StopReason.MAX_ITERATIONS

    for iteration in range(cap):
        g_next, u = method_b_step(g, discrete, config, initial=u)
        solved_g = g
        increment = float(np.abs(g_next.values - g.values).max())
        residuals.append(determinant_residual(u, discrete))
        increments.append(increment)
        logger.debug(
            f"B {iteration}: residual={residuals[-1]:.3e} increment={increment:.3e}"
        )

        if increment <= config.tolerance:
            stop_reason = StopReason.CONVERGED
            break
        if g_next.max_abs() > limit:
            logger.warning(f"B {iteration}: |g| passed {limit:.1e}, giving up")
            stop_reason = StopReason.DIVERGED
            break
        g = g_next

    assert u is not None
    return finish_report(
        Method.B,
        discrete,
        config,
        solution=u,
        g=solved_g,
        residuals=residuals,
        increments=increments,
        seconds=time.perf_counter() - start,
        stop_reason=stop_reason,
    )


def method_c_solve(
    problem: Problem, grid: Grid2D, config: MethodConfig = MethodConfig()
) -> SolveReport:
    """
    Iterate F until the increment in g drops below the tolerance, the determinant
    residual reaches the tolerance, the residual hasn't improved for
    config.patience iterations, or g runs away. Anything but convergence reports
    the iterate with the smallest residual.
    """
    config.validate()
    discrete = problem.discretize(grid)
    cap = config.iteration_cap(Method.C, grid.n)

    start = time.perf_counter()
    g = _starting_g(grid, config)
    limit = DIVERGENCE_FACTOR * (1 + g.max_abs())
    u: Optional[GridFunction] = None

    residuals: list[float] = []
    increments: list[float] = []
    stop_reason = StopReason.MAX_ITERATIONS
    best: Optional[Tuple[float, GridFunction, GridFunction]] = None
    since_best = 0

    for iteration in range(cap):
        u = solve_for_g(g, discrete, config, initial=u)
        gap = _determinant_gap(u, discrete)
        residual = float(gap.max())
        residuals.append(residual)

        if residual <= config.tolerance:
            # Already solved, g stays put
            increments.append(0.0)
            stop_reason = StopReason.CONVERGED
            break

        if best is None or residual < best[0]:
            best = (residual, u, g)
            since_best = 0
        else:
            since_best += 1

        # g >= 0, so this bounds |F(g)| before building it
        increment = config.alpha * math.sqrt(residual)
        increments.append(increment)
        logger.debug(
            f"C {iteration}: residual={residual:.3e} increment={increment:.3e}"
        )

        if not math.isfinite(increment) or g.max_abs() + increment > limit:
            logger.warning(f"C {iteration}: |g| about to pass {limit:.1e}, giving up")
            stop_reason = StopReason.DIVERGED
            break
        g_next = _relaxed_update(g, gap, config.alpha)

        if increment <= config.tolerance:
            stop_reason = StopReason.CONVERGED
            break
        if since_best >= config.patience:
            logger.warning(
                f"C {iteration}: no improvement on residual {min(residuals):.3e} for "
                f"{config.patience} iterations"
            )
            stop_reason = StopReason.STAGNATED
            break
        g = g_next

    assert u is not None
    if stop_reason is not StopReason.CONVERGED and best is not None:
        _, u, g = best

    return finish_report(
        Method.C,
        discrete,
        config,
        solution=u,
        g=g,
        residuals=residuals,
        increments=increments,
        seconds=time.perf_counter() - start,
        stop_reason=stop_reason,
    )
