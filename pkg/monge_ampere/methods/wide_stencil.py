"""
Method A: the wide stencil monotone scheme, solved either by explicit (Euler)
iteration u <- u + dt * residual(u) or by damped semi-smooth Newton.
"""

import logging
import time
from typing import Optional, Union

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from monge_ampere.constants import JACOBIAN_REGULARIZATION
from monge_ampere.enums import DtPolicy, Method, StopReason
from monge_ampere.errors import DivergenceError
from monge_ampere.grid import Grid2D, GridFunction, StencilDirections, build_stencil
from monge_ampere.methods.config import MethodConfig
from monge_ampere.methods.report import SolveReport, finish_report
from monge_ampere.methods.scheme import (
    estimate_dt,
    g_from_u,
    initial_guess,
    local_dt,
    ma_residual,
    residual_jacobian,
)
from monge_ampere.problems import Problem

logger = logging.getLogger(__name__)


def _advance(
    u: GridFunction, residual: GridFunction, dt: Union[float, GridFunction]
) -> GridFunction:
    step = dt.values if isinstance(dt, GridFunction) else dt
    values = u.values + step * residual.values
    if not np.all(np.isfinite(values)):
        largest = dt.max_abs() if isinstance(dt, GridFunction) else dt
        raise DivergenceError(f"Explicit step with dt up to {largest:.3e} overflowed")
    return GridFunction(u.grid, values)


def explicit_step(
    u: GridFunction,
    f: GridFunction,
    stencil: StencilDirections,
    dt: Union[float, GridFunction],
    delta: float = 0.0,
) -> GridFunction:
    """
    One step of u <- u + dt * residual(u), dt either one value or one per node.
    Boundary values don't move.
    """
    return _advance(u, ma_residual(u, f, stencil, delta), dt)


def method_a_euler(
    problem: Problem,
    grid: Grid2D,
    config: MethodConfig = MethodConfig(),
    initial: Optional[GridFunction] = None,
) -> SolveReport:
    config.validate()
    discrete = problem.discretize(grid)
    stencil = build_stencil(config.stencil_width)
    cap = config.iteration_cap(Method.A_EULER, grid.n)

    start = time.perf_counter()
    u = initial.copy() if initial is not None else initial_guess(discrete, config)
    residual = ma_residual(u, discrete.f, stencil, config.delta)

    fixed_dt = None
    if config.dt_policy is DtPolicy.FIXED:
        fixed_dt = config.dt or estimate_dt(u, discrete.f, stencil)
        logger.debug(f"Fixed time step {fixed_dt:.3e}")

    residuals: list[float] = []
    increments: list[float] = []
    stop_reason = StopReason.MAX_ITERATIONS

    for iteration in range(cap):
        dt: Union[float, GridFunction]
        if fixed_dt is not None:
            dt = fixed_dt
            increment = dt * residual.max_abs()
        else:
            dt = local_dt(u, stencil)
            increment = float(np.abs(dt.values * residual.values).max())
        # increment <= tolerance * dt for a single dt
        settled = residual.max_abs() <= config.tolerance

        u = _advance(u, residual, dt)
        residual = ma_residual(u, discrete.f, stencil, config.delta)

        residuals.append(residual.max_abs())
        increments.append(increment)
        if iteration % 1000 == 0:
            logger.debug(
                f"Euler {iteration}: residual={residuals[-1]:.3e} "
                f"increment={increment:.3e}"
            )

        if settled:
            stop_reason = StopReason.CONVERGED
            break

    return finish_report(
        Method.A_EULER,
        discrete,
        config,
        solution=u,
        g=g_from_u(u, discrete.f),
        residuals=residuals,
        increments=increments,
        seconds=time.perf_counter() - start,
        stop_reason=stop_reason,
    )


def _newton_direction(jacobian: sparse.csc_matrix, residual: np.ndarray) -> np.ndarray:
    """
    Solve jacobian @ d = -residual
    """
    system = (-jacobian).tocsc()
    try:
        return np.asarray(splu(system).solve(residual))
    except RuntimeError:
        scale = float(np.abs(system.diagonal()).max()) or 1.0
        eps = JACOBIAN_REGULARIZATION * scale
        logger.warning(f"Singular Newton Jacobian, regularizing with {eps:.1e} I")
        regularized = (system + eps * sparse.identity(system.shape[0])).tocsc()
        return np.asarray(splu(regularized).solve(residual))


def method_a_newton(
    problem: Problem,
    grid: Grid2D,
    config: MethodConfig = MethodConfig(),
    initial: Optional[GridFunction] = None,
) -> SolveReport:
    config.validate()
    discrete = problem.discretize(grid)
    stencil = build_stencil(config.stencil_width)
    cap = config.iteration_cap(Method.A_NEWTON, grid.n)
    f, delta = discrete.f, config.delta

    start = time.perf_counter()
    u = initial.copy() if initial is not None else initial_guess(discrete, config)
    residual = ma_residual(u, f, stencil, delta)

    residuals: list[float] = []
    increments: list[float] = []
    stop_reason = StopReason.MAX_ITERATIONS

    for iteration in range(cap):
        jacobian = residual_jacobian(u, f, stencil, delta)
        direction = _newton_direction(jacobian, residual.interior.ravel())
        direction = direction.reshape(u.interior.shape)
        full_increment = float(np.abs(direction).max())

        if full_increment <= config.tolerance:
            u = u.with_interior(u.interior + direction)
            residual = ma_residual(u, f, stencil, delta)
            residuals.append(residual.max_abs())
            increments.append(full_increment)
            stop_reason = StopReason.CONVERGED
            break

        current = residual.max_abs()
        step = 1.0
        accepted = False
        while step >= config.newton_min_step:
            trial_values = u.interior + step * direction
            if np.all(np.isfinite(trial_values)):
                trial = u.with_interior(trial_values)
                trial_residual = ma_residual(trial, f, stencil, delta)
                if trial_residual.max_abs() < current:
                    accepted = True
                    break
            step *= config.newton_backtrack

        if accepted:
            u, residual = trial, trial_residual
            increment = step * full_increment
            logger.debug(
                f"Newton {iteration}: step={step:g} residual={residual.max_abs():.3e} "
                f"increment={increment:.3e}"
            )
            residuals.append(residual.max_abs())
            increments.append(increment)
            if increment <= config.tolerance:
                stop_reason = StopReason.CONVERGED
                break
            continue

        dt = estimate_dt(u, f, stencil)
        logger.warning(
            f"Newton {iteration}: line search stalled, taking an explicit step instead"
        )
        increment = dt * residual.max_abs()
        u = _advance(u, residual, dt)
        residual = ma_residual(u, f, stencil, delta)
        residuals.append(residual.max_abs())
        increments.append(increment)
        if increment <= config.tolerance * dt:
            stop_reason = StopReason.CONVERGED
            break

    return finish_report(
        Method.A_NEWTON,
        discrete,
        config,
        solution=u,
        g=g_from_u(u, f),
        residuals=residuals,
        increments=increments,
        seconds=time.perf_counter() - start,
        stop_reason=stop_reason,
    )
