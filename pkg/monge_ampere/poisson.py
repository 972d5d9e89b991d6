"""
Dirichlet Poisson problem on the 5-point stencil:

    Laplacian(u) = rhs   inside
    u = phi              on the boundary

Boundary values are moved into the right hand side, leaving the interior nodes
as the only unknowns. The negated matrix is symmetric positive definite.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Optional

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import cg, splu

from monge_ampere.constants import DIRECT_SOLVE_MAX_N, POISSON_TOLERANCE
from monge_ampere.enums import PoissonSolver
from monge_ampere.errors import InvalidDataError, LinearSolverError
from monge_ampere.grid import Grid2D, GridFunction
from monge_ampere.operators import laplacian5_field, laplacian5_values

logger = logging.getLogger(__name__)

# CG restarts from its own answer this many times if the recursively updated
# residual drifted away from the true one
CG_RESTARTS = 3


@dataclass
class PoissonSystem:
    grid: Grid2D
    # Only the interior values are used
    rhs: GridFunction
    # Only the boundary values are used
    boundary: GridFunction
    tolerance: float = POISSON_TOLERANCE
    max_iterations: Optional[int] = None
    solver: PoissonSolver = PoissonSolver.AUTO
    # Starting point for CG, e.g. the previous solve of an outer iteration
    initial: Optional[GridFunction] = None

    def validate(self) -> None:
        if self.tolerance <= 0:
            raise ValueError(f"Tolerance must be positive, got {self.tolerance}")
        if self.rhs.grid != self.grid or self.boundary.grid != self.grid:
            raise InvalidDataError(
                "Right hand side and boundary data are on another grid"
            )

    @property
    def absolute_tolerance(self) -> float:
        return self.tolerance * (1 + float(np.abs(self.rhs.interior).max()))


@lru_cache(maxsize=8)
def negative_laplacian(grid: Grid2D) -> Any:
    """
    -Laplacian over the interior nodes as a sparse matrix, unknowns ordered like
    values[1:-1, 1:-1].ravel()
    """
    m = grid.n - 2
    tri = sparse.diags(
        [-np.ones(m - 1), 2 * np.ones(m), -np.ones(m - 1)], [-1, 0, 1], shape=(m, m)
    )
    eye = sparse.identity(m)
    return ((sparse.kron(tri, eye) + sparse.kron(eye, tri)) / grid.h**2).tocsc()


@lru_cache(maxsize=4)
def _factorization(grid: Grid2D) -> Any:
    logger.debug(f"Factorizing the {grid.n}x{grid.n} Laplacian")
    return splu(negative_laplacian(grid))


def _resolve_solver(solver: PoissonSolver, n: int) -> PoissonSolver:
    if solver is PoissonSolver.AUTO:
        return PoissonSolver.DIRECT if n <= DIRECT_SOLVE_MAX_N else PoissonSolver.CG
    return solver


def boundary_lift(boundary: GridFunction) -> np.ndarray:
    """
    What the boundary values contribute to the Laplacian at the interior nodes
    """
    values = boundary.values.copy()
    values[1:-1, 1:-1] = 0.0
    return laplacian5_values(values, boundary.grid.h)


def solve_poisson(system: PoissonSystem) -> GridFunction:
    system.validate()
    grid = system.grid
    m = grid.n - 2

    lift = boundary_lift(system.boundary)
    b = (lift - system.rhs.interior).ravel()

    values = system.boundary.values.copy()
    solver = _resolve_solver(system.solver, grid.n)
    if solver is PoissonSolver.DIRECT:
        values[1:-1, 1:-1] = _factorization(grid).solve(b).reshape(m, m)
    else:
        values[1:-1, 1:-1] = _solve_cg(system, b).reshape(m, m)

    if not np.all(np.isfinite(values)):
        raise LinearSolverError("Poisson solve produced non-finite values", np.inf)
    u = GridFunction(grid, values)

    residual = poisson_residual(u, system)
    if residual > system.absolute_tolerance:
        raise LinearSolverError(
            f"Poisson solve stopped at residual {residual:.3e}, wanted "
            f"{system.absolute_tolerance:.3e}",
            residual,
        )
    return u


def _solve_cg(system: PoissonSystem, b: np.ndarray) -> np.ndarray:
    a = negative_laplacian(system.grid)
    atol = system.absolute_tolerance
    maxiter = system.max_iterations or 10 * b.size
    x = (
        system.initial.interior.ravel()
        if system.initial is not None
        else np.zeros_like(b)
    )

    for attempt in range(CG_RESTARTS):
        x, info = cg(a, b, x0=x, rtol=0.0, atol=atol, maxiter=maxiter)
        true_residual = float(np.abs(a @ x - b).max())
        logger.debug(
            f"CG attempt {attempt}: info={info}, residual {true_residual:.3e}"
        )
        if info > 0 or true_residual <= atol:
            break

    return np.asarray(x)


def poisson_residual(u: GridFunction, system: PoissonSystem) -> float:
    """
    Largest |Laplacian(u) - rhs| over the interior nodes
    """
    return float(np.abs(laplacian5_field(u) - system.rhs.interior).max())
