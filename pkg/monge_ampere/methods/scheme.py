"""
Pieces shared by the solvers: the wide stencil Monge-Ampere residual, its
semi-smooth Jacobian, the time step bound of the explicit iteration, the AM-GM
gap g and the starting guess.

The residual at an interior node is

    max(l1, d) * max(l2, d) + min(l1, d) - d - f

with l1 <= l2 the discrete Hessian eigenvalues and d >= 0 the eigenvalue clamp.
It is non-decreasing in every neighbour value and non-increasing in the centre
value, which is what makes the explicit iteration monotone.
"""

import logging
from typing import Any

import numpy as np
from scipy import sparse

from monge_ampere.enums import InitialGuess
from monge_ampere.errors import InvalidDataError
from monge_ampere.grid import GridFunction, StencilDirections
from monge_ampere.methods.config import MethodConfig
from monge_ampere.operators import EigenFields, eigenvalue_fields, laplacian5_field
from monge_ampere.poisson import PoissonSystem, solve_poisson
from monge_ampere.problems import DiscreteProblem

logger = logging.getLogger(__name__)


def _check_source(f: GridFunction) -> None:
    if np.any(f.values < 0):
        raise InvalidDataError("f must be non-negative at every node")


def residual_from_eigenvalues(
    fields: EigenFields, f_interior: np.ndarray, delta: float
) -> np.ndarray:
    low, high = fields.lambda_min, fields.lambda_max
    return (
        np.maximum(low, delta) * np.maximum(high, delta)
        + np.minimum(low, delta)
        - delta
        - f_interior
    )


def ma_residual(
    u: GridFunction, f: GridFunction, stencil: StencilDirections, delta: float = 0.0
) -> GridFunction:
    """
    Monge-Ampere residual at the interior nodes, zero on the boundary
    """
    _check_source(f)
    fields = eigenvalue_fields(u, stencil)
    residual = residual_from_eigenvalues(fields, f.interior, delta)
    return GridFunction.zeros(u.grid).with_interior(residual)


def g_from_u(u: GridFunction, f: GridFunction) -> GridFunction:
    """
    The AM-GM gap Laplacian(u) - 2 sqrt(f) at the interior nodes. Non-negative
    for convex u solving the equation.
    """
    _check_source(f)
    gap = laplacian5_field(u) - 2 * np.sqrt(f.interior)
    return GridFunction.zeros(u.grid).with_interior(gap)


def estimate_dt(u: GridFunction, f: GridFunction, stencil: StencilDirections) -> float:
    """
    Time step for which the explicit iteration linearized at u stays monotone:
    h^2 / (2 S (1 + max |lambda|)), S being the number of direction pairs
    """
    fields = eigenvalue_fields(u, stencil)
    largest = max(
        float(np.abs(fields.lambda_min).max()), float(np.abs(fields.lambda_max).max())
    )
    return u.grid.h**2 / (2 * len(stencil) * (1 + largest))


def local_dt(u: GridFunction, stencil: StencilDirections) -> GridFunction:
    """
    Per-node time step for the explicit iteration: half of 1 / K_i, with
    K_i = 2 (1 + |l1| + |l2|) / h^2 bounding the derivative of the residual at
    node i with respect to u_i. Zero on the boundary.
    """
    fields = eigenvalue_fields(u, stencil)
    bound = 2 * (1 + np.abs(fields.lambda_min) + np.abs(fields.lambda_max))
    return GridFunction.zeros(u.grid).with_interior(u.grid.h**2 / (2 * bound))


def residual_jacobian(
    u: GridFunction, f: GridFunction, stencil: StencilDirections, delta: float = 0.0
) -> Any:
    """
    Derivative of the residual with respect to the interior values of u, with the
    minimizing and maximizing directions held fixed. Sparse, interior unknowns
    ordered like values[1:-1, 1:-1].ravel().
    """
    _check_source(f)
    grid = u.grid
    m = grid.n - 2
    fields = eigenvalue_fields(u, stencil)
    low, high = fields.lambda_min, fields.lambda_max

    # d(residual)/d(lambda_min) and d(residual)/d(lambda_max)
    c_low = np.where(low > delta, np.maximum(high, delta), 1.0)
    c_high = np.where(high > delta, np.maximum(low, delta), 0.0)

    ii, jj = np.meshgrid(np.arange(1, m + 1), np.arange(1, m + 1), indexing="ij")
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    data: list[np.ndarray] = []

    for coeff, active in ((c_low, fields.argmin), (c_high, fields.argmax)):
        for k, (p, q) in enumerate(stencil.directions):
            selected = (active == k) & (coeff != 0)
            if not selected.any():
                continue
            weight = coeff[selected] / ((p * p + q * q) * grid.h**2)
            ci, cj = ii[selected], jj[selected]
            centre = (ci - 1) * m + (cj - 1)

            rows.append(centre)
            cols.append(centre)
            data.append(-2 * weight)

            for sign in (1, -1):
                ni, nj = ci + sign * p, cj + sign * q
                # Arms landing on the boundary hit known values, not unknowns
                inside = (ni >= 1) & (ni <= m) & (nj >= 1) & (nj <= m)
                rows.append(centre[inside])
                cols.append((ni[inside] - 1) * m + (nj[inside] - 1))
                data.append(weight[inside])

    size = m * m
    if not rows:
        return sparse.csc_matrix((size, size))
    # Duplicate entries are summed
    return sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size),
    ).tocsc()


def initial_guess(discrete: DiscreteProblem, config: MethodConfig) -> GridFunction:
    if config.initial_guess is InitialGuess.BOUNDARY:
        return discrete.phi.copy()

    logger.debug("Starting from the Poisson solution of Laplacian(u) = 2 sqrt(f)")
    rhs = GridFunction.zeros(discrete.grid).with_interior(2 * discrete.sqrt_f)
    system = PoissonSystem(
        discrete.grid,
        rhs,
        discrete.phi,
        tolerance=config.poisson_tolerance,
        solver=config.poisson_solver,
    )
    return solve_poisson(system)
