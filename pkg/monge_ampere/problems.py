"""
Benchmark problems with known solutions, and how they are sampled on a grid
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from monge_ampere.errors import InvalidDataError, NotApplicableError
from monge_ampere.grid import UNIT_SQUARE, Domain, Grid2D, GridFunction, ScalarField

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Problem:
    """
    det(D^2 u) = f inside the domain, u = phi on its boundary, u convex
    """

    name: str
    domain: Domain
    f: ScalarField
    phi: ScalarField
    exact: Optional[ScalarField] = None

    def discretize(self, grid: Grid2D) -> "DiscreteProblem":
        """
        Sample the problem on a grid. f is only evaluated at interior nodes (it may
        blow up on the boundary) and is stored as 0 on the boundary nodes, where no
        scheme reads it.
        """
        x, y = grid.mesh()

        f = np.zeros(grid.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            f[1:-1, 1:-1] = np.broadcast_to(
                self.f(x[1:-1, 1:-1], y[1:-1, 1:-1]), (grid.n - 2, grid.n - 2)
            )
        if not np.all(np.isfinite(f)):
            raise InvalidDataError(f"{self.name}: f is not finite at some nodes")
        if np.any(f < 0):
            raise InvalidDataError(f"{self.name}: f is negative at some nodes")

        phi = np.zeros(grid.shape)
        boundary = ~grid.interior_mask()
        phi[boundary] = np.broadcast_to(self.phi(x, y), grid.shape)[boundary]

        exact = None
        if self.exact is not None:
            exact = GridFunction.from_function(grid, self.exact)

        return DiscreteProblem(
            problem=self,
            grid=grid,
            f=GridFunction(grid, f),
            phi=GridFunction(grid, phi),
            exact=exact,
        )


@dataclass
class DiscreteProblem:
    problem: Problem
    grid: Grid2D
    f: GridFunction
    # Dirichlet data on the boundary nodes, zero inside
    phi: GridFunction
    exact: Optional[GridFunction] = None

    @property
    def sqrt_f(self) -> np.ndarray:
        return np.sqrt(self.f.interior)


def example1() -> Problem:
    """
    Smooth, strictly convex: u = exp((x^2 + y^2) / 2)
    """

    def u(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.exp((x**2 + y**2) / 2)

    def f(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x**2 + y**2 + 1) * np.exp(x**2 + y**2)

    return Problem("example 1", UNIT_SQUARE, f=f, phi=u, exact=u)


def example2() -> Problem:
    """
    C^1 solution, flat (f = 0) on the disc of radius 0.2 around the center
    """

    def radius(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.sqrt((x - 0.5) ** 2 + (y - 0.5) ** 2)

    def u(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return 0.5 * np.maximum(radius(x, y) - 0.2, 0.0) ** 2

    def f(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        r = np.asarray(radius(x, y), dtype=float)
        safe = np.where(r > 0, r, 1.0)
        # f at the center is the limit of the positive part, 0
        return np.where(r > 0, np.maximum(1 - 0.2 / safe, 0.0), 0.0)

    return Problem("example 2", UNIT_SQUARE, f=f, phi=u, exact=u)


def example3() -> Problem:
    """
    u = -sqrt(2 - x^2 - y^2). f blows up and the gradient is unbounded at the corner
    (1, 1), which is a boundary node.
    """

    def u(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return -np.sqrt(np.maximum(2 - x**2 - y**2, 0.0))

    def f(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return 2 / (2 - x**2 - y**2) ** 2

    return Problem("example 3", UNIT_SQUARE, f=f, phi=u, exact=u)


def quadratic_problem(
    hessian: np.ndarray, domain: Domain = UNIT_SQUARE, name: str = "quadratic"
) -> Problem:
    """
    u = x^T M x / 2 for a symmetric positive semi-definite M, so f = det(M). Central
    differences are exact on these, the wide stencil only when the eigenvectors of M
    lie along stencil directions.
    """
    m = np.asarray(hessian, dtype=float)
    if m.shape != (2, 2) or not np.allclose(m, m.T):
        raise ValueError(f"Hessian must be a symmetric 2x2 matrix, got {m}")
    det = float(m[0, 0] * m[1, 1] - m[0, 1] ** 2)

    def u(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (m[0, 0] * x**2 + 2 * m[0, 1] * x * y + m[1, 1] * y**2) / 2

    def f(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.full(np.shape(x), det)

    return Problem(name, domain, f=f, phi=u, exact=u)


def quadratic() -> Problem:
    """
    f = 1 with u = (x^2 + y^2) / 2
    """
    return quadratic_problem(np.eye(2))


EXAMPLES: dict[int, Callable[[], Problem]] = {
    1: example1,
    2: example2,
    3: example3,
}


def linf_error(u: GridFunction, problem: Problem) -> float:
    """
    Largest |u - exact| over all nodes
    """
    if problem.exact is None:
        raise NotApplicableError(f"{problem.name} has no exact solution")
    exact = GridFunction.from_function(u.grid, problem.exact)
    return float(np.abs(u.values - exact.values).max())
