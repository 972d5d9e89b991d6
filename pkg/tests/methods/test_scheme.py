import numpy as np
import pytest

from monge_ampere.enums import InitialGuess
from monge_ampere.errors import InvalidDataError
from monge_ampere.grid import (
    UNIT_SQUARE,
    Grid2D,
    GridFunction,
    build_grid,
    build_stencil,
)
from monge_ampere.methods.config import MethodConfig
from monge_ampere.methods.scheme import (
    estimate_dt,
    g_from_u,
    initial_guess,
    local_dt,
    ma_residual,
    residual_jacobian,
)
from monge_ampere.problems import quadratic, quadratic_problem


def constant(grid: Grid2D, value: float) -> GridFunction:
    return GridFunction(grid, np.full(grid.shape, value))


def sample(grid: Grid2D, a: float, b: float) -> GridFunction:
    return GridFunction.from_function(grid, lambda x, y: (a * x**2 + b * y**2) / 2)


@pytest.fixture
def grid() -> Grid2D:
    return build_grid(UNIT_SQUARE, 11)


@pytest.mark.parametrize(
    "a,b,f,expected",
    [
        (1.0, 1.0, 1.0, 0.0),
        (1.0, 1.0, 2.0, -1.0),
        # lambda_min = -1 is penalized: 0 * 1 + (-1) - 0
        (1.0, -1.0, 0.0, -1.0),
        (1.0, 4.0, 4.0, 0.0),
    ],
)
def test_ma_residual(
    grid: Grid2D, a: float, b: float, f: float, expected: float
) -> None:
    residual = ma_residual(sample(grid, a, b), constant(grid, f), build_stencil(2))
    np.testing.assert_allclose(residual.interior, expected, atol=1e-9)
    assert np.all(residual.values[~grid.interior_mask()] == 0)


def test_ma_residual_clamp(grid: Grid2D) -> None:
    # With delta = 0.5 and both eigenvalues 1: 1 * 1 + 0.5 - 0.5 - f
    residual = ma_residual(
        sample(grid, 1, 1), constant(grid, 0.25), build_stencil(1), 0.5
    )
    np.testing.assert_allclose(residual.interior, 0.75, atol=1e-9)


def test_ma_residual_negative_f(grid: Grid2D) -> None:
    with pytest.raises(InvalidDataError):
        ma_residual(sample(grid, 1, 1), constant(grid, -1.0), build_stencil(2))


@pytest.mark.parametrize(
    "a,b,f,expected",
    [(1.0, 1.0, 1.0, 0.0), (1.0, 4.0, 4.0, 1.0), (2.0, 2.0, 0.0, 4.0)],
)
def test_g_from_u(grid: Grid2D, a: float, b: float, f: float, expected: float) -> None:
    g = g_from_u(sample(grid, a, b), constant(grid, f))
    np.testing.assert_allclose(g.interior, expected, atol=1e-9)


def test_estimate_dt() -> None:
    grid = build_grid(UNIT_SQUARE, 31)
    stencil = build_stencil(2)
    h2 = grid.h**2

    zero = GridFunction.zeros(grid)
    assert estimate_dt(zero, zero, stencil) == pytest.approx(h2 / 16)
    assert estimate_dt(sample(grid, 1, 1), zero, stencil) == pytest.approx(h2 / 32)

    # Ten times the curvature, roughly a tenth of the step
    assert estimate_dt(sample(grid, 10, 10), zero, stencil) == pytest.approx(
        h2 / (16 * 11)
    )


@pytest.mark.parametrize("a,b,expected", [(1.0, 1.0, 12.0), (1.0, 4.0, 24.0)])
def test_local_dt(a: float, b: float, expected: float) -> None:
    grid = build_grid(UNIT_SQUARE, 31)
    stencil = build_stencil(2)
    u = sample(grid, a, b)

    dt = local_dt(u, stencil)
    np.testing.assert_allclose(dt.interior, grid.h**2 / expected, rtol=1e-6)
    assert np.all(dt.values[~grid.interior_mask()] == 0)
    # Never smaller than the single global step
    assert dt.interior.min() > estimate_dt(u, constant(grid, a * b), stencil)


def test_jacobian_matches_differences() -> None:
    """
    Columns of the Jacobian against central differences of the residual, on an
    anisotropic quadratic where the active directions are well separated
    """
    grid = build_grid(UNIT_SQUARE, 9)
    stencil = build_stencil(2)
    problem = quadratic_problem(np.array([[1.0, 0.3], [0.3, 4.0]]))
    discrete = problem.discretize(grid)
    assert discrete.exact is not None
    u = discrete.exact
    f = discrete.f

    jacobian = residual_jacobian(u, f, stencil).toarray()
    m = grid.n - 2
    assert jacobian.shape == (m * m, m * m)

    eps = 1e-6
    for k in range(m * m):
        bump = np.zeros(m * m)
        bump[k] = eps
        bump = bump.reshape(m, m)
        plus = ma_residual(u.with_interior(u.interior + bump), f, stencil)
        minus = ma_residual(u.with_interior(u.interior - bump), f, stencil)
        column = (plus.interior - minus.interior).ravel() / (2 * eps)
        np.testing.assert_allclose(jacobian[:, k], column, rtol=1e-5, atol=1e-4)


def test_jacobian_diagonally_dominant(grid: Grid2D) -> None:
    stencil = build_stencil(2)
    u = sample(grid, 1, 2)
    jacobian = residual_jacobian(u, constant(grid, 2.0), stencil).toarray()
    # The diagonal dominates, as expected from a monotone scheme
    assert np.all(np.diag(jacobian) < 0)
    off = jacobian - np.diag(np.diag(jacobian))
    assert np.all(off >= 0)
    assert np.all(np.abs(np.diag(jacobian)) >= off.sum(axis=1) - 1e-9)


@pytest.mark.parametrize("guess", list(InitialGuess))
def test_initial_guess(guess: InitialGuess) -> None:
    grid = build_grid(UNIT_SQUARE, 9)
    discrete = quadratic().discretize(grid)
    assert discrete.exact is not None
    u = initial_guess(discrete, MethodConfig(initial_guess=guess))

    mask = grid.interior_mask()
    np.testing.assert_allclose(u.values[~mask], discrete.exact.values[~mask])
    if guess is InitialGuess.POISSON:
        # Laplacian(u) = 2 sqrt(1) has the exact solution on quadratics
        np.testing.assert_allclose(u.values, discrete.exact.values, atol=1e-10)
    else:
        assert np.all(u.interior == 0)
