import math

import numpy as np
import pytest

from monge_ampere.errors import (
    InvalidDataError,
    InvalidGridError,
    InvalidStencilError,
    NotApplicableError,
)
from monge_ampere.grid import (
    UNIT_SQUARE,
    Domain,
    Grid2D,
    GridFunction,
    admissible_directions,
    build_grid,
    build_stencil,
    directional_resolution,
    spatial_resolution,
)


@pytest.mark.parametrize(
    "domain,n",
    [
        (UNIT_SQUARE, 2),
        (UNIT_SQUARE, 0),
        (Domain(0.0, 0.0, 0.0, 0.0), 5),
        (Domain(0.0, 0.0, 2.0, 1.0), 5),
    ],
)
def test_build_grid_invalid(domain: Domain, n: int) -> None:
    with pytest.raises(InvalidGridError):
        build_grid(domain, n)


@pytest.mark.parametrize(
    "domain,n,h",
    [
        (UNIT_SQUARE, 31, 1 / 30),
        (UNIT_SQUARE, 3, 0.5),
        (Domain(0.0, 0.0, 2.0, 2.0), 4, 2 / 3),
        (Domain(-1.0, -1.0, 1.0, 1.0), 5, 0.5),
    ],
)
def test_grid_spacing(domain: Domain, n: int, h: float) -> None:
    grid = build_grid(domain, n)
    assert grid.h == pytest.approx(h)
    assert grid.x[0] == domain.xmin
    assert grid.x[-1] == pytest.approx(domain.xmax)
    assert grid.point((n - 1, 0)) == pytest.approx((domain.xmax, domain.ymin))


def test_grid_nodes() -> None:
    grid = build_grid(UNIT_SQUARE, 5)
    assert grid.node_count == 25
    assert len(list(grid.interior_nodes())) == 9
    assert grid.is_interior((1, 3))
    assert not grid.is_interior((0, 3))
    assert not grid.contains((5, 0))
    assert grid.interior_mask().sum() == 9


@pytest.mark.parametrize("width,pairs", [(1, 4), (2, 8), (3, 16)])
def test_stencil_size(width: int, pairs: int) -> None:
    stencil = build_stencil(width)
    assert len(stencil) == pairs

    angles = stencil.angles
    assert np.all(angles > -math.pi / 2)
    assert np.all(angles <= math.pi / 2)
    assert np.all(np.diff(angles) > 0)

    for p, q in stencil:
        assert math.gcd(abs(p), abs(q)) == 1
        assert max(abs(p), abs(q)) <= width


def test_stencil_width_1() -> None:
    assert build_stencil(1).directions == ((1, -1), (1, 0), (1, 1), (0, 1))


def test_stencil_invalid() -> None:
    with pytest.raises(InvalidStencilError):
        build_stencil(0)


@pytest.mark.parametrize(
    "width,expected",
    [(1, math.pi / 8), (2, math.atan(0.5) / 2)],
)
def test_directional_resolution(width: int, expected: float) -> None:
    assert directional_resolution(build_stencil(width)) == pytest.approx(expected)


def test_directional_resolution_shrinks() -> None:
    resolutions = [directional_resolution(build_stencil(w)) for w in (1, 2, 3)]
    assert resolutions == sorted(resolutions, reverse=True)
    assert directional_resolution(build_stencil(2)) == pytest.approx(0.2318, abs=1e-4)


def test_spatial_resolution() -> None:
    grid = build_grid(UNIT_SQUARE, 31)
    assert spatial_resolution(grid, build_stencil(1)) == pytest.approx(
        math.sqrt(2) / 30
    )
    assert spatial_resolution(grid, build_stencil(2)) == pytest.approx(
        math.sqrt(5) / 30
    )


def test_admissible_directions() -> None:
    grid = build_grid(UNIT_SQUARE, 7)
    stencil = build_stencil(2)

    # Next to a corner only the nearest neighbours fit
    near_corner = admissible_directions(grid, (1, 1), stencil)
    assert set(near_corner) == {(1, 0), (0, 1), (1, 1), (1, -1)}

    assert len(admissible_directions(grid, (3, 3), stencil)) == 8

    with pytest.raises(NotApplicableError):
        admissible_directions(grid, (0, 3), stencil)


class TestGridFunction:
    @pytest.fixture
    def grid(self) -> Grid2D:
        return build_grid(UNIT_SQUARE, 5)

    def test_shape_mismatch(self, grid: Grid2D) -> None:
        with pytest.raises(InvalidDataError):
            GridFunction(grid, np.zeros((4, 4)))

    def test_not_finite(self, grid: Grid2D) -> None:
        values = np.zeros(grid.shape)
        values[2, 2] = np.nan
        with pytest.raises(InvalidDataError):
            GridFunction(grid, values)

    def test_from_function(self, grid: Grid2D) -> None:
        u = GridFunction.from_function(grid, lambda x, y: x + 2 * y)
        assert u[(4, 0)] == pytest.approx(1.0)
        assert u[(2, 4)] == pytest.approx(2.5)

        constant = GridFunction.from_function(
            grid, lambda x, y: np.full(x.shape, 3.0)
        )
        assert constant.max_abs() == 3.0

    def test_with_interior(self, grid: Grid2D) -> None:
        u = GridFunction.from_function(grid, lambda x, y: x)
        v = u.with_interior(np.full((3, 3), 7.0))
        assert np.all(v.interior == 7.0)
        assert v[(0, 2)] == u[(0, 2)]
        assert v[(4, 4)] == u[(4, 4)]
        # u itself is untouched
        assert u[(2, 2)] == pytest.approx(0.5)
