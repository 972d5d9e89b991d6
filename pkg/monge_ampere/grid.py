"""
Uniform Cartesian grids over a square, wide stencil direction sets and grid functions
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Tuple

import numpy as np

from monge_ampere.errors import (
    InvalidDataError,
    InvalidGridError,
    InvalidStencilError,
    NotApplicableError,
)

logger = logging.getLogger(__name__)

Node = Tuple[int, int]
Direction = Tuple[int, int]
ScalarField = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Domain:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    @property
    def side(self) -> float:
        return self.xmax - self.xmin


UNIT_SQUARE = Domain(0.0, 0.0, 1.0, 1.0)


@dataclass(frozen=True)
class Grid2D:
    """
    N x N nodes over a square, boundary nodes included. Node (i, j) sits at
    (xmin + i*h, ymin + j*h) with h = L / (N - 1), so the Dirichlet data lives exactly
    on the perimeter nodes.
    """

    xmin: float
    ymin: float
    xmax: float
    ymax: float
    n: int

    @property
    def side(self) -> float:
        return self.xmax - self.xmin

    @property
    def h(self) -> float:
        return self.side / (self.n - 1)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n, self.n)

    @property
    def node_count(self) -> int:
        return self.n * self.n

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.n)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(self.ymin, self.ymax, self.n)

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Node coordinates as two (N, N) arrays, indexed [i, j]
        """
        return np.meshgrid(self.x, self.y, indexing="ij")

    def point(self, node: Node) -> Tuple[float, float]:
        i, j = node
        return (self.xmin + i * self.h, self.ymin + j * self.h)

    def contains(self, node: Node) -> bool:
        i, j = node
        return 0 <= i < self.n and 0 <= j < self.n

    def is_interior(self, node: Node) -> bool:
        i, j = node
        return 0 < i < self.n - 1 and 0 < j < self.n - 1

    def interior_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        mask[1:-1, 1:-1] = True
        return mask

    def interior_nodes(self) -> Iterator[Node]:
        for i in range(1, self.n - 1):
            for j in range(1, self.n - 1):
                yield (i, j)


def build_grid(domain: Domain, n: int) -> Grid2D:
    if n < 3:
        raise InvalidGridError(f"Need at least 3 nodes per side, got {n}")
    width = domain.xmax - domain.xmin
    height = domain.ymax - domain.ymin
    if width <= 0 or height <= 0:
        raise InvalidGridError(f"Domain has no area: {domain}")
    if not math.isclose(width, height, rel_tol=1e-12):
        raise InvalidGridError(f"Domain must be square, got {width} x {height}")

    return Grid2D(domain.xmin, domain.ymin, domain.xmax, domain.ymax, n)


@dataclass(frozen=True)
class StencilDirections:
    """
    Integer directions (p, q) of a wide stencil, one per antipodal pair. The
    opposite direction -v is implied: second differences always use both x+v and
    x-v. Directions are sorted by angle in (-pi/2, pi/2].
    """

    width: int
    directions: Tuple[Direction, ...]

    def __len__(self) -> int:
        return len(self.directions)

    def __iter__(self) -> Iterator[Direction]:
        return iter(self.directions)

    @property
    def angles(self) -> np.ndarray:
        return np.array([math.atan2(q, p) for p, q in self.directions])

    def lengths(self, h: float) -> np.ndarray:
        """
        Physical length |v| * h of each direction
        """
        return np.array([math.hypot(p, q) * h for p, q in self.directions])

    def index(self, direction: Direction) -> int:
        return self.directions.index(direction)


def _representative(p: int, q: int) -> Direction:
    """
    Pick the one of (p, q) and (-p, -q) with its angle in (-pi/2, pi/2]
    """
    if p < 0 or (p == 0 and q < 0):
        return (-p, -q)
    return (p, q)


def build_stencil(width: int) -> StencilDirections:
    if width < 1:
        raise InvalidStencilError(f"Stencil width must be at least 1, got {width}")

    found = set()
    for p in range(-width, width + 1):
        for q in range(-width, width + 1):
            if (p, q) == (0, 0) or math.gcd(abs(p), abs(q)) != 1:
                continue
            found.add(_representative(p, q))

    directions = tuple(sorted(found, key=lambda v: math.atan2(v[1], v[0])))
    logger.debug(f"Width {width} stencil has {len(directions)} direction pairs")
    return StencilDirections(width, directions)


def directional_resolution(stencil: StencilDirections) -> float:
    """
    Worst-case angle between an arbitrary direction and the closest stencil
    direction: half the largest gap between consecutive stencil angles, with the
    antipodes included.
    """
    if len(stencil) == 0:
        raise InvalidStencilError("Empty stencil")

    angles = np.mod(stencil.angles, 2 * np.pi)
    angles = np.sort(np.concatenate([angles, np.mod(angles + np.pi, 2 * np.pi)]))
    gaps = np.diff(np.append(angles, angles[0] + 2 * np.pi))
    return float(gaps.max() / 2)


def spatial_resolution(grid: Grid2D, stencil: StencilDirections) -> float:
    """
    Longest arm of the stencil on this grid
    """
    return float(stencil.lengths(grid.h).max())


def admissible_directions(
    grid: Grid2D, node: Node, stencil: StencilDirections
) -> StencilDirections:
    """
    Directions v for which both node + v and node - v are grid nodes. Arms which
    would leave the grid are dropped rather than extrapolated.
    """
    if not grid.is_interior(node):
        raise NotApplicableError(f"Node {node} is not an interior node")

    i, j = node
    kept = tuple(
        (p, q)
        for p, q in stencil.directions
        if grid.contains((i + p, j + q)) and grid.contains((i - p, j - q))
    )
    return StencilDirections(stencil.width, kept)


@dataclass(eq=False)
class GridFunction:
    """
    One real value per grid node, stored as an (N, N) array indexed [i, j]
    """

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise InvalidDataError(
                f"Expected values of shape {self.grid.shape}, got {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise InvalidDataError("Grid function has non-finite values")

    @classmethod
    def zeros(cls, grid: Grid2D) -> "GridFunction":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def from_function(cls, grid: Grid2D, fn: ScalarField) -> "GridFunction":
        """
        Sample fn(x, y) at every node
        """
        x, y = grid.mesh()
        return cls(grid, np.broadcast_to(fn(x, y), grid.shape).copy())

    @property
    def interior(self) -> np.ndarray:
        return self.values[1:-1, 1:-1]

    def __getitem__(self, node: Node) -> float:
        return float(self.values[node])

    def copy(self) -> "GridFunction":
        return GridFunction(self.grid, self.values.copy())

    def with_interior(self, interior: np.ndarray) -> "GridFunction":
        """
        Copy of this function with the interior values replaced
        """
        values = self.values.copy()
        values[1:-1, 1:-1] = interior
        return GridFunction(self.grid, values)

    def max_abs(self) -> float:
        return float(np.abs(self.values).max())
