"""
Finite difference operators on grid functions.

Each operator comes in two flavours: a per-node function, which is the reference
definition, and a whole-grid "field" version returning an (N-2, N-2) array over
the interior nodes, which is what the solvers use.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

from monge_ampere.errors import OutOfGridError
from monge_ampere.grid import (
    Direction,
    GridFunction,
    Node,
    StencilDirections,
    admissible_directions,
)

logger = logging.getLogger(__name__)


class DirectionalExtreme(NamedTuple):
    value: float
    direction: Direction


@dataclass(frozen=True)
class EigenPairResult:
    """
    Discrete smallest and largest Hessian eigenvalues at a node, along with the
    stencil directions that attain them
    """

    lambda_min: float
    lambda_max: float
    argmin_direction: Direction
    argmax_direction: Direction


@dataclass(frozen=True)
class HessianCD:
    uxx: float
    uyy: float
    uxy: float

    @property
    def determinant(self) -> float:
        return self.uxx * self.uyy - self.uxy**2


@dataclass(frozen=True)
class EigenFields:
    """
    Discrete eigenvalues over all interior nodes. argmin/argmax hold indices into
    the stencil's directions.
    """

    lambda_min: np.ndarray
    lambda_max: np.ndarray
    argmin: np.ndarray
    argmax: np.ndarray


def second_difference(u: GridFunction, node: Node, v: Direction) -> float:
    """
    (u(x+v) - 2u(x) + u(x-v)) / |v|^2, with |v| the physical length of the offset
    """
    grid = u.grid
    i, j = node
    p, q = v
    plus = (i + p, j + q)
    minus = (i - p, j - q)
    if not (grid.contains(node) and grid.contains(plus) and grid.contains(minus)):
        raise OutOfGridError(f"Direction {v} leaves the grid at node {node}")

    return (u[plus] - 2 * u[node] + u[minus]) / ((p * p + q * q) * grid.h**2)


def _node_second_differences(
    u: GridFunction, node: Node, stencil: StencilDirections
) -> Tuple[StencilDirections, list[float]]:
    usable = admissible_directions(u.grid, node, stencil)
    return usable, [second_difference(u, node, v) for v in usable]


def lambda_min(
    u: GridFunction, node: Node, stencil: StencilDirections
) -> DirectionalExtreme:
    usable, values = _node_second_differences(u, node, stencil)
    # Ties go to the first direction in angle order
    k = int(np.argmin(values))
    return DirectionalExtreme(values[k], usable.directions[k])


def lambda_max(
    u: GridFunction, node: Node, stencil: StencilDirections
) -> DirectionalExtreme:
    usable, values = _node_second_differences(u, node, stencil)
    k = int(np.argmax(values))
    return DirectionalExtreme(values[k], usable.directions[k])


def eigen_pair(
    u: GridFunction, node: Node, stencil: StencilDirections
) -> EigenPairResult:
    low = lambda_min(u, node, stencil)
    high = lambda_max(u, node, stencil)
    return EigenPairResult(low.value, high.value, low.direction, high.direction)


def central_hessian(u: GridFunction, node: Node) -> HessianCD:
    i, j = node
    h2 = u.grid.h**2
    c = u[node]
    uxx = (u[i + 1, j] + u[i - 1, j] - 2 * c) / h2
    uyy = (u[i, j + 1] + u[i, j - 1] - 2 * c) / h2
    uxy = (u[i + 1, j + 1] + u[i - 1, j - 1] - u[i + 1, j - 1] - u[i - 1, j + 1]) / (
        4 * h2
    )
    return HessianCD(uxx, uyy, uxy)


def discrete_determinant(u: GridFunction, node: Node) -> float:
    return central_hessian(u, node).determinant


def laplacian5(u: GridFunction, node: Node) -> float:
    i, j = node
    return (
        u[i + 1, j] + u[i - 1, j] + u[i, j + 1] + u[i, j - 1] - 4 * u[node]
    ) / u.grid.h**2


def directional_second_differences(
    u: GridFunction, stencil: StencilDirections
) -> np.ndarray:
    """
    Second differences along every stencil direction at every interior node, as an
    array of shape (len(stencil), N-2, N-2). Entries are NaN where the direction
    isn't admissible at that node.
    """
    values = u.values
    n = u.grid.n
    h2 = u.grid.h**2
    out = np.full((len(stencil), n - 2, n - 2), np.nan)

    for k, (p, q) in enumerate(stencil.directions):
        # Nodes with both arms inside the grid: rows ra..n-1-ra, columns rb..n-1-rb
        ra, rb = max(abs(p), 1), max(abs(q), 1)
        if n - 2 * ra <= 0 or n - 2 * rb <= 0:
            continue
        center = values[ra : n - ra, rb : n - rb]
        plus = values[ra + p : n - ra + p, rb + q : n - rb + q]
        minus = values[ra - p : n - ra - p, rb - q : n - rb - q]
        d2 = (plus - 2 * center + minus) / ((p * p + q * q) * h2)
        out[k, ra - 1 : n - 1 - ra, rb - 1 : n - 1 - rb] = d2

    return out


def eigenvalue_fields(u: GridFunction, stencil: StencilDirections) -> EigenFields:
    d2 = directional_second_differences(u, stencil)
    admissible = ~np.isnan(d2)

    low = np.where(admissible, d2, np.inf)
    argmin = low.argmin(axis=0)
    high = np.where(admissible, d2, -np.inf)
    argmax = high.argmax(axis=0)

    return EigenFields(
        lambda_min=np.take_along_axis(low, argmin[np.newaxis], axis=0)[0],
        lambda_max=np.take_along_axis(high, argmax[np.newaxis], axis=0)[0],
        argmin=argmin,
        argmax=argmax,
    )


def central_hessian_field(
    u: GridFunction,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    v = u.values
    h2 = u.grid.h**2
    c = v[1:-1, 1:-1]
    uxx = (v[2:, 1:-1] + v[:-2, 1:-1] - 2 * c) / h2
    uyy = (v[1:-1, 2:] + v[1:-1, :-2] - 2 * c) / h2
    uxy = (v[2:, 2:] + v[:-2, :-2] - v[2:, :-2] - v[:-2, 2:]) / (4 * h2)
    return uxx, uyy, uxy


def determinant_field(u: GridFunction) -> np.ndarray:
    uxx, uyy, uxy = central_hessian_field(u)
    return uxx * uyy - uxy**2


def laplacian5_field(u: GridFunction) -> np.ndarray:
    return laplacian5_values(u.values, u.grid.h)


def laplacian5_values(values: np.ndarray, h: float) -> np.ndarray:
    """
    5-point Laplacian of a raw (N, N) array, over the interior nodes
    """
    return (
        values[2:, 1:-1]
        + values[:-2, 1:-1]
        + values[1:-1, 2:]
        + values[1:-1, :-2]
        - 4 * values[1:-1, 1:-1]
    ) / h**2
