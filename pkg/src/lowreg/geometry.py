"""
Uniform tensor-product grids, artificial interfaces and node classification.

Nodes are numbered lexicographically with the first axis varying slowest,
i.e. ``flat = numpy.ravel_multi_index(index_tuple, grid.shape)``.  An
artificial interface is described by a level function ``phi``; nodes with
``phi < 0`` belong to the inner region (Omega1) and every other interior node
belongs to the outer region (Omega2).  Nodes on the domain boundary are
always labelled ``BOUNDARY``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Sequence

import numpy as np

from .errors import InterfaceOutsideDomain

__all__ = [
    "Region",
    "UniformGrid",
    "InterfaceGeometry",
    "Point1D",
    "Circle2D",
    "NodeClassification",
    "classify_nodes",
    "stencil_arm_crossings",
]


class Region(IntEnum):
    OMEGA1 = 1
    OMEGA2 = 2
    BOUNDARY = 0


@dataclass(frozen=True)
class UniformGrid:
    """Uniform grid on a box ``prod [a_k, b_k]`` with ``N_k`` divisions per axis.

    Use :meth:`from_scalar` to build a square grid that shares one ``N`` on
    every axis.
    """

    bounds: tuple[tuple[float, float], ...]
    divisions: tuple[int, ...]

    def __post_init__(self):
        bounds = tuple((float(a), float(b)) for a, b in self.bounds)
        divisions = tuple(int(n) for n in self.divisions)
        if len(bounds) not in (1, 2) or len(bounds) != len(divisions):
            raise ValueError("grid must be 1-D or 2-D with one N per axis")
        for (a, b), n in zip(bounds, divisions):
            if not b > a:
                raise ValueError(f"empty interval [{a}, {b}]")
            if n < 4:
                raise ValueError(f"need at least 4 divisions per axis, got {n}")
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "divisions", divisions)

    @classmethod
    def from_scalar(cls, bounds: Sequence[tuple[float, float]], n: int) -> "UniformGrid":
        bounds = tuple(bounds)
        return cls(bounds, (int(n),) * len(bounds))

    @property
    def dim(self) -> int:
        return len(self.divisions)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple((b - a) / n for (a, b), n in zip(self.bounds, self.divisions))

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(n + 1 for n in self.divisions)

    @property
    def num_nodes(self) -> int:
        return int(np.prod(self.shape))

    def axis_coordinates(self, axis: int) -> np.ndarray:
        a, _ = self.bounds[axis]
        n = self.divisions[axis]
        return a + np.arange(n + 1) * self.spacing[axis]

    def multi_index(self, flat) -> tuple[np.ndarray, ...]:
        return np.unravel_index(np.asarray(flat), self.shape)

    def flat_index(self, *index) -> np.ndarray:
        return np.ravel_multi_index(tuple(np.asarray(i) for i in index), self.shape)

    def coordinates(self, flat=None) -> np.ndarray:
        """Node coordinates, shape ``(n, dim)``; all nodes when *flat* is None."""
        if flat is None:
            flat = np.arange(self.num_nodes)
        idx = self.multi_index(flat)
        cols = [
            a + np.asarray(i, dtype=float) * h
            for (a, _), i, h in zip(self.bounds, idx, self.spacing)
        ]
        return np.stack(cols, axis=-1)

    def boundary_mask(self) -> np.ndarray:
        idx = self.multi_index(np.arange(self.num_nodes))
        mask = np.zeros(self.num_nodes, dtype=bool)
        for i, n in zip(idx, self.divisions):
            mask |= (i == 0) | (i == n)
        return mask

    def refine(self, factor: int = 2) -> "UniformGrid":
        return UniformGrid(self.bounds, tuple(n * factor for n in self.divisions))


class InterfaceGeometry:
    """Base class for artificial interfaces given by a level function."""

    dim: int

    def level(self, points) -> np.ndarray:
        raise NotImplementedError

    def contains(self, points) -> np.ndarray:
        """True where a point lies strictly inside (Omega1)."""
        return self.level(points) < 0


@dataclass(frozen=True)
class Point1D(InterfaceGeometry):
    """Interface point ``x_c`` on a line; Omega1 is ``x < x_c``."""

    x_c: float
    dim: int = field(default=1, init=False)

    def level(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 1)
        return pts[:, 0] - self.x_c


@dataclass(frozen=True)
class Circle2D(InterfaceGeometry):
    center: tuple[float, float]
    radius: float
    dim: int = field(default=2, init=False)

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("circle radius must be positive")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def level(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return np.hypot(pts[:, 0] - self.center[0], pts[:, 1] - self.center[1]) - self.radius


@dataclass(frozen=True)
class NodeClassification:
    """Region label per node plus sorted interior index sets.

    Attributes:
        grid: the classified grid.
        labels: ``Region`` value for every node, shape ``(num_nodes,)``.
        inner: flat indices of interior Omega1 nodes (I1), ascending.
        outer: flat indices of interior Omega2 nodes (I2), ascending.
        inside: sign test ``phi < 0`` for every node, boundary nodes included.
    """

    grid: UniformGrid
    labels: np.ndarray
    inner: np.ndarray
    outer: np.ndarray
    inside: np.ndarray

    @property
    def unknowns(self) -> np.ndarray:
        """Interior nodes in unknown order: I1 first, then I2."""
        return np.concatenate([self.inner, self.outer])

    def unknown_position(self) -> np.ndarray:
        """Map flat node index to unknown position, -1 on boundary nodes."""
        pos = np.full(self.grid.num_nodes, -1, dtype=np.int64)
        pos[self.unknowns] = np.arange(self.inner.size + self.outer.size)
        return pos


def classify_nodes(grid: UniformGrid, iface: InterfaceGeometry) -> NodeClassification:
    """Partition the nodes of *grid* by the sign of the interface level function.

    Raises:
        InterfaceOutsideDomain: if no interior node lies inside, or none outside.
    """
    if iface.dim != grid.dim:
        raise ValueError(f"{iface.dim}-D interface on a {grid.dim}-D grid")
    phi = iface.level(grid.coordinates())
    inside = phi < 0
    boundary = grid.boundary_mask()
    labels = np.where(inside, Region.OMEGA1, Region.OMEGA2).astype(np.int8)
    labels[boundary] = Region.BOUNDARY
    inner = np.flatnonzero(inside & ~boundary)
    outer = np.flatnonzero(~inside & ~boundary)
    if inner.size == 0 or outer.size == 0:
        raise InterfaceOutsideDomain("level function does not change sign over interior nodes")
    return NodeClassification(grid, labels, inner, outer, inside)


def stencil_arm_crossings(
    classification: NodeClassification, node: int, offsets: Sequence[Sequence[int]] | Sequence[int]
) -> list[int]:
    """Neighbors of *node* reached by *offsets* that sit on the other side of the interface.

    *offsets* are integer index shifts, one tuple per neighbor (plain ints are
    accepted in 1-D).  Boundary neighbors are never reported.
    """
    grid = classification.grid
    labels = classification.labels
    center_idx = np.array([int(i) for i in grid.multi_index(node)])
    center_label = labels[node]
    if center_label == Region.BOUNDARY:
        raise ValueError(f"node {node} is a boundary node")
    crossings = []
    for off in offsets:
        off = np.atleast_1d(np.asarray(off, dtype=int))
        nb = int(grid.flat_index(*(center_idx + off)))
        if labels[nb] != Region.BOUNDARY and labels[nb] != center_label:
            crossings.append(nb)
    return crossings
