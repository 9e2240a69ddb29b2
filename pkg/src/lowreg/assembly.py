"""
Assembly of the partitioned interface system ``S u = F + E k``.

The unknowns are the interior grid values of the subtracted solution
``u_tilde``: ``u - sum k_i u_i`` inside the interface (Omega1) and ``u``
outside (Omega2).  Rows use dimension-by-dimension Laplacian stencils of
order 2 or 4.  Whenever a stencil arm crosses the interface, the neighbor's
unknown is shifted back to the center's side by adding or subtracting
``sum k_i u_i(neighbor)``.  The subtracted modes are smooth away from their
singular center, so this shift is exact, and its ``k``-dependence goes into
the columns of ``E``.  Dirichlet values are folded into ``F``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import factorial
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import (
    BoundaryInsideOmega1,
    DimensionMismatch,
    EvalAtSingularCenter,
    ModeNotSmoothAcrossInterface,
    SingularVandermonde,
)
from .geometry import InterfaceGeometry, NodeClassification, UniformGrid, classify_nodes
from .modes import ModeBasis

__all__ = [
    "CaseSpec",
    "BlockSystem",
    "fd_weights",
    "axis_stencil",
    "assemble",
    "apply_blocks",
    "dump_coo",
]

PointFunction = Callable[[np.ndarray], np.ndarray]

SINGULAR_NODE_TOL = 1e-12


def fd_weights(offsets: Sequence[float], order: int, h: float = 1.0) -> np.ndarray:
    """Weights ``w`` with ``sum_j w_j q(offsets_j h) = q^(order)(0)`` for polynomials
    ``q`` of degree below ``len(offsets)``.

    >>> fd_weights([-1, 0, 1], 2)
    array([ 1., -2.,  1.])
    """
    offs = np.asarray(offsets, dtype=float)
    if offs.size <= order:
        raise ValueError(f"{offs.size} offsets cannot resolve a derivative of order {order}")
    if np.unique(offs).size != offs.size:
        raise SingularVandermonde(f"repeated offsets in {list(offsets)}")
    n = offs.size
    vander = offs[None, :] ** np.arange(n)[:, None]
    rhs = np.zeros(n)
    rhs[order] = factorial(order)
    return np.linalg.solve(vander, rhs) / h**order


def axis_stencil(i: int, n: int, order: int) -> tuple[int, ...]:
    """Second-derivative stencil offsets at index ``i`` of an axis with ``n`` divisions.

    Order 2 always uses ``(-1, 0, 1)``.  Order 4 uses the five-point central
    stencil where it fits and six-point one-sided stencils next to the ends.
    """
    if not 0 < i < n:
        raise ValueError(f"index {i} is not interior on an axis with {n} divisions")
    if order == 2:
        return (-1, 0, 1)
    if order != 4:
        raise ValueError(f"unsupported order {order}")
    if i == 1:
        return (-1, 0, 1, 2, 3, 4)
    if i == n - 1:
        return (-4, -3, -2, -1, 0, 1)
    return (-2, -1, 0, 1, 2)


@dataclass(frozen=True)
class CaseSpec:
    """A Poisson problem ``Laplace(u) = f`` with Dirichlet data and a subtraction basis.

    ``source``, ``boundary`` and ``exact_solution`` map an ``(n, dim)`` array of
    points to ``(n,)`` values.  Only the unit diffusion coefficient is supported.
    """

    grid: UniformGrid
    iface: InterfaceGeometry
    basis: ModeBasis
    order: int
    source: PointFunction
    boundary: PointFunction
    exact_solution: PointFunction | None = None
    exact_coefficients: np.ndarray | None = None
    coefficient: float = 1.0
    name: str = ""

    def __post_init__(self):
        if self.order not in (2, 4):
            raise ValueError(f"order must be 2 or 4, got {self.order}")
        if self.coefficient != 1.0:
            raise ValueError("only the constant coefficient a(x) = 1 is supported")
        if not (self.grid.dim == self.iface.dim == self.basis.dim):
            raise ValueError("grid, interface and basis dimensions differ")
        if self.exact_coefficients is not None:
            k = np.asarray(self.exact_coefficients, dtype=float).reshape(-1)
            if k.size != len(self.basis):
                raise ValueError("exact_coefficients length differs from the basis size")
            object.__setattr__(self, "exact_coefficients", k)

    def with_grid(self, grid: UniformGrid) -> "CaseSpec":
        return replace(self, grid=grid)

    def with_order(self, order: int) -> "CaseSpec":
        return replace(self, order=order)


@dataclass(frozen=True, eq=False)
class BlockSystem:
    """``S u = F + E k`` over interior unknowns ordered as (I1, I2).

    Attributes:
        S: sparse system matrix.
        F: load vector including folded Dirichlet data.
        E: dense mode-contribution matrix, one column per mode.
        partition: node classification that fixes the unknown order.
        boundary_weights: per-row sum of stencil weights folded from
            Dirichlet neighbors.
    """

    S: sp.csr_matrix
    F: np.ndarray
    E: np.ndarray
    partition: NodeClassification
    boundary_weights: np.ndarray

    @property
    def n1(self) -> int:
        return self.partition.inner.size

    @property
    def n2(self) -> int:
        return self.partition.outer.size

    @property
    def A(self):
        return self.S[: self.n1, : self.n1]

    @property
    def B(self):
        return self.S[: self.n1, self.n1 :]

    @property
    def C(self):
        return self.S[self.n1 :, : self.n1]

    @property
    def D(self):
        return self.S[self.n1 :, self.n1 :]

    @property
    def F1(self):
        return self.F[: self.n1]

    @property
    def F2(self):
        return self.F[self.n1 :]

    @property
    def E1(self):
        return self.E[: self.n1]

    @property
    def E2(self):
        return self.E[self.n1 :]


def _stencil_triples(grid: UniformGrid, unknowns: np.ndarray, order: int):
    """(row, neighbor node, weight) triples for the Laplacian at every unknown."""
    idx = grid.multi_index(unknowns)
    rows_out, nbs_out, wts_out = [], [], []
    rows = np.arange(unknowns.size)
    for axis in range(grid.dim):
        n = grid.divisions[axis]
        h = grid.spacing[axis]
        ia = idx[axis]
        groups = {}
        for pos in (1, 2, n - 2, n - 1):
            groups.setdefault(axis_stencil(pos, n, order), []).append(pos)
        # the central group covers every index not claimed by an end stencil
        central = axis_stencil(n // 2, n, order)
        special = [p for key, ps in groups.items() if key != central for p in ps]
        for offsets in sorted(set(groups) | {central}):
            if offsets == central:
                sel = ~np.isin(ia, special)
            else:
                sel = np.isin(ia, groups[offsets])
            if not np.any(sel):
                continue
            weights = fd_weights(offsets, 2, h)
            for off, w in zip(offsets, weights):
                shifted = list(i[sel] for i in idx)
                shifted[axis] = shifted[axis] + off
                rows_out.append(rows[sel])
                nbs_out.append(grid.flat_index(*shifted))
                wts_out.append(np.full(int(sel.sum()), w))
    return np.concatenate(rows_out), np.concatenate(nbs_out), np.concatenate(wts_out)


def assemble(case: CaseSpec) -> BlockSystem:
    """Build ``S``, ``F`` and ``E`` for *case*.

    Raises:
        ModeNotSmoothAcrossInterface: a mode is evaluated at a cross-side node
            inside its smoothness exclusion, or carries a branch cut.
        BoundaryInsideOmega1: an Omega1 row reaches a Dirichlet node where a
            mode has no finite value.
    """
    grid = case.grid
    part = classify_nodes(grid, case.iface)
    unknowns = part.unknowns
    n = unknowns.size
    nmodes = len(case.basis)
    pos = part.unknown_position()
    boundary = grid.boundary_mask()
    coords = grid.coordinates()

    rows, nbs, wts = _stencil_triples(grid, unknowns, case.order)
    center_in = part.inside[unknowns][rows]
    nb_in = part.inside[nbs]
    nb_bnd = boundary[nbs]

    inner = ~nb_bnd
    S = sp.csr_matrix((wts[inner], (rows[inner], pos[nbs[inner]])), shape=(n, n))
    S.sum_duplicates()
    S.sort_indices()

    F = np.zeros(n)
    E = np.zeros((n, nmodes))
    boundary_weights = np.bincount(rows[nb_bnd], weights=wts[nb_bnd], minlength=n)

    # Dirichlet folding: the Omega1 rows see g - sum k_i u_i at the boundary
    b_rows, b_nbs, b_w = rows[nb_bnd], nbs[nb_bnd], wts[nb_bnd]
    F -= np.bincount(b_rows, weights=b_w * case.boundary(coords[b_nbs]), minlength=n)
    jump_b = center_in[nb_bnd]
    for i, mode in enumerate(case.basis):
        if not np.any(jump_b):
            break
        try:
            vals = mode.value_or_limit(coords[b_nbs[jump_b]])
        except EvalAtSingularCenter as exc:
            raise BoundaryInsideOmega1(str(exc)) from exc
        E[:, i] += np.bincount(b_rows[jump_b], weights=b_w[jump_b] * vals, minlength=n)

    # interface corrections for arms that cross the interface
    cross = inner & (center_in != nb_in)
    c_rows, c_nbs = rows[cross], nbs[cross]
    c_w = np.where(center_in[cross], 1.0, -1.0) * wts[cross]
    for i, mode in enumerate(case.basis):
        if not np.any(cross):
            break
        _check_smooth(mode, coords[c_nbs])
        vals = mode.value(coords[c_nbs])
        E[:, i] += np.bincount(c_rows, weights=c_w * vals, minlength=n)

    # sources; the Omega1 rows carry f - sum k_i Laplace(u_i)
    x_rows = coords[unknowns]
    singular = np.zeros(n, dtype=bool)
    for mode in case.basis:
        if mode.singular:
            singular |= np.linalg.norm(x_rows - np.asarray(mode.center), axis=1) < SINGULAR_NODE_TOL
    regular = ~singular
    F[regular] += case.source(x_rows[regular])
    in1 = part.inside[unknowns] & regular
    if np.any(in1):
        E[in1] -= case.basis.laplacians(x_rows[in1])

    return BlockSystem(S, F, E, part, boundary_weights)


def _check_smooth(mode, points: np.ndarray) -> None:
    if mode.has_branch_cut:
        raise ModeNotSmoothAcrossInterface(
            f"{mode!r} has a branch cut that crosses any interface around its center"
        )
    if mode.singular:
        dist = np.linalg.norm(points - np.asarray(mode.center), axis=1)
        if np.any(dist <= mode.smoothness_radius) or np.any(dist == 0):
            raise ModeNotSmoothAcrossInterface(
                f"{mode!r} used at distance {dist.min():.3e} from its center"
            )


def apply_blocks(blocks: BlockSystem, u1, u2) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(A u1 + B u2, C u1 + D u2)``."""
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    if u1.shape[0] != blocks.n1 or u2.shape[0] != blocks.n2:
        raise DimensionMismatch(
            f"expected lengths ({blocks.n1}, {blocks.n2}), got ({u1.shape[0]}, {u2.shape[0]})"
        )
    return blocks.A @ u1 + blocks.B @ u2, blocks.C @ u1 + blocks.D @ u2


def dump_coo(blocks: BlockSystem, prefix) -> list[str]:
    """Write ``S``, ``F`` and ``E`` as ``row col value`` text files; returns the paths.

    Vectors use ``row 0 value``; ``E`` uses the mode index as column.
    """
    prefix = Path(prefix)
    coo = blocks.S.tocoo()
    paths = []
    for suffix, (r, c, v) in {
        "S": (coo.row, coo.col, coo.data),
        "F": (np.arange(blocks.F.size), np.zeros(blocks.F.size, int), blocks.F),
        "E": (*np.nonzero(blocks.E), blocks.E[np.nonzero(blocks.E)]),
    }.items():
        path = prefix.with_name(f"{prefix.name}_{suffix}.coo")
        np.savetxt(path, np.column_stack([r, c, v]), fmt=["%d", "%d", "%.17g"])
        paths.append(str(path))
    return paths
