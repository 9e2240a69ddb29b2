"""
Recovery of the mode coefficients ``k`` and of the exterior solution.

Two routes are provided.  Both ask for the inner unknowns ``u1`` to vanish.

* Schur route: eliminate the exterior block ``D`` and fit ``k`` so that the
  reduced inner right-hand side ``(F1 - B D^-1 F2) + (E1 - B D^-1 E2) k``
  is as small as possible in the least-squares sense.
* Fixed-point route: full-system solves ``S^-1 F`` and ``S^-1 E`` define an
  affine map ``k -> E^+ (P - F + Q k)``.  Its fixed point is computed
  directly instead of iterating.

With ``k`` known, the exterior unknowns follow from ``D u2 = F2 + E2 k``.
The full solution is then reassembled by adding ``sum k_i u_i`` back inside
the interface.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .assembly import BlockSystem, CaseSpec, assemble
from .errors import RankDeficient
from .geometry import classify_nodes
from .linalg import Factorization, dense_lstsq, factor, solve

__all__ = [
    "RecoveryResult",
    "schur_system",
    "schur_recover_k",
    "exterior_solve",
    "FixedPointMap",
    "fixed_point_map",
    "fixed_point_recover_k",
    "iterate_k",
    "reconstruct",
    "solve_case",
]

METHODS = ("schur", "fixed-point")


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    """Recovered coefficients together with the reconstructed solution.

    ``u_full`` holds one value per grid node; ``u_exterior`` follows the I2 order.
    """

    k: np.ndarray
    method: str
    ls_residual_norm: float
    u_full: np.ndarray
    u_exterior: np.ndarray
    blocks: BlockSystem | None = None


def _d_factor(blocks: BlockSystem, d_factor: Factorization | None) -> Factorization:
    return d_factor if d_factor is not None else factor(blocks.D)


def schur_system(blocks: BlockSystem, d_factor: Factorization | None = None):
    """Least-squares data ``(G, b)`` of the Schur route: minimize ``||G k - b||``."""
    fac = _d_factor(blocks, d_factor)
    y_f = solve(fac, blocks.F2)
    y_e = solve(fac, blocks.E2)
    if y_e.ndim == 1:
        y_e = y_e[:, None]
    B = blocks.B
    g = blocks.E1 - B @ y_e
    b = -(blocks.F1 - B @ y_f)
    return g, b


def schur_recover_k(blocks: BlockSystem, d_factor: Factorization | None = None):
    """Coefficients minimizing ``||(F1 - B D^-1 F2) + (E1 - B D^-1 E2) k||_2``.

    Returns ``(k, residual_norm)``.  Pass *d_factor* to reuse a factorization
    of the exterior block ``D``.
    """
    g, b = schur_system(blocks, d_factor)
    return dense_lstsq(g, b)


def exterior_solve(blocks: BlockSystem, k, d_factor: Factorization | None = None) -> np.ndarray:
    """Solve ``D u2 = F2 + E2 k``."""
    fac = _d_factor(blocks, d_factor)
    return solve(fac, blocks.F2 + blocks.E2 @ np.asarray(k, dtype=float))


@dataclass(frozen=True, eq=False)
class FixedPointMap:
    """The affine data of ``E k_next = (P - F) + Q k``.

    ``P`` and ``Q`` are ``S`` applied to ``S^-1 F`` and ``S^-1 E`` after
    their inner (I1) block has been zeroed.
    """

    E: np.ndarray
    F: np.ndarray
    P: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        q, r = scipy.linalg.qr(self.E, mode="economic")
        sv = np.abs(np.diag(r))
        if sv.size == 0 or sv.min() <= 1e-12 * sv.max():
            raise RankDeficient("mode-contribution matrix E is rank deficient")
        object.__setattr__(self, "_qr", (q, r))

    def _pinv_apply(self, y: np.ndarray) -> np.ndarray:
        q, r = self._qr
        return scipy.linalg.solve_triangular(r, q.T @ y)

    def __call__(self, k) -> np.ndarray:
        """One step of the map: least-squares solution of ``E k' = P - F + Q k``."""
        return self._pinv_apply(self.P - self.F + self.Q @ np.asarray(k, dtype=float))

    def residual_norm(self, k) -> float:
        """``||(E - Q) k - (P - F)||_2``."""
        k = np.asarray(k, dtype=float)
        return float(np.linalg.norm((self.E - self.Q) @ k - (self.P - self.F)))


def fixed_point_map(blocks: BlockSystem, s_factor: Factorization | None = None) -> FixedPointMap:
    fac = s_factor if s_factor is not None else factor(blocks.S)
    s_f = solve(fac, blocks.F)
    s_e = solve(fac, blocks.E)
    if s_e.ndim == 1:
        s_e = s_e[:, None]
    s_f[: blocks.n1] = 0.0
    s_e[: blocks.n1] = 0.0
    return FixedPointMap(blocks.E, blocks.F, blocks.S @ s_f, blocks.S @ s_e)


def iterate_k(blocks_or_map, k) -> np.ndarray:
    """Apply the fixed-point map once to *k*."""
    fmap = blocks_or_map if isinstance(blocks_or_map, FixedPointMap) else fixed_point_map(blocks_or_map)
    return fmap(k)


def fixed_point_recover_k(blocks: BlockSystem, variant: str = "fixed-point", fmap: FixedPointMap | None = None):
    """Coefficients from the fixed-point route; returns ``(k, residual_norm)``.

    ``variant="fixed-point"`` (default) returns the exact fixed point of the map,
    i.e. the solution of ``(I - E^+ Q) k = E^+ (P - F)``.  ``variant="lstsq"``
    returns instead the minimizer of ``||(E - Q) k - (P - F)||_2``; the two agree
    when that residual vanishes.  The residual reported is ``||(E - Q) k - (P - F)||_2``
    in both cases.
    """
    fmap = fmap if fmap is not None else fixed_point_map(blocks)
    if variant == "lstsq":
        k, res = dense_lstsq(fmap.E - fmap.Q, fmap.P - fmap.F)
        return k, res
    if variant != "fixed-point":
        raise ValueError(f"unknown variant {variant!r}")
    m = fmap._pinv_apply(fmap.Q)
    c = fmap._pinv_apply(fmap.P - fmap.F)
    lhs = np.eye(m.shape[1]) - m
    sv = np.linalg.svd(lhs, compute_uv=False)
    if sv[-1] <= 1e-12 * sv[0]:
        raise RankDeficient("fixed-point map has no unique fixed point")
    k = np.linalg.solve(lhs, c)
    return k, fmap.residual_norm(k)


def reconstruct(case: CaseSpec, k, u_exterior) -> np.ndarray:
    """Full-grid solution: modes inside, exterior unknowns outside, ``g`` on the boundary."""
    grid = case.grid
    part = classify_nodes(grid, case.iface)
    k = np.asarray(k, dtype=float)
    u_exterior = np.asarray(u_exterior, dtype=float)
    if k.size != len(case.basis) or u_exterior.size != part.outer.size:
        raise ValueError("coefficient or exterior vector has the wrong length")
    coords = grid.coordinates()
    u = np.zeros(grid.num_nodes)
    bnd = grid.boundary_mask()
    u[bnd] = case.boundary(coords[bnd])
    pts = coords[part.inner]
    for ki, mode in zip(k, case.basis):
        u[part.inner] += ki * mode.value_or_limit(pts)
    u[part.outer] = u_exterior
    return u


def solve_case(case: CaseSpec, method: str = "schur", blocks: BlockSystem | None = None) -> RecoveryResult:
    """Assemble, recover ``k``, solve the exterior and reconstruct."""
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    blocks = blocks if blocks is not None else assemble(case)
    d_fac = factor(blocks.D)
    if method == "schur":
        k, res = schur_recover_k(blocks, d_fac)
    else:
        k, res = fixed_point_recover_k(blocks)
    u2 = exterior_solve(blocks, k, d_fac)
    return RecoveryResult(
        k=k,
        method=method,
        ls_residual_norm=res,
        u_full=reconstruct(case, k, u2),
        u_exterior=u2,
        blocks=blocks,
    )
