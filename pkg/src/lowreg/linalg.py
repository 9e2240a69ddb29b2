"""
Sparse factorization with right-hand-side reuse and dense least squares.

Sparse storage is :class:`scipy.sparse.csr_matrix`.  Square systems are
factored once with SuperLU (COLAMD ordering) and the factorization serves
any number of right-hand sides.  Least-squares problems are solved through
a Householder QR factorization rather than the normal equations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import RankDeficient, SingularMatrix

__all__ = ["as_sparse", "Factorization", "factor", "solve", "dense_lstsq"]

PIVOT_TOL = 1e-14
RANK_TOL = 1e-12


def as_sparse(m) -> sp.csr_matrix:
    """CSR copy of *m* with sorted, duplicate-free column indices."""
    out = sp.csr_matrix(m, dtype=float, copy=True)
    out.sum_duplicates()
    out.sort_indices()
    return out


def _inf_norm(m: sp.spmatrix) -> float:
    return float(abs(m).sum(axis=1).max()) if m.nnz else 0.0


@dataclass(frozen=True, eq=False)
class Factorization:
    """LU factors of a square sparse matrix; immutable and reusable."""

    matrix: sp.csc_matrix
    lu: spla.SuperLU

    @property
    def shape(self):
        return self.matrix.shape

    def solve(self, b):
        return solve(self, b)


def factor(m) -> Factorization:
    """Factor a square sparse matrix.

    Raises:
        SingularMatrix: if SuperLU reports an exactly singular factor or a
            pivot of ``U`` falls below ``1e-14 * ||M||_inf``.
    """
    csc = sp.csc_matrix(m, dtype=float)
    if csc.shape[0] != csc.shape[1]:
        raise ValueError(f"cannot factor a non-square {csc.shape} matrix")
    norm = _inf_norm(csc)
    if norm == 0:
        raise SingularMatrix("zero matrix")
    try:
        lu = spla.splu(csc, permc_spec="COLAMD")
    except RuntimeError as exc:  # "Factor is exactly singular"
        raise SingularMatrix(str(exc)) from exc
    pivots = np.abs(lu.U.diagonal())
    if pivots.min() <= PIVOT_TOL * norm:
        raise SingularMatrix(f"pivot {pivots.min():.3e} below {PIVOT_TOL:g} * ||M||_inf")
    return Factorization(csc, lu)


def solve(fac: Factorization, b) -> np.ndarray:
    """Solve ``M x = b`` for one vector or for every column of a 2-D array."""
    b = np.asarray(b, dtype=float)
    n = fac.shape[0]
    if b.shape[0] != n:
        raise ValueError(f"right-hand side has {b.shape[0]} rows, matrix has {n}")
    if b.size == 0:
        return np.zeros(b.shape)
    return fac.lu.solve(np.ascontiguousarray(b))


def dense_lstsq(g, b) -> tuple[np.ndarray, float]:
    """Minimize ``||G k - b||_2`` for a tall, full-column-rank ``G``.

    Returns ``(k, residual_norm)``.

    Raises:
        RankDeficient: if the smallest singular value of ``G`` is at most
            ``1e-12`` times the largest.
    """
    g = np.asarray(g, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    b = np.asarray(b, dtype=float).reshape(-1)
    m, ncol = g.shape
    if m < ncol:
        raise RankDeficient(f"{m} equations for {ncol} unknowns")
    if b.size != m:
        raise ValueError(f"G has {m} rows but b has {b.size}")
    sv = np.linalg.svd(g, compute_uv=False)
    if sv[0] == 0 or sv[-1] <= RANK_TOL * sv[0]:
        raise RankDeficient(f"singular value ratio {sv[-1] / sv[0] if sv[0] else 0:.3e}")
    q, r = scipy.linalg.qr(g, mode="economic")
    k = scipy.linalg.solve_triangular(r, q.T @ b)
    return k, float(np.linalg.norm(g @ k - b))
