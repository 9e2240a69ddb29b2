"""Self-checks: mode derivatives against finite differences, and the dense oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg.lapack as lapack

from ..assembly import BlockSystem, assemble
from ..modes import CrackModeIX, Polynomial, PowerMode1D, RadialPowerMode2D, SingularMode
from ..solver import schur_recover_k
from .cases import builtin_case

__all__ = [
    "DerivativeCheck",
    "default_check_modes",
    "sample_points",
    "check_mode_derivatives",
    "mode_derivative_suite",
    "dense_oracle_k",
    "OracleCheck",
    "oracle_check",
]

GRAD_STEP = 1e-5
# fourth-order differences keep truncation well under 1e-6 at r = 0.1
SECOND_STEP = 1e-3
HIGHER_STEP = 1e-3
MIN_DISTANCE = 0.1


@dataclass(frozen=True)
class DerivativeCheck:
    mode: str
    quantity: str
    max_rel_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_rel_error <= self.tol


def default_check_modes() -> list[SingularMode]:
    return [
        PowerMode1D(0.5),
        PowerMode1D(1.5),
        PowerMode1D(0.5, x0=-0.3),
        Polynomial((3,)),
        RadialPowerMode2D(0.5),
        RadialPowerMode2D(1.5, (0.2, -0.1)),
        Polynomial((2, 3), (0.1, 0.0)),
        CrackModeIX(1.0),
        CrackModeIX(1.8),
        CrackModeIX(2.2),
    ]


def sample_points(mode: SingularMode, count: int = 200, seed: int = 0) -> np.ndarray:
    """Random points at distance 0.1 to 1.5 from the mode center.

    For branch-cut modes the points keep clear of the cut so that every
    finite-difference stencil stays on one sheet.
    """
    rng = np.random.default_rng(seed)
    c = np.asarray(mode.center)
    if not mode.singular:
        # keep every factor (x_k - c_k) away from zero
        return c + rng.uniform(0.2, 1.2, (count, mode.dim))
    if mode.dim == 1:
        return (c[0] + rng.uniform(MIN_DISTANCE, 1.5, count)).reshape(-1, 1)
    r = rng.uniform(MIN_DISTANCE, 1.5, count)
    lim = np.pi - 0.05 if mode.has_branch_cut else np.pi
    theta = rng.uniform(-lim, lim, count)
    return c + np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def _shift(pts, axis, step):
    out = pts.copy()
    out[:, axis] += step
    return out


def _d1(fn, pts, axis, h):
    """Fourth-order central first difference of ``fn`` along *axis*."""
    return (
        -fn(_shift(pts, axis, 2 * h)) + 8 * fn(_shift(pts, axis, h))
        - 8 * fn(_shift(pts, axis, -h)) + fn(_shift(pts, axis, -2 * h))
    ) / (12 * h)


def _d2(fn, pts, axis, h):
    """Fourth-order central second difference of ``fn`` along *axis*."""
    return (
        -fn(_shift(pts, axis, 2 * h)) + 16 * fn(_shift(pts, axis, h)) - 30 * fn(pts)
        + 16 * fn(_shift(pts, axis, -h)) - fn(_shift(pts, axis, -2 * h))
    ) / (12 * h * h)


def check_mode_derivatives(mode: SingularMode, pts: np.ndarray, label: str | None = None) -> list[DerivativeCheck]:
    """Compare closed-form derivatives of *mode* with central differences.

    * gradient: two-point central differences of values, step ``1e-5``;
      vector relative error, tolerance ``1e-6``.
    * Laplacian: fourth-order central second differences of values, step
      ``1e-3``; tolerance ``1e-6``.
    * axis derivatives of order 3 and 4: fourth-order central differences of
      the analytic derivative one order lower, step ``1e-3``; tolerance ``1e-6``.
    """
    label = label or repr(mode)
    checks = []

    grad = mode.gradient(pts)
    fd = np.column_stack(
        [
            (mode.value(_shift(pts, a, GRAD_STEP)) - mode.value(_shift(pts, a, -GRAD_STEP))) / (2 * GRAD_STEP)
            for a in range(mode.dim)
        ]
    )
    scale = np.maximum(np.linalg.norm(grad, axis=1), 1e-300)
    checks.append(DerivativeCheck(label, "gradient", float(np.max(np.linalg.norm(fd - grad, axis=1) / scale)), 1e-6))

    lap = mode.laplacian(pts)
    fd_lap = sum(_d2(mode.value, pts, a, SECOND_STEP) for a in range(mode.dim))
    scale = np.maximum(np.abs(lap), _second_derivative_scale(mode, pts))
    checks.append(DerivativeCheck(label, "laplacian", float(np.max(np.abs(fd_lap - lap) / scale)), 1e-6))

    for order in (3, 4):
        worst = 0.0
        for a in range(mode.dim):
            exact = mode.axis_derivative(pts, a, order)
            fd_d = _d1(lambda q: mode.axis_derivative(q, a, order - 1), pts, a, HIGHER_STEP)
            denom = np.maximum(np.abs(exact), _axis_scale(mode, pts, order))
            worst = max(worst, float(np.max(np.abs(fd_d - exact) / denom)))
        checks.append(DerivativeCheck(label, f"axis-derivative-{order}", worst, 1e-6))
    return checks


def _second_derivative_scale(mode, pts):
    # harmonic or polynomial pieces can make the Laplacian vanish; measure
    # against the size of the individual second derivatives instead
    return np.maximum(sum(np.abs(mode.axis_derivative(pts, a, 2)) for a in range(mode.dim)), 1e-300)


def _axis_scale(mode, pts, order):
    # an identically vanishing derivative is compared in absolute terms
    scale = sum(np.abs(mode.axis_derivative(pts, a, order)) for a in range(mode.dim))
    return np.where(scale > 0, scale, 1.0)


def mode_derivative_suite(count: int = 200, seed: int = 0, modes=None) -> list[DerivativeCheck]:
    """Derivative checks for every mode family at *count* sampled points each."""
    results = []
    for mode in modes if modes is not None else default_check_modes():
        results += check_mode_derivatives(mode, sample_points(mode, count, seed))
    return results


def dense_oracle_k(blocks: BlockSystem) -> np.ndarray:
    """Coefficients from the dense augmented system with the inner unknowns fixed to zero.

    With ``u1 = 0`` the system ``S u = F + E k`` reads ``B u2 - E1 k = F1`` and
    ``D u2 - E2 k = F2``.  The exterior rows are imposed exactly and the inner
    rows in the least-squares sense.  The resulting equality-constrained problem
    goes to LAPACK ``dgglse`` on dense copies of the blocks.
    """
    S = blocks.S.toarray()
    n1 = blocks.n1
    E = blocks.E
    a = np.hstack([S[:n1, n1:], -E[:n1]])
    b = np.hstack([S[n1:, n1:], -E[n1:]])
    t, r, d, x, info = lapack.dgglse(a, b, blocks.F[:n1].copy(), blocks.F[n1:].copy())
    if info != 0:
        raise RuntimeError(f"dgglse failed with info={info}")
    return x[blocks.n2 :]


@dataclass(frozen=True)
class OracleCheck:
    case_id: str
    n: int
    order: int
    k_schur: np.ndarray
    k_oracle: np.ndarray
    tol: float = 1e-10

    @property
    def max_diff(self) -> float:
        return float(np.max(np.abs(self.k_schur - self.k_oracle)))

    @property
    def passed(self) -> bool:
        return self.max_diff <= self.tol


def oracle_check(case_id: str = "poisson1d-single", n: int = 20, order: int = 2) -> OracleCheck:
    blocks = assemble(builtin_case(case_id, n, order))
    k, _ = schur_recover_k(blocks)
    return OracleCheck(case_id, n, order, k, dense_oracle_k(blocks))
