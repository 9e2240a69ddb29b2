"""
Closed-form solution modes used as subtraction functions.

Every mode exposes its value, gradient, Laplacian and pure axis derivatives
up to fourth order, all hand-differentiated so that interface corrections
and source terms are exact to round-off.

Points are passed as ``(dim,)`` / ``(n, dim)`` arrays; in 1-D plain floats and
``(n,)`` arrays are accepted too.  A single point gives scalar results.

The 2-D families are written as real parts of sums ``c * z**a * conj(z)**b``
with ``z = (x - x0) + i (y - y0)``.  Derivatives then follow from the
Wirtinger operators, ``d/dx = d_z + d_zbar`` and ``d/dy = i (d_z - d_zbar)``,
applied to monomials, which keeps every formula closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .errors import EvalAtSingularCenter, ModeDomainError

__all__ = [
    "SingularMode",
    "PowerMode1D",
    "RadialPowerMode2D",
    "CrackModeIX",
    "Polynomial",
    "ModeBasis",
    "ModeExpansion",
    "IndependenceCheck",
    "eval_value",
    "eval_gradient",
    "eval_laplacian",
    "eval_axis_derivative",
    "check_basis_independence",
]

MAX_AXIS_ORDER = 4


def _falling(a: float, m: int) -> float:
    out = 1.0
    for j in range(m):
        out *= a - j
    return out


def _as_points(x, dim: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    if dim == 1:
        if arr.ndim == 0:
            return arr.reshape(1, 1), True
        if arr.ndim == 1:
            return arr.reshape(-1, 1), False
    else:
        if arr.ndim == 1 and arr.shape[0] == dim:
            return arr.reshape(1, dim), True
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got shape {arr.shape}")
    return arr, False


def _unwrap(values: np.ndarray, scalar: bool):
    return values[0] if scalar else values


class SingularMode:
    """Common interface for solution modes.

    Subclasses implement ``_derivative(pts, orders)`` for mixed partial
    derivatives ``orders = (m_x[, m_y])`` on an ``(n, dim)`` array of points
    already checked against the singular center.
    """

    dim: int
    center: tuple[float, ...]
    smoothness_radius: float = 0.0
    #: True when the mode has a singular point at ``center``.
    singular = True
    #: True when the mode carries a branch cut leaving ``center``; such a mode
    #: is never smooth across a closed curve around the center.
    has_branch_cut = False

    # -- evaluation -------------------------------------------------------
    def distance(self, x) -> np.ndarray:
        pts, scalar = _as_points(x, self.dim)
        return _unwrap(np.linalg.norm(pts - np.asarray(self.center), axis=1), scalar)

    def _checked(self, x) -> tuple[np.ndarray, bool]:
        pts, scalar = _as_points(x, self.dim)
        if self.singular:
            r = np.linalg.norm(pts - np.asarray(self.center), axis=1)
            if np.any(r == 0):
                raise EvalAtSingularCenter(f"{self!r} evaluated at its singular center")
        self._check_domain(pts)
        return pts, scalar

    def _check_domain(self, pts: np.ndarray) -> None:
        pass

    def value(self, x):
        pts, scalar = self._checked(x)
        return _unwrap(self._derivative(pts, (0,) * self.dim), scalar)

    def value_or_limit(self, x):
        """Like :meth:`value`, but return the limit at the singular center when it is finite."""
        pts, scalar = _as_points(x, self.dim)
        out = np.empty(pts.shape[0])
        at_center = np.all(pts == np.asarray(self.center), axis=1) if self.singular else np.zeros(len(pts), bool)
        if np.any(at_center):
            limit = self.center_limit()
            if limit is None:
                raise EvalAtSingularCenter(f"{self!r} has no finite value at its center")
            out[at_center] = limit
        if np.any(~at_center):
            out[~at_center] = self.value(pts[~at_center])
        return _unwrap(out, scalar)

    def center_limit(self) -> float | None:
        """Limit of the value at the center, or None if it is not finite."""
        return None

    def gradient(self, x):
        pts, scalar = self._checked(x)
        cols = []
        for axis in range(self.dim):
            orders = [0] * self.dim
            orders[axis] = 1
            cols.append(self._derivative(pts, tuple(orders)))
        return _unwrap(np.stack(cols, axis=1), scalar)

    def laplacian(self, x):
        pts, scalar = self._checked(x)
        return _unwrap(self._laplacian(pts), scalar)

    def _laplacian(self, pts: np.ndarray) -> np.ndarray:
        total = np.zeros(pts.shape[0])
        for axis in range(self.dim):
            orders = [0] * self.dim
            orders[axis] = 2
            total += self._derivative(pts, tuple(orders))
        return total

    def axis_derivative(self, x, axis: int, order: int):
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for a {self.dim}-D mode")
        if not 0 <= order <= MAX_AXIS_ORDER:
            raise ValueError(f"derivative order must be in 0..{MAX_AXIS_ORDER}")
        pts, scalar = self._checked(x)
        orders = [0] * self.dim
        orders[axis] = order
        return _unwrap(self._derivative(pts, tuple(orders)), scalar)

    def _derivative(self, pts: np.ndarray, orders: tuple[int, ...]) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class PowerMode1D(SingularMode):
    """``(x - x0)**p`` for ``x > x0``."""

    p: float
    x0: float = 0.0
    smoothness_radius: float = 0.0
    dim: int = field(default=1, init=False, repr=False)

    @property
    def center(self) -> tuple[float, ...]:
        return (float(self.x0),)

    def center_limit(self):
        return 0.0 if self.p > 0 else None

    def _check_domain(self, pts):
        if np.any(pts[:, 0] < self.x0):
            raise ModeDomainError(f"{self!r} is only defined for x > {self.x0}")

    def _derivative(self, pts, orders):
        (m,) = orders
        return _falling(self.p, m) * (pts[:, 0] - self.x0) ** (self.p - m)


class _WirtingerMode(SingularMode):
    """2-D mode given as ``Re sum c * z**a * conj(z)**b`` around ``center``."""

    dim = 2

    def _terms(self) -> Sequence[tuple[complex, float, float]]:
        raise NotImplementedError

    def _polar(self, pts):
        dx = pts[:, 0] - self.center[0]
        dy = pts[:, 1] - self.center[1]
        return np.hypot(dx, dy), np.arctan2(dy, dx)

    def _dz(self, r, theta, m, n):
        """``d_z**m d_zbar**n`` of the complex-valued sum, as a complex array."""
        out = np.zeros(r.shape, dtype=complex)
        for c, a, b in self._terms():
            coef = c * _falling(a, m) * _falling(b, n)
            if coef == 0:
                continue
            # z**s * conj(z)**t = r**(s+t) * exp(i (s-t) theta), theta in (-pi, pi]
            s, t = a - m, b - n
            out += coef * r ** (s + t) * np.exp(1j * (s - t) * theta)
        return out

    def _derivative(self, pts, orders):
        mx, my = orders
        r, theta = self._polar(pts)
        total = np.zeros(r.shape, dtype=complex)
        for j in range(mx + 1):
            for l in range(my + 1):
                w = comb(mx, j) * comb(my, l) * (-1) ** (my - l)
                total += w * self._dz(r, theta, j + l, mx + my - j - l)
        return np.real((1j) ** my * total)

    def _laplacian(self, pts):
        r, theta = self._polar(pts)
        return np.real(4.0 * self._dz(r, theta, 1, 1))


@dataclass(frozen=True)
class RadialPowerMode2D(_WirtingerMode):
    """``r**p`` with ``r = |x - center|``."""

    p: float
    center: tuple[float, float] = (0.0, 0.0)
    smoothness_radius: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def center_limit(self):
        return 0.0 if self.p > 0 else None

    def _terms(self):
        return ((1.0, self.p / 2, self.p / 2),)


@dataclass(frozen=True)
class CrackModeIX(_WirtingerMode):
    """x-component of the Mode I crack-opening displacement.

    ``sqrt(r) * ((kappa - 1/2) cos(theta/2) - 1/2 cos(3 theta/2))`` in polar
    coordinates about the crack tip, with the crack along ``theta = pi``.
    ``kappa = 3 - 4 nu`` for Poisson ratio ``nu``.  Evaluation on the crack
    faces (``theta = +-pi``) is rejected.
    """

    kappa: float
    center: tuple[float, float] = (0.0, 0.0)
    smoothness_radius: float = 0.0
    has_branch_cut = True

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    @classmethod
    def from_poisson_ratio(cls, nu: float, center=(0.0, 0.0)) -> "CrackModeIX":
        return cls(3.0 - 4.0 * nu, center)

    def center_limit(self):
        return 0.0

    def _check_domain(self, pts):
        dx = pts[:, 0] - self.center[0]
        dy = pts[:, 1] - self.center[1]
        if np.any((dy == 0) & (dx < 0)):
            raise ModeDomainError("crack mode is undefined on the crack faces theta = +-pi")

    def _terms(self):
        # sqrt(r) e^{i theta/2} = z^(1/2);  sqrt(r) e^{3i theta/2} = z * conj(z)^(-1/2)
        return ((self.kappa - 0.5, 0.5, 0.0), (-0.5, 1.0, -0.5))


@dataclass(frozen=True)
class Polynomial(SingularMode):
    """Monomial ``prod_k (x_k - c_k)**e_k`` with non-negative integer exponents."""

    exponents: tuple[int, ...]
    center: tuple[float, ...] | None = None
    smoothness_radius: float = 0.0
    singular = False

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps) or len(exps) not in (1, 2):
            raise ValueError("exponents must be 1 or 2 non-negative integers")
        object.__setattr__(self, "exponents", exps)
        center = (0.0,) * len(exps) if self.center is None else tuple(float(c) for c in self.center)
        object.__setattr__(self, "center", center)

    @property
    def dim(self) -> int:
        return len(self.exponents)

    def center_limit(self):
        return 1.0 if not any(self.exponents) else 0.0

    def _derivative(self, pts, orders):
        out = np.ones(pts.shape[0])
        for axis, (e, m) in enumerate(zip(self.exponents, orders)):
            if m > e:
                return np.zeros(pts.shape[0])
            out = out * (_falling(e, m) * (pts[:, axis] - self.center[axis]) ** (e - m))
        return out


@dataclass(frozen=True)
class ModeBasis:
    """Ordered modes; singular families count as low-regularity modes, polynomials as regular ones."""

    modes: tuple[SingularMode, ...]

    def __post_init__(self):
        modes = tuple(self.modes)
        if not modes:
            raise ValueError("a mode basis needs at least one mode")
        if len({m.dim for m in modes}) != 1:
            raise ValueError("all modes in a basis must share one dimension")
        object.__setattr__(self, "modes", modes)

    def __len__(self):
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)

    def __getitem__(self, i):
        return self.modes[i]

    @property
    def dim(self) -> int:
        return self.modes[0].dim

    @property
    def n_low(self) -> int:
        return sum(1 for m in self.modes if m.singular)

    @property
    def n_regular(self) -> int:
        return len(self.modes) - self.n_low

    def values(self, x) -> np.ndarray:
        """Mode values as columns, shape ``(n, len(basis))``."""
        pts, _ = _as_points(x, self.dim)
        return np.column_stack([m.value(pts) for m in self.modes])

    def laplacians(self, x) -> np.ndarray:
        pts, _ = _as_points(x, self.dim)
        return np.column_stack([m.laplacian(pts) for m in self.modes])


@dataclass(frozen=True)
class ModeExpansion:
    basis: ModeBasis
    coefficients: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.coefficients, dtype=float).reshape(-1)
        if k.size != len(self.basis):
            raise ValueError(f"{k.size} coefficients for {len(self.basis)} modes")
        object.__setattr__(self, "coefficients", k)

    def __call__(self, x):
        pts, scalar = _as_points(x, self.basis.dim)
        total = sum(k * m.value_or_limit(pts) for k, m in zip(self.coefficients, self.basis))
        return _unwrap(np.asarray(total), scalar)


def eval_value(mode: SingularMode, x):
    return mode.value(x)


def eval_gradient(mode: SingularMode, x):
    return mode.gradient(x)


def eval_laplacian(mode: SingularMode, x):
    return mode.laplacian(x)


def eval_axis_derivative(mode: SingularMode, x, axis: int, order: int):
    return mode.axis_derivative(x, axis, order)


@dataclass(frozen=True)
class IndependenceCheck:
    ok: bool
    min_singular_value_ratio: float


def check_basis_independence(
    basis: ModeBasis, sample_points, threshold: float = 1e-8
) -> IndependenceCheck:
    """Test linear independence of the sampled mode matrix via its singular values."""
    pts, _ = _as_points(sample_points, basis.dim)
    if pts.shape[0] < 2 * len(basis):
        raise ValueError(f"need at least {2 * len(basis)} sample points")
    sv = np.linalg.svd(basis.values(pts), compute_uv=False)
    ratio = float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0
    return IndependenceCheck(ratio > threshold, ratio)
