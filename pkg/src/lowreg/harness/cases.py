"""Built-in Poisson cases with known low-regularity solutions."""

from __future__ import annotations

import numpy as np

from ..assembly import CaseSpec
from ..errors import UnknownCase
from ..geometry import Circle2D, Point1D, UniformGrid
from ..modes import ModeBasis, Polynomial, PowerMode1D, RadialPowerMode2D

__all__ = ["CASE_IDS", "builtin_case", "quadratic_probe_case", "smooth_sine_case"]

CASE_IDS = ("poisson1d-single", "poisson1d-two", "poisson2d-radial")

LINE = ((0.0, np.pi),)
SQUARE = ((-1.0, 1.0), (-1.0, 1.0))


def _x(p):
    return np.asarray(p, dtype=float)[:, 0]


def _r(p):
    p = np.asarray(p, dtype=float)
    return np.hypot(p[:, 0], p[:, 1])


def _single_u(p):
    return 2.0 * np.sqrt(_x(p))


def _single_f(p):
    return -0.5 * _x(p) ** -1.5


def _two_u(p):
    x = _x(p)
    return 2.0 * np.sqrt(x) + 3.0 * x**1.5


def _two_f(p):
    x = _x(p)
    return -0.5 * x**-1.5 + 2.25 * x**-0.5


def _radial_u(p):
    return np.sqrt(_r(p))


def _radial_f(p):
    return 0.25 * _r(p) ** -1.5


def builtin_case(case_id: str, n: int = 20, order: int = 2) -> CaseSpec:
    """Return one of the shipped cases on a grid with *n* divisions per axis.

    ``poisson1d-single``: ``u = 2 sqrt(x)`` on ``[0, pi]``, basis ``{x^(1/2)}``, interface ``x = 0.5``.
    ``poisson1d-two``: ``u = 2 x^(1/2) + 3 x^(3/2)``, basis ``{x^(1/2), x^(3/2)}``.
    ``poisson2d-radial``: ``u = r^(1/2)`` on ``[-1, 1]^2``, basis ``{r^(1/2)}``, circle of radius 0.5.
    """
    if case_id == "poisson1d-single":
        return CaseSpec(
            grid=UniformGrid.from_scalar(LINE, n),
            iface=Point1D(0.5),
            basis=ModeBasis((PowerMode1D(0.5),)),
            order=order,
            source=_single_f,
            boundary=_single_u,
            exact_solution=_single_u,
            exact_coefficients=np.array([2.0]),
            name=case_id,
        )
    if case_id == "poisson1d-two":
        return CaseSpec(
            grid=UniformGrid.from_scalar(LINE, n),
            iface=Point1D(0.5),
            basis=ModeBasis((PowerMode1D(0.5), PowerMode1D(1.5))),
            order=order,
            source=_two_f,
            boundary=_two_u,
            exact_solution=_two_u,
            exact_coefficients=np.array([2.0, 3.0]),
            name=case_id,
        )
    if case_id == "poisson2d-radial":
        return CaseSpec(
            grid=UniformGrid.from_scalar(SQUARE, n),
            iface=Circle2D((0.0, 0.0), 0.5),
            basis=ModeBasis((RadialPowerMode2D(0.5),)),
            order=order,
            source=_radial_f,
            boundary=_radial_u,
            exact_solution=_radial_u,
            exact_coefficients=np.array([1.0]),
            name=case_id,
        )
    raise UnknownCase(case_id)


def quadratic_probe_case(n: int = 20, order: int = 2) -> CaseSpec:
    """``u = 3 x^2`` on ``[0, pi]`` with basis ``{x^2}``; every stencil is exact on it."""

    def u(p):
        return 3.0 * _x(p) ** 2

    return CaseSpec(
        grid=UniformGrid.from_scalar(LINE, n),
        iface=Point1D(0.5),
        basis=ModeBasis((Polynomial((2,)),)),
        order=order,
        source=lambda p: np.full(len(p), 6.0),
        boundary=u,
        exact_solution=u,
        exact_coefficients=np.array([3.0]),
        name="quadratic-probe",
    )


def smooth_sine_case(n: int = 20, order: int = 2) -> CaseSpec:
    """``u = sin(x)`` on ``[0, pi]``; a smooth reference for the baseline scheme."""

    def u(p):
        return np.sin(_x(p))

    return CaseSpec(
        grid=UniformGrid.from_scalar(LINE, n),
        iface=Point1D(0.5),
        basis=ModeBasis((PowerMode1D(0.5),)),
        order=order,
        source=lambda p: -np.sin(_x(p)),
        boundary=u,
        exact_solution=u,
        name="smooth-sine",
    )
