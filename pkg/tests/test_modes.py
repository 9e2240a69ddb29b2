import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowreg.errors import EvalAtSingularCenter, ModeDomainError
from lowreg.harness.checks import check_mode_derivatives, default_check_modes, sample_points
from lowreg.modes import (
    CrackModeIX,
    ModeBasis,
    ModeExpansion,
    Polynomial,
    PowerMode1D,
    RadialPowerMode2D,
    check_basis_independence,
    eval_axis_derivative,
    eval_gradient,
    eval_laplacian,
    eval_value,
)


def test_values():
    assert eval_value(PowerMode1D(0.5), 0.25) == pytest.approx(0.5)
    assert eval_value(RadialPowerMode2D(0.5), (1.0, 0.0)) == pytest.approx(1.0)
    # sqrt(1) * ((1.8 - 0.5) cos 0 - 0.5 cos 0)
    assert eval_value(CrackModeIX(1.8), (1.0, 0.0)) == pytest.approx(0.8)


def test_derivatives():
    assert eval_laplacian(RadialPowerMode2D(0.5), (1.0, 0.0)) == pytest.approx(0.25)
    np.testing.assert_allclose(eval_gradient(PowerMode1D(0.5), 1.0), [0.5])
    assert eval_axis_derivative(PowerMode1D(1.5), 1.0, 0, 2) == pytest.approx(0.75)


def test_crack_mode_polar_form():
    kappa = 2.2
    mode = CrackModeIX(kappa)
    r, theta = 0.7, 2.1
    expected = np.sqrt(r) * ((kappa - 0.5) * np.cos(theta / 2) - 0.5 * np.cos(1.5 * theta))
    assert mode.value((r * np.cos(theta), r * np.sin(theta))) == pytest.approx(expected, rel=1e-14)
    assert CrackModeIX.from_poisson_ratio(0.3).kappa == pytest.approx(1.8)


def test_vectorised_shapes():
    mode = RadialPowerMode2D(0.5)
    pts = np.array([[1.0, 0.0], [0.0, 2.0], [0.3, 0.4]])
    assert mode.value(pts).shape == (3,)
    assert mode.gradient(pts).shape == (3, 2)
    assert mode.laplacian(pts).shape == (3,)
    assert PowerMode1D(0.5).value(np.array([0.25, 1.0])).shape == (2,)


@pytest.mark.parametrize(
    "mode, point",
    [
        (PowerMode1D(0.5), 0.0),
        (RadialPowerMode2D(0.5), (0.0, 0.0)),
        (CrackModeIX(1.8, (0.2, 0.1)), (0.2, 0.1)),
    ],
)
def test_singular_center_rejected(mode, point):
    for fn in (eval_value, eval_gradient, eval_laplacian):
        with pytest.raises(EvalAtSingularCenter):
            fn(mode, point)
    assert mode.value_or_limit(point) == 0.0


def test_negative_exponent_has_no_limit():
    with pytest.raises(EvalAtSingularCenter):
        PowerMode1D(-0.5).value_or_limit(0.0)


def test_domain_errors():
    with pytest.raises(ModeDomainError):
        PowerMode1D(0.5).value(-0.1)
    with pytest.raises(ModeDomainError):
        CrackModeIX(1.8).value((-1.0, 0.0))


def test_axis_derivative_bounds():
    with pytest.raises(ValueError):
        PowerMode1D(0.5).axis_derivative(1.0, 0, 5)
    with pytest.raises(ValueError):
        RadialPowerMode2D(0.5).axis_derivative((1.0, 0.0), 2, 1)


def test_polynomial_mode():
    m = Polynomial((2, 1), (0.5, 0.0))
    assert m.value((1.5, 2.0)) == pytest.approx(2.0)
    np.testing.assert_allclose(m.gradient((1.5, 2.0)), [4.0, 1.0])
    assert m.laplacian((1.5, 2.0)) == pytest.approx(4.0)
    assert m.axis_derivative((1.5, 2.0), 0, 3) == 0.0
    assert m.value((0.5, 0.0)) == 0.0  # not singular


@pytest.mark.parametrize("mode", default_check_modes(), ids=repr)
def test_gradient_matches_central_difference(mode):
    pts = sample_points(mode, 100, seed=1)
    h = 1e-5
    grad = mode.gradient(pts)
    for axis in range(mode.dim):
        e = np.zeros(mode.dim)
        e[axis] = h
        fd = (mode.value(pts + e) - mode.value(pts - e)) / (2 * h)
        rel = np.abs(fd - grad[:, axis]) / np.maximum(np.linalg.norm(grad, axis=1), 1e-300)
        assert rel.max() <= 1e-6


@pytest.mark.parametrize("mode", default_check_modes(), ids=repr)
def test_laplacian_matches_three_point_difference(mode):
    pts = sample_points(mode, 100, seed=2)
    h = 1e-4
    fd = sum(
        mode.value(pts + h * np.eye(mode.dim)[a]) - 2 * mode.value(pts) + mode.value(pts - h * np.eye(mode.dim)[a])
        for a in range(mode.dim)
    ) / h**2
    lap = mode.laplacian(pts)
    scale = np.maximum(np.abs(lap), sum(np.abs(mode.axis_derivative(pts, a, 2)) for a in range(mode.dim)))
    assert (np.abs(fd - lap) / scale).max() <= 1e-5


@pytest.mark.parametrize("mode", default_check_modes(), ids=repr)
def test_higher_axis_derivatives(mode):
    for check in check_mode_derivatives(mode, sample_points(mode, 50, seed=3)):
        assert check.passed, check


def test_radial_laplacian_closed_form():
    p = 0.5
    mode = RadialPowerMode2D(p)
    pts = sample_points(mode, 50)
    r = np.hypot(*pts.T)
    np.testing.assert_allclose(mode.laplacian(pts), p**2 * r ** (p - 2), rtol=1e-13)


def test_crack_first_term_is_harmonic():
    # (kappa - 1/2) sqrt(r) cos(theta/2) is harmonic, so the Laplacian only sees the second term
    pts = sample_points(CrackModeIX(1.0), 50)
    np.testing.assert_allclose(CrackModeIX(1.0).laplacian(pts), CrackModeIX(2.2).laplacian(pts), rtol=1e-12)


@settings(max_examples=50, deadline=None)
@given(
    p=st.floats(0.1, 2.5),
    theta=st.floats(-np.pi, np.pi),
    s=st.floats(0.05, 20.0),
)
def test_radial_homogeneity(p, theta, s):
    mode = RadialPowerMode2D(p)
    x = np.array([np.cos(theta), np.sin(theta)])
    assert mode.value(s * x) == pytest.approx(s**p * mode.value(x), rel=1e-12)


def test_independence_checks():
    pts = np.linspace(0.1, 1.0, 8)
    ok = check_basis_independence(ModeBasis((PowerMode1D(0.5), PowerMode1D(1.5))), pts)
    assert ok.ok and ok.min_singular_value_ratio > 1e-8

    dup = ModeBasis((PowerMode1D(0.5), PowerMode1D(0.5)))
    bad = check_basis_independence(dup, pts)
    assert not bad.ok and bad.min_singular_value_ratio < 1e-12

    single = check_basis_independence(ModeBasis((PowerMode1D(0.5),)), pts)
    assert single.ok and single.min_singular_value_ratio == pytest.approx(1.0)
    zero = check_basis_independence(ModeBasis((Polynomial((1,), (0.0,)),)), np.zeros(4))
    assert not zero.ok

    with pytest.raises(ValueError):
        check_basis_independence(ModeBasis((PowerMode1D(0.5), PowerMode1D(1.5))), pts[:3])


def test_basis_on_interface_circle():
    basis = ModeBasis((RadialPowerMode2D(0.5), Polynomial((1, 0)), Polynomial((0, 1))))
    assert (basis.n_low, basis.n_regular) == (1, 2)
    t = np.linspace(0, 2 * np.pi, 4 * len(basis), endpoint=False)
    pts = 0.5 * np.column_stack([np.cos(t), np.sin(t)])
    assert check_basis_independence(basis, pts).ok


def test_expansion():
    basis = ModeBasis((PowerMode1D(0.5), PowerMode1D(1.5)))
    exp = ModeExpansion(basis, [2.0, 3.0])
    assert exp(4.0) == pytest.approx(2 * 2 + 3 * 8)
    assert exp(0.0) == 0.0
    with pytest.raises(ValueError):
        ModeExpansion(basis, [1.0])
