import numpy as np
import pytest
import scipy.sparse as sp

from lowreg.assembly import BlockSystem, assemble
from lowreg.geometry import UniformGrid, Point1D, classify_nodes
from lowreg.harness.cases import builtin_case, quadratic_probe_case
from lowreg.harness.checks import dense_oracle_k
from lowreg.harness.convergence import linf_error
from lowreg.solver import (
    FixedPointMap,
    exterior_solve,
    fixed_point_map,
    fixed_point_recover_k,
    iterate_k,
    reconstruct,
    schur_recover_k,
    schur_system,
    solve_case,
)


def synthetic_blocks(k_star):
    """A small system whose loads are exactly ``-E k*``."""
    grid = UniformGrid(((0.0, 1.0),), (8,))
    part = classify_nodes(grid, Point1D(0.3))
    n = part.unknowns.size
    rng = np.random.default_rng(5)
    S = sp.diags([1, -2.2, 1], [-1, 0, 1], shape=(n, n), format="csr")
    E = rng.standard_normal((n, len(k_star)))
    return BlockSystem(S, -E @ k_star, E, part, np.zeros(n))


def test_constructed_consistency():
    k_star = np.array([0.7, -1.3])
    blocks = synthetic_blocks(k_star)
    k, res = schur_recover_k(blocks)
    np.testing.assert_allclose(k, k_star, atol=1e-10)
    assert res < 1e-10
    np.testing.assert_allclose(exterior_solve(blocks, k_star), 0, atol=1e-12)


def test_schur_n40():
    blocks = assemble(builtin_case("poisson1d-single", 40, 2))
    k, _ = schur_recover_k(blocks)
    err = abs(k[0] - 2)
    assert 1.48e-4 <= err <= 1.48e-2


@pytest.mark.parametrize("method", ["schur", "fixed-point"])
@pytest.mark.parametrize("order", [2, 4])
def test_quadratic_probe(method, order):
    case = quadratic_probe_case(20, order)
    result = solve_case(case, method)
    assert result.k[0] == pytest.approx(3.0, abs=1e-10)
    assert linf_error(case, result.u_full) <= 1e-10


def test_exterior_zero():
    blocks = assemble(builtin_case("poisson1d-single", 20))
    e2 = blocks.E2
    k = np.array([1.7])
    crafted = BlockSystem(blocks.S, np.concatenate([blocks.F1, -e2 @ k]), blocks.E, blocks.partition, blocks.boundary_weights)
    np.testing.assert_allclose(exterior_solve(crafted, k), 0, atol=1e-12)


def test_exterior_fine_grid():
    case = builtin_case("poisson1d-single", 640, 2)
    assert linf_error(case, solve_case(case).u_full) <= 1e-5


@pytest.mark.parametrize("case_id", ["poisson1d-single", "poisson1d-two", "poisson2d-radial"])
@pytest.mark.parametrize("order", [2, 4])
def test_dense_oracle(case_id, order):
    blocks = assemble(builtin_case(case_id, 20, order))
    k, _ = schur_recover_k(blocks)
    np.testing.assert_allclose(k, dense_oracle_k(blocks), rtol=0, atol=1e-10)
    u2 = exterior_solve(blocks, k)
    dense_u2 = np.linalg.solve(blocks.D.toarray(), blocks.F2 + blocks.E2 @ k)
    np.testing.assert_allclose(u2, dense_u2, rtol=0, atol=1e-11)


def test_fixed_point_synthetic_identity():
    m, nk = 7, 2
    rng = np.random.default_rng(2)
    Q = rng.standard_normal((m, nk))
    pad = np.zeros((m, nk))
    pad[:nk] = np.eye(nk)
    target = np.array([1.5, -0.25])
    F = rng.standard_normal(m)
    P = F + pad @ target
    fmap = FixedPointMap(Q + pad, F, P, Q)
    for variant in ("fixed-point", "lstsq"):
        k, res = fixed_point_recover_k(None, variant, fmap)
        np.testing.assert_allclose(k, target, atol=1e-12)
        assert res < 1e-12


def test_fixed_point_close_to_schur():
    blocks = assemble(builtin_case("poisson1d-single", 80, 2))
    k_s, _ = schur_recover_k(blocks)
    k_f, _ = fixed_point_recover_k(blocks)
    assert abs(k_f[0] - k_s[0]) <= 10 * abs(k_s[0] - 2)


@pytest.mark.parametrize("case_id, n", [("poisson1d-single", 20), ("poisson1d-two", 80), ("poisson2d-radial", 40)])
def test_fixed_point_is_invariant(case_id, n):
    fmap = fixed_point_map(assemble(builtin_case(case_id, n, 2)))
    k, _ = fixed_point_recover_k(None, fmap=fmap)
    assert np.abs(iterate_k(fmap, k) - k).max() <= 1e-8


def test_iteration_converges_to_fixed_point():
    blocks = assemble(builtin_case("poisson1d-single", 40, 2))
    fmap = fixed_point_map(blocks)
    k_fp, _ = fixed_point_recover_k(blocks, fmap=fmap)
    k = np.zeros(1)
    for _ in range(200):
        k = iterate_k(fmap, k)
    np.testing.assert_allclose(k, k_fp, atol=1e-8)


def test_residual_norms_recomputed():
    blocks = assemble(builtin_case("poisson1d-two", 40, 2))
    g, b = schur_system(blocks)
    k, res = schur_recover_k(blocks)
    r = g @ k - b
    assert res == pytest.approx(np.linalg.norm(r), rel=1e-12)
    assert np.linalg.norm(g.T @ r) <= 1e-10 * np.linalg.norm(g, 2) * np.linalg.norm(b)

    fmap = fixed_point_map(blocks)
    for variant in ("fixed-point", "lstsq"):
        k, res = fixed_point_recover_k(blocks, variant, fmap)
        r = (fmap.E - fmap.Q) @ k - (fmap.P - fmap.F)
        assert res == pytest.approx(np.linalg.norm(r), rel=1e-12)
    g = fmap.E - fmap.Q
    k, _ = fixed_point_recover_k(blocks, "lstsq", fmap)
    r = g @ k - (fmap.P - fmap.F)
    assert np.linalg.norm(g.T @ r) <= 1e-10 * np.linalg.norm(g, 2) * np.linalg.norm(fmap.P - fmap.F)


def test_unknown_variant():
    with pytest.raises(ValueError):
        fixed_point_recover_k(assemble(builtin_case("poisson1d-single", 20)), "newton")
    with pytest.raises(ValueError):
        solve_case(builtin_case("poisson1d-single", 20), "jacobi")


@pytest.mark.parametrize("case_id", ["poisson1d-single", "poisson2d-radial"])
def test_reconstruct_with_exact_data(case_id):
    case = builtin_case(case_id, 40, 2)
    part = classify_nodes(case.grid, case.iface)
    coords = case.grid.coordinates()
    u = reconstruct(case, case.exact_coefficients, case.exact_solution(coords[part.outer]))
    np.testing.assert_allclose(u, case.exact_solution(coords), rtol=0, atol=1e-14)


def test_reconstruct_zero():
    case = builtin_case("poisson1d-two", 20, 2)
    part = classify_nodes(case.grid, case.iface)
    u = reconstruct(case, np.zeros(2), np.zeros(part.outer.size))
    bnd = case.grid.boundary_mask()
    assert not u[~bnd].any()
    np.testing.assert_allclose(u[bnd], case.boundary(case.grid.coordinates()[bnd]))
    with pytest.raises(ValueError):
        reconstruct(case, np.zeros(3), np.zeros(part.outer.size))


def test_reconstruct_2d_n160():
    case = builtin_case("poisson2d-radial", 160, 2)
    err = linf_error(case, solve_case(case).u_full)
    # the reference magnitude is 1.5e-4; this scheme lands well below it
    assert err <= 1.5e-3
