import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lowreg.errors import RankDeficient, SingularMatrix
from lowreg.linalg import as_sparse, dense_lstsq, factor, solve


def gauss_solve(a, b):
    """Textbook elimination with partial pivoting; independent of LAPACK."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    n = len(b)
    for c in range(n):
        p = c + int(np.argmax(np.abs(a[c:, c])))
        a[[c, p]], b[[c, p]] = a[[p, c]], b[[p, c]]
        for r in range(c + 1, n):
            f = a[r, c] / a[c, c]
            a[r, c:] -= f * a[c, c:]
            b[r] -= f * b[c]
    x = np.zeros(n)
    for r in range(n - 1, -1, -1):
        x[r] = (b[r] - a[r, r + 1 :] @ x[r + 1 :]) / a[r, r]
    return x


def test_as_sparse_sorted_unique():
    m = sp.coo_matrix(([1.0, 2.0, 3.0], ([0, 0, 0], [2, 0, 2])), shape=(2, 3))
    out = as_sparse(m)
    assert out.has_sorted_indices
    np.testing.assert_array_equal(out.indices[out.indptr[0] : out.indptr[1]], [0, 2])
    assert out[0, 2] == 4.0


def test_identity():
    b = np.arange(5.0)
    np.testing.assert_array_equal(solve(factor(sp.identity(5)), b), b)


def test_tridiagonal_against_elimination():
    n = 4
    h = np.pi / n
    m = sp.diags([1, -2, 1], [-1, 0, 1], shape=(n - 1, n - 1)) / h**2
    b = np.ones(n - 1)
    np.testing.assert_allclose(solve(factor(m), b), gauss_solve(m.toarray(), b), rtol=0, atol=1e-12)


def test_random_spd_against_elimination():
    rng = np.random.default_rng(7)
    q = rng.standard_normal((10, 10))
    m = q @ q.T + 10 * np.eye(10)
    b = rng.standard_normal(10)
    x = factor(sp.csr_matrix(m)).solve(b)
    np.testing.assert_allclose(x, gauss_solve(m, b), rtol=0, atol=1e-12)


def test_zero_rhs():
    fac = factor(sp.diags([1, -2, 1], [-1, 0, 1], shape=(6, 6)))
    np.testing.assert_array_equal(solve(fac, np.zeros(6)), np.zeros(6))


def test_multi_rhs_matches_single():
    rng = np.random.default_rng(1)
    m = sp.diags([1, -2.5, 1], [-1, 0, 1], shape=(30, 30))
    fac = factor(m)
    rhs = rng.standard_normal((30, 4))
    many = solve(fac, rhs)
    for j in range(4):
        np.testing.assert_allclose(many[:, j], solve(fac, rhs[:, j]), rtol=0, atol=1e-14)


def test_duplicate_rows_are_singular():
    m = np.array([[1.0, 2.0, 0.0], [1.0, 2.0, 0.0], [0.0, 1.0, 1.0]])
    with pytest.raises(SingularMatrix):
        factor(sp.csr_matrix(m))
    with pytest.raises(SingularMatrix):
        factor(sp.csr_matrix((3, 3)))


def test_left_inverse_on_random_vectors():
    rng = np.random.default_rng(3)
    n = 40
    m = sp.diags([1, -2, 1], [-1, 0, 1], shape=(n, n)) * n**2
    fac = factor(m)
    norm_m = abs(m).sum(axis=1).max()
    for _ in range(50):
        b = rng.standard_normal(n)
        x = solve(fac, b)
        bound = 1e-12 * (norm_m * np.abs(x).max() + np.abs(b).max())
        assert np.abs(m @ x - b).max() <= bound


def test_lstsq_mean():
    k, res = dense_lstsq(np.ones((3, 1)), [1.0, 2.0, 3.0])
    assert k[0] == pytest.approx(2.0)
    assert res == pytest.approx(np.sqrt(2.0))
    k1, _ = dense_lstsq(np.ones(3), [1.0, 2.0, 3.0])
    np.testing.assert_allclose(k1, k)


def test_lstsq_square():
    g = np.array([[2.0, 1.0], [1.0, 3.0]])
    k, res = dense_lstsq(g, [3.0, 5.0])
    np.testing.assert_allclose(k, np.linalg.solve(g, [3.0, 5.0]))
    assert res < 1e-14


@pytest.mark.parametrize("g", [np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]), np.ones((1, 2)), np.zeros((3, 1))])
def test_lstsq_rank_deficient(g):
    with pytest.raises(RankDeficient):
        dense_lstsq(g, np.ones(g.shape[0]))


@settings(max_examples=40, deadline=None)
@given(
    g=arrays(np.float64, (8, 3), elements=st.floats(-10, 10)),
    b=arrays(np.float64, 8, elements=st.floats(-10, 10)),
)
def test_lstsq_normal_equations(g, b):
    try:
        k, res = dense_lstsq(g, b)
    except RankDeficient:
        return
    r = g @ k - b
    assert np.linalg.norm(g.T @ r) <= 1e-10 * np.linalg.norm(g, 2) * max(np.linalg.norm(b), 1e-300) + 1e-300
    assert res == pytest.approx(np.linalg.norm(r), abs=1e-12)
