import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lsqbench.errors import NumericalError, ShapeError, SingularMatrixError
from lsqbench.matcore import (
    cholesky_solve,
    gaussian_matrix,
    householder_qr,
    make_rng,
    mat_mul,
    svd,
    transpose,
)
from lsqbench.solvers import pinv


def fro(a):
    return np.linalg.norm(a, "fro")


class TestMatMul:
    def test_identity(self, rng):
        a = rng.standard_normal((3, 5))
        assert np.array_equal(mat_mul(np.eye(3), a), a)

    def test_hand_arithmetic(self):
        assert mat_mul([[1, 2], [3, 4]], [[5], [6]]).tolist() == [[17.0], [39.0]]

    def test_pinv_sandwich(self, rng):
        a = rng.standard_normal((6, 4))
        assert fro(mat_mul(mat_mul(a, pinv(a, backend="jacobi")), a) - a) <= 1e-8

    def test_shape_error_names_both_shapes(self):
        with pytest.raises(ShapeError, match=r"\(2, 3\).*\(2, 3\)"):
            mat_mul(np.ones((2, 3)), np.ones((2, 3)))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32), st.integers(1, 8), st.integers(1, 8), st.integers(1, 8), st.integers(1, 8))
    def test_associativity(self, seed, m, k, l, n):
        g = np.random.default_rng(seed)
        a, b, c = g.standard_normal((m, k)), g.standard_normal((k, l)), g.standard_normal((l, n))
        left = mat_mul(mat_mul(a, b), c)
        right = mat_mul(a, mat_mul(b, c))
        assert fro(left - right) <= 1e-10 * max(fro(left), 1.0)


class TestTranspose:
    def test_involution(self, rng):
        a = rng.standard_normal((4, 7))
        assert np.array_equal(transpose(transpose(a)), a)

    def test_row_to_column(self):
        assert transpose([[1, 2, 3]]).tolist() == [[1.0], [2.0], [3.0]]

    def test_product_rule(self, rng):
        a, b = rng.standard_normal((3, 4)), rng.standard_normal((4, 2))
        assert np.max(np.abs(transpose(a @ b) - transpose(b) @ transpose(a))) <= 1e-12


class TestGaussian:
    def test_determinism(self):
        assert np.array_equal(gaussian_matrix(5, 4, make_rng(7)), gaussian_matrix(5, 4, make_rng(7)))

    def test_moments(self):
        sample = gaussian_matrix(200, 200, make_rng(3))
        assert abs(sample.mean()) <= 0.02
        assert 0.97 <= sample.var() <= 1.03


class TestHouseholderQR:
    def test_orthonormal_input(self, rng):
        q0, _ = np.linalg.qr(rng.standard_normal((20, 6)))
        _, r = householder_qr(q0)
        assert np.allclose(np.abs(r), np.eye(6), atol=1e-12)

    def test_orthogonality_and_reconstruction(self, rng):
        a = rng.standard_normal((50, 10))
        q, r = householder_qr(a)
        assert q.shape == (50, 10) and r.shape == (10, 10)
        assert np.array_equal(r, np.triu(r))
        assert fro(q.T @ q - np.eye(10)) <= 1e-12 * 10
        assert fro(q @ r - a) <= 1e-12 * fro(a)

    def test_rank_deficient_gives_small_diagonal(self, rng):
        a = rng.standard_normal((30, 4))
        a = np.column_stack([a, a[:, 1]])
        q, r = householder_qr(a)
        assert abs(r[4, 4]) < 1e-12 * fro(a)
        assert fro(q @ r - a) <= 1e-12 * fro(a)

    def test_wide_rejected(self):
        with pytest.raises(ShapeError):
            householder_qr(np.ones((2, 3)))


def check_svd(a, res):
    k = min(a.shape)
    assert res.u.shape == (a.shape[0], k) and res.vt.shape == (k, a.shape[1])
    assert np.all(res.s >= 0) and np.all(np.diff(res.s) <= 0)
    assert fro(res.u.T @ res.u - np.eye(k)) <= 1e-10 * k
    assert fro(res.vt @ res.vt.T - np.eye(k)) <= 1e-10 * k
    assert fro(res.reconstruct() - a) <= 1e-8 * (1 + fro(a))


class TestSvd:
    def test_diagonal_with_negative_entry(self):
        assert np.allclose(svd(np.diag([3.0, -2.0])).s, [3.0, 2.0], atol=1e-15)

    def test_permutation(self):
        assert np.allclose(svd([[0.0, 1.0], [1.0, 0.0]]).s, [1.0, 1.0], atol=1e-15)

    def test_reconstruction(self, rng):
        a = rng.standard_normal((8, 5))
        res = svd(a)
        check_svd(a, res)
        assert fro(res.reconstruct() - a) <= 1e-10 * fro(a)

    def test_rank_deficient_completes_basis(self, rng):
        a = rng.standard_normal((12, 3))
        a = np.column_stack([a, a[:, 0] + a[:, 2], np.zeros(12)])
        res = svd(a)
        check_svd(a, res)
        assert res.rank() == 3

    def test_zero_matrix(self):
        res = svd(np.zeros((4, 3)))
        assert np.all(res.s == 0)
        check_svd(np.zeros((4, 3)), res)

    def test_graded_spectrum_relative_accuracy(self, rng):
        u, _ = np.linalg.qr(rng.standard_normal((60, 5)))
        v, _ = np.linalg.qr(rng.standard_normal((5, 5)))
        s = np.array([1.0, 1e-2, 1e-4, 1e-6, 1e-8])
        res = svd((u * s) @ v.T)
        assert np.allclose(res.s, s, rtol=1e-7, atol=0)

    def test_non_convergence_reports_sweeps(self, rng):
        with pytest.raises(NumericalError) as info:
            svd(rng.standard_normal((10, 10)), max_sweeps=1)
        assert info.value.diagnostics["sweeps"] == 1

    def test_non_finite_rejected(self):
        with pytest.raises(NumericalError):
            svd([[1.0, np.nan]])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32), st.integers(1, 15), st.integers(1, 15))
    def test_invariants(self, seed, m, n):
        a = np.random.default_rng(seed).standard_normal((m, n))
        check_svd(a, svd(a))


class TestCholeskySolve:
    def test_identity(self):
        b = np.array([1.0, -2.0, 3.0])
        assert np.array_equal(cholesky_solve(np.eye(3), b), b)

    def test_diagonal(self):
        assert np.allclose(cholesky_solve([[4.0, 0.0], [0.0, 9.0]], [8.0, 27.0]), [2.0, 3.0], atol=1e-15)

    def test_random_spd_residual(self, rng):
        g = rng.standard_normal((10, 10))
        a = g.T @ g + np.eye(10)
        b = rng.standard_normal(10)
        x = cholesky_solve(a, b)
        assert np.linalg.norm(a @ x - b) <= 1e-9 * np.linalg.norm(b)

    def test_indefinite(self):
        with pytest.raises(SingularMatrixError):
            cholesky_solve([[1.0, 2.0], [2.0, 1.0]], [1.0, 1.0])

    def test_singular_gram(self, rng):
        x = rng.standard_normal((20, 3))
        x = np.column_stack([x, x[:, 0]])
        with pytest.raises(SingularMatrixError):
            cholesky_solve(x.T @ x, np.ones(4))

    def test_asymmetric_rejected(self):
        with pytest.raises(ShapeError):
            cholesky_solve([[2.0, 1.0], [0.0, 2.0]], [1.0, 1.0])
