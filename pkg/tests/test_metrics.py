import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lsqbench.datagen import ProblemSpec, make_problem
from lsqbench.errors import DegenerateInputError, ShapeError
from lsqbench.metrics import coef_error, measured_cond_factor, mse
from lsqbench.solvers import solve_pinv


def test_mse_exact_fit():
    x = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 7.0]])
    beta = np.array([0.5, -1.0])
    assert mse(x, beta, x @ beta) == 0.0


@pytest.mark.parametrize("n", [1, 7, 1000])
def test_mse_constant_residual(n):
    x = np.ones((n, 1))
    assert mse(x, [0.0], np.full(n, 0.1)) == pytest.approx(0.01, rel=1e-12)


def test_mse_table_level():
    prob = make_problem(ProblemSpec(n=1000, d=10, cond=1.0, seed=5))
    assert 0.007 <= mse(prob.x, solve_pinv(prob.x, prob.y).beta_hat, prob.y) <= 0.013


def test_mse_shape_mismatch():
    with pytest.raises(ShapeError):
        mse(np.ones((3, 2)), np.ones(3), np.ones(3))


def test_coef_error():
    assert coef_error([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert coef_error([1.0, 1.0], [0.0, 0.0]) == 2.0
    with pytest.raises(ShapeError):
        coef_error([1.0], [1.0, 2.0])


def test_coef_error_exact_recovery():
    prob = make_problem(ProblemSpec(n=200, d=6, cond=1.0, noise_sigma=0.0, seed=1))
    assert coef_error(solve_pinv(prob.x, prob.y).beta_hat, prob.beta_star) <= 1e-16


def test_cond_factor_examples(rng):
    q, _ = np.linalg.qr(rng.standard_normal((9, 4)))
    assert measured_cond_factor(q) == pytest.approx(1.0, abs=1e-12)
    assert measured_cond_factor(np.diag([4.0, 2.0])) == pytest.approx(0.5, abs=1e-15)


def test_cond_factor_rank_deficient_is_zero(rng):
    x = rng.standard_normal((10, 2))
    assert measured_cond_factor(np.column_stack([x, x[:, 0]])) == 0.0


def test_cond_factor_zero_matrix():
    with pytest.raises(DegenerateInputError):
        measured_cond_factor(np.zeros((3, 2)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.floats(1e-3, 1e3))
def test_cond_factor_scale_invariant(seed, scale):
    x = np.random.default_rng(seed).standard_normal((12, 4))
    assert measured_cond_factor(scale * x) == pytest.approx(measured_cond_factor(x), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_mse_orthogonal_invariance(seed):
    g = np.random.default_rng(seed)
    x, y, beta = g.standard_normal((15, 3)), g.standard_normal(15), g.standard_normal(3)
    q, _ = np.linalg.qr(g.standard_normal((15, 15)))
    assert mse(q @ x, beta, q @ y) == pytest.approx(mse(x, beta, y), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_pinv_mse_below_response_variance(seed):
    g = np.random.default_rng(seed)
    x = g.standard_normal((30, 4))
    y = g.standard_normal(30) + 3.0
    # the bound needs the constant vector inside the column space of x
    x = np.column_stack([np.ones(30), x])
    assert mse(x, solve_pinv(x, y).beta_hat, y) <= np.var(y) + 1e-12
