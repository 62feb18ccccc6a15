import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lsqbench.datagen import ProblemSpec, geometric_spectrum, make_problem, random_orthonormal
from lsqbench.errors import ConfigError
from lsqbench.matcore import make_rng, svd
from lsqbench.metrics import measured_cond_factor, mse
from lsqbench.solvers import solve_pinv


class TestGeometricSpectrum:
    def test_two_endpoints(self):
        assert geometric_spectrum(2, 0.001, 1.0).tolist() == [1.0, 0.001]

    def test_three_values(self):
        # 0.01 ** (1/2) = 0.1
        assert np.allclose(geometric_spectrum(3, 0.01, 1.0), [1.0, 0.1, 0.01], rtol=1e-15)

    def test_flat(self):
        assert geometric_spectrum(5, 1.0, 2.0).tolist() == [2.0] * 5

    def test_single(self):
        assert geometric_spectrum(1, 0.3, 4.0).tolist() == [4.0]

    @pytest.mark.parametrize("d, cond, scale", [(0, 0.5, 1.0), (3, 0.0, 1.0), (3, 1.5, 1.0), (3, 0.5, 0.0)])
    def test_invalid(self, d, cond, scale):
        with pytest.raises(ConfigError):
            geometric_spectrum(d, cond, scale)

    @given(st.integers(1, 60), st.floats(1e-8, 1.0), st.floats(1e-3, 1e3))
    def test_monotone_with_exact_ratio(self, d, cond, scale):
        s = geometric_spectrum(d, cond, scale)
        assert np.all(np.diff(s) <= 0)
        assert s[0] == scale
        if d > 1:
            assert math.isclose(s[-1] / s[0], cond, rel_tol=1e-12)


class TestRandomOrthonormal:
    def test_orthonormal(self):
        q = random_orthonormal(100, 10, make_rng(1))
        assert np.linalg.norm(q.T @ q - np.eye(10)) <= 1e-12 * 10

    def test_scalar(self):
        assert abs(random_orthonormal(1, 1, make_rng(5))[0, 0]) == 1.0

    def test_determinism(self):
        assert np.array_equal(random_orthonormal(7, 3, make_rng(9)), random_orthonormal(7, 3, make_rng(9)))

    def test_sign_convention_is_unbiased(self):
        # Haar columns: the first entry is symmetric around zero
        firsts = [random_orthonormal(4, 4, make_rng(s))[0, 0] for s in range(400)]
        assert abs(np.mean(np.sign(firsts))) < 0.2


class TestMakeProblem:
    def test_condition_round_trip(self):
        prob = make_problem(ProblemSpec(n=100, d=5, cond=0.001, seed=3))
        assert abs(measured_cond_factor(prob.x) - 0.001) <= 1e-10

    @pytest.mark.parametrize("cond", [1.0, 0.1, 0.001])
    def test_spectrum_exact(self, cond):
        prob = make_problem(ProblemSpec(n=200, d=8, cond=cond, seed=11))
        expected = geometric_spectrum(8, cond, math.sqrt(200))
        assert np.allclose(svd(prob.x).s, expected, rtol=1e-9, atol=0)

    def test_zero_noise_is_exact(self):
        prob = make_problem(ProblemSpec(n=50, d=4, cond=0.01, noise_sigma=0.0, seed=2))
        assert mse(prob.x, prob.beta_star, prob.y) <= 1e-20
        assert np.array_equal(prob.beta_star, np.ones(4))

    def test_ground_truth_recovery(self):
        prob = make_problem(ProblemSpec(n=80, d=6, cond=1.0, noise_sigma=0.0, seed=4))
        assert np.max(np.abs(solve_pinv(prob.x, prob.y).beta_hat - 1.0)) <= 1e-8

    def test_exact_fit_mse_matches_noise_level(self):
        # E[mse] = sigma^2 (n - d) / n = 0.0099
        prob = make_problem(ProblemSpec(n=1000, d=10, cond=1.0, noise_sigma=0.1, seed=0))
        assert 0.007 <= mse(prob.x, solve_pinv(prob.x, prob.y).beta_hat, prob.y) <= 0.013

    def test_seed_determinism(self):
        spec = ProblemSpec(n=30, d=3, cond=0.2, seed=99)
        a, b = make_problem(spec), make_problem(spec)
        assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)

    def test_noise_shared_across_cond(self):
        a = make_problem(ProblemSpec(n=40, d=3, cond=1.0, seed=8))
        b = make_problem(ProblemSpec(n=40, d=3, cond=0.01, seed=8))
        assert np.allclose(a.y - a.x.sum(axis=1), b.y - b.x.sum(axis=1), atol=1e-12)

    @pytest.mark.parametrize(
        "kwargs", [dict(n=3, d=4, cond=0.5), dict(n=5, d=0, cond=0.5), dict(n=5, d=2, cond=0.0), dict(n=5, d=2, cond=0.5, noise_sigma=-1)]
    )
    def test_invalid_spec(self, kwargs):
        with pytest.raises(ConfigError):
            ProblemSpec(**kwargs)
