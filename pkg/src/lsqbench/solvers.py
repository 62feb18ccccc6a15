"""Ordinary least squares solvers.

Three routes to ``argmin ||x @ beta - y||^2``:

``pinv``
    ``beta = V diag(1/s) U^T y`` from an SVD, truncating small singular values.
``normal``
    Cholesky solve of the normal equations ``x^T x beta = x^T y``.  Used as an
    independent oracle for the pseudoinverse route on full-rank inputs.
``gd``
    Batch gradient descent from ``beta = 0`` with a fixed learning rate,
    stopped when the coefficient update falls below ``tol`` in the 2-norm.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, ShapeError
from .matcore import EPS, SvdResult, as_matrix, as_vector, cholesky_solve, svd

SVD_BACKENDS = ("lapack", "jacobi")


@dataclass(frozen=True)
class GdConfig:
    alpha: float = 0.01
    tol: float = 1e-6
    max_iter: int = 10_000
    normalized: bool = True

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ConfigError(f"max_iter must be a positive integer, got {self.max_iter}")

    def step_size(self, n: int) -> float:
        """Multiplier applied to ``x^T (x beta - y)`` in one update."""
        return self.alpha * 2.0 / n if self.normalized else self.alpha * 2.0


@dataclass
class FitResult:
    beta_hat: np.ndarray
    iterations: int
    converged: bool
    wall_seconds: float
    method: str
    loss_history: Optional[np.ndarray] = None


def _check_xy(x, y):
    x = as_matrix(x, "x")
    y = as_vector(y, "y")
    if x.shape[0] != y.shape[0]:
        raise ShapeError(f"x has {x.shape[0]} rows but y has length {y.shape[0]}")
    return x, y


def svd_factor(a, backend: str = "lapack") -> SvdResult:
    """Thin SVD through the chosen backend.

    ``"jacobi"`` is the in-house one-sided Jacobi routine; ``"lapack"`` calls
    numpy's LAPACK driver, which is what the timed benchmark path uses.
    """
    if backend == "jacobi":
        return svd(a)
    if backend == "lapack":
        u, s, vt = np.linalg.svd(as_matrix(a), full_matrices=False)
        return SvdResult(u=u, s=s, vt=vt)
    raise ConfigError(f"unknown svd backend {backend!r}; expected one of {SVD_BACKENDS}")


def _truncated_inverse(s, rcond):
    cutoff = rcond * s[0] if s.size else 0.0
    keep = s > cutoff
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return inv


def pinv(a, rcond: Optional[float] = None, backend: str = "lapack") -> np.ndarray:
    """Moore-Penrose pseudoinverse.

    Singular values at or below ``rcond * s_max`` are zeroed rather than
    inverted; ``rcond`` defaults to ``eps * max(rows, cols)``.
    """
    a = as_matrix(a)
    if rcond is None:
        rcond = EPS * max(a.shape)
    if rcond < 0:
        raise ConfigError(f"rcond must be non-negative, got {rcond}")
    f = svd_factor(a, backend)
    return (f.vt.T * _truncated_inverse(f.s, rcond)) @ f.u.T


def solve_pinv(x, y, rcond: Optional[float] = None, backend: str = "lapack") -> FitResult:
    x, y = _check_xy(x, y)
    start = time.perf_counter()
    beta = pinv(x, rcond=rcond, backend=backend) @ y
    elapsed = time.perf_counter() - start
    return FitResult(beta_hat=beta, iterations=0, converged=True, wall_seconds=elapsed, method="pinv")


def solve_normal_equations(x, y) -> FitResult:
    """Raises SingularMatrixError when ``x^T x`` is numerically not SPD."""
    x, y = _check_xy(x, y)
    start = time.perf_counter()
    beta = cholesky_solve(x.T @ x, x.T @ y)
    elapsed = time.perf_counter() - start
    return FitResult(beta_hat=beta, iterations=0, converged=True, wall_seconds=elapsed, method="normal")


def ols_gradient(x, y, beta, normalized: bool = True) -> np.ndarray:
    """Gradient of ``||x beta - y||^2`` (divided by n when ``normalized``)."""
    g = 2.0 * (x.T @ (x @ beta - y))
    return g / x.shape[0] if normalized else g


def gd_step(x, y, beta, config: GdConfig = GdConfig()) -> np.ndarray:
    """One batch update ``beta - step * x^T (x beta - y)``."""
    return beta - config.step_size(x.shape[0]) * (x.T @ (x @ beta - y))


def solve_gd(x, y, config: GdConfig = GdConfig(), record_loss: bool = False) -> FitResult:
    """Batch gradient descent from the zero vector.

    A non-finite iterate ends the run with ``converged=False`` and the last
    finite iterate as ``beta_hat``; it is never raised.  With
    ``record_loss`` the sum of squared residuals at every iterate (including
    the start) is kept in ``loss_history``.
    """
    x, y = _check_xy(x, y)
    step = config.step_size(x.shape[0])
    xt = x.T
    losses = [] if record_loss else None

    start = time.perf_counter()
    beta = np.zeros(x.shape[1])
    converged = False
    iterations = 0
    # overflow on divergence is handled by the finiteness check
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(config.max_iter):
            resid = x @ beta - y
            if losses is not None:
                losses.append(float(resid @ resid))
            new = beta - step * (xt @ resid)
            if not np.all(np.isfinite(new)):
                break
            iterations = t + 1
            change = np.linalg.norm(new - beta)
            beta = new
            if change < config.tol:
                converged = True
                break
    elapsed = time.perf_counter() - start

    if losses is not None:
        # one entry per iterate beta_0 .. beta_iterations
        if len(losses) == iterations:
            resid = x @ beta - y
            losses.append(float(resid @ resid))
        losses = np.array(losses)
    return FitResult(
        beta_hat=beta,
        iterations=iterations,
        converged=converged,
        wall_seconds=elapsed,
        method="gd",
        loss_history=losses,
    )
