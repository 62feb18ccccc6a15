"""Evaluation quantities: training MSE, coefficient error, condition factor."""

from __future__ import annotations

import numpy as np

from .errors import DegenerateInputError, ShapeError
from .matcore import EPS, as_matrix, as_vector, svd


def mse(x, beta, y) -> float:
    """Mean squared residual ``||x @ beta - y||^2 / n``."""
    x = as_matrix(x, "x")
    beta = as_vector(beta, "beta")
    y = as_vector(y, "y")
    if x.shape[1] != beta.shape[0] or x.shape[0] != y.shape[0]:
        raise ShapeError(f"shape mismatch: x {x.shape}, beta {beta.shape}, y {y.shape}")
    r = x @ beta - y
    return float(r @ r) / x.shape[0]


def coef_error(beta_hat, beta_star) -> float:
    """Squared Euclidean distance between two coefficient vectors."""
    beta_hat = as_vector(beta_hat, "beta_hat")
    beta_star = as_vector(beta_star, "beta_star")
    if beta_hat.shape != beta_star.shape:
        raise ShapeError(f"length mismatch: {beta_hat.shape} vs {beta_star.shape}")
    diff = beta_hat - beta_star
    return float(diff @ diff)


def measured_cond_factor(x, rcond=None) -> float:
    """Smallest over largest singular value of ``x`` (0 if numerically rank deficient)."""
    x = as_matrix(x, "x")
    if not np.any(x):
        raise DegenerateInputError("condition factor of an all-zero matrix is undefined")
    s = svd(x).s
    if rcond is None:
        rcond = EPS * max(x.shape)
    if s[-1] <= rcond * s[0]:
        return 0.0
    return float(s[-1] / s[0])
