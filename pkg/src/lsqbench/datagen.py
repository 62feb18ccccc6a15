"""Synthetic regression problems with an exactly controlled condition factor.

The design matrix is assembled from its SVD, ``x = U diag(sigma) V^T``, with
Haar-random orthonormal factors and a geometric singular value ladder running
from ``sqrt(n)`` down to ``sqrt(n) * cond``.  The ``sqrt(n)`` scale makes the
top eigenvalue of ``x^T x / n`` equal to one, so the normalized gradient step
with learning rate 0.01 is stable on every generated problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ShapeError
from .matcore import gaussian_matrix, householder_qr, make_rng


@dataclass(frozen=True)
class ProblemSpec:
    n: int
    d: int
    cond: float
    noise_sigma: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if not (self.n >= self.d >= 1):
            raise ConfigError(f"need n >= d >= 1, got n={self.n}, d={self.d}")
        if not (0.0 < self.cond <= 1.0):
            raise ConfigError(f"cond must lie in (0, 1], got {self.cond}")
        if not self.noise_sigma >= 0.0:
            raise ConfigError(f"noise_sigma must be >= 0, got {self.noise_sigma}")


@dataclass(frozen=True)
class SyntheticProblem:
    x: np.ndarray
    y: np.ndarray
    beta_star: np.ndarray
    spec: ProblemSpec
    singular_values: np.ndarray = field(repr=False, default=None)


def geometric_spectrum(d: int, cond: float, scale: float = 1.0) -> np.ndarray:
    """``scale * cond**((i-1)/(d-1))`` for i = 1..d; ``[scale]`` when d == 1."""
    if d < 1:
        raise ConfigError(f"d must be >= 1, got {d}")
    if not (0.0 < cond <= 1.0) or not scale > 0.0:
        raise ConfigError(f"need 0 < cond <= 1 and scale > 0, got cond={cond}, scale={scale}")
    if d == 1:
        return np.array([float(scale)])
    exponents = np.arange(d) / (d - 1)
    sigma = scale * np.power(cond, exponents)
    sigma[0], sigma[-1] = scale, scale * cond
    return sigma


def random_orthonormal(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed rows x cols matrix with orthonormal columns."""
    if rows < cols:
        raise ShapeError(f"random_orthonormal needs rows >= cols, got {rows}x{cols}")
    q, r = householder_qr(gaussian_matrix(rows, cols, rng))
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return q * signs


def make_problem(spec: ProblemSpec) -> SyntheticProblem:
    rng = make_rng(spec.seed)
    u = random_orthonormal(spec.n, spec.d, rng)
    v = random_orthonormal(spec.d, spec.d, rng)
    sigma = geometric_spectrum(spec.d, spec.cond, math.sqrt(spec.n))
    x = (u * sigma) @ v.T
    beta_star = np.ones(spec.d)
    # noise is drawn last so a fixed seed gives the same noise for every cond
    noise = spec.noise_sigma * rng.standard_normal(spec.n)
    y = x @ beta_star + noise
    return SyntheticProblem(x=x, y=y, beta_star=beta_star, spec=spec, singular_values=sigma)
