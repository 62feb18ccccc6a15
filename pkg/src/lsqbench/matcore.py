"""Dense linear algebra primitives.

Matrices and vectors are plain ``numpy.ndarray`` objects of dtype float64
(C order, i.e. row-major).  The factorizations here are written out by hand
rather than delegated to LAPACK so the pseudoinverse path can be checked
against an implementation whose every step is visible:

* :func:`householder_qr` -- thin QR by Householder reflections
* :func:`svd` -- one-sided (Hestenes) Jacobi SVD, QR-preconditioned
* :func:`cholesky_solve` -- Cholesky factorization plus two triangular solves
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ShapeError, SingularMatrixError

EPS = 2.0**-52

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60


def as_matrix(a, name="matrix"):
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    return arr


def as_vector(v, name="vector"):
    arr = np.ascontiguousarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    return arr


def make_rng(seed=None) -> np.random.Generator:
    """Seeded PCG64 generator; pass an existing Generator through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def mat_mul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim not in (1, 2) or a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def transpose(a) -> np.ndarray:
    return np.ascontiguousarray(as_matrix(a).T)


def gaussian_matrix(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    if rows < 1 or cols < 1:
        raise ShapeError(f"gaussian_matrix needs positive dimensions, got {rows}x{cols}")
    return rng.standard_normal((rows, cols))


def householder_qr(a) -> tuple[np.ndarray, np.ndarray]:
    """Thin QR factorization ``a = q @ r`` of a tall matrix.

    ``q`` is rows x cols with orthonormal columns and ``r`` is cols x cols
    upper triangular.  Rank deficiency is not an error; it shows up as
    (near-)zero entries on the diagonal of ``r``.
    """
    r = as_matrix(a).copy()
    m, n = r.shape
    if m < n:
        raise ShapeError(f"householder_qr needs rows >= cols, got shape {(m, n)}")

    vs = []
    for k in range(n):
        x = r[k:, k]
        norm_x = np.linalg.norm(x)
        v = x.copy()
        if norm_x == 0.0:
            vs.append(None)
            continue
        # reflect onto -sign(x0)*|x|*e1 so v0 never cancels
        alpha = -norm_x if x[0] >= 0 else norm_x
        v[0] -= alpha
        v /= np.linalg.norm(v)
        block = r[k:, k:]
        block -= 2.0 * np.outer(v, v @ block)
        r[k, k] = alpha
        r[k + 1 :, k] = 0.0
        vs.append(v)

    q = np.zeros((m, n))
    q[:n, :n] = np.eye(n)
    for k in range(n - 1, -1, -1):
        v = vs[k]
        if v is None:
            continue
        block = q[k:, k:]
        block -= 2.0 * np.outer(v, v @ block)
    return q, np.triu(r[:n, :])


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``a = u @ diag(s) @ vt`` with ``k = min(rows, cols)``."""

    u: np.ndarray
    s: np.ndarray
    vt: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.s) @ self.vt

    def rank(self, rcond=None) -> int:
        if self.s.size == 0 or self.s[0] == 0.0:
            return 0
        if rcond is None:
            rcond = EPS * max(self.u.shape[0], self.vt.shape[1])
        return int(np.count_nonzero(self.s > rcond * self.s[0]))


def _round_robin(k):
    """Schedule of disjoint column pairs covering every pair once per sweep."""
    players = list(range(k)) + ([-1] if k % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p >= 0 and q >= 0]
        if pairs:
            p, q = zip(*pairs)
            rounds.append((np.array(p), np.array(q)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _jacobi_square(a, tol, max_sweeps):
    """One-sided Jacobi on a k x k matrix; returns (w, v, sweeps) with w = a @ v
    having mutually orthogonal columns."""
    w = a.copy()
    k = w.shape[1]
    v = np.eye(k)
    rounds = _round_robin(k)
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p, q in rounds:
            wp, wq = w[:, p], w[:, q]
            alpha = np.einsum("ij,ij->j", wp, wp)
            beta = np.einsum("ij,ij->j", wq, wq)
            gamma = np.einsum("ij,ij->j", wp, wq)
            scale = np.sqrt(alpha * beta)
            active = np.abs(gamma) > tol * scale
            active &= scale > 0.0
            if not active.any():
                continue
            rotated = True
            p, q = p[active], q[active]
            alpha, beta, gamma = alpha[active], beta[active], gamma[active]
            wp, wq = w[:, p], w[:, q]
            zeta = (beta - alpha) / (2.0 * gamma)
            t = np.copysign(1.0, zeta) / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = 1.0 / np.hypot(1.0, t)
            s = c * t
            w[:, p] = c * wp - s * wq
            w[:, q] = s * wp + c * wq
            vp, vq = v[:, p], v[:, q]
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
        if not rotated:
            return w, v, sweep
    raise NumericalError(
        f"Jacobi SVD did not converge in {max_sweeps} sweeps",
        {"sweeps": max_sweeps, "shape": a.shape, "tol": tol},
    )


def _complete_columns(u, good):
    """Replace the columns of ``u`` not flagged ``good`` by an orthonormal
    completion of the good ones."""
    m, k = u.shape
    basis = [u[:, j] for j in range(k) if good[j]]
    fill = []
    for e in np.eye(m):
        if len(basis) + len(fill) == k:
            break
        vec = e.copy()
        for _ in range(2):
            for b in basis + fill:
                vec -= (b @ vec) * b
        norm = np.linalg.norm(vec)
        if norm > 0.5:
            fill.append(vec / norm)
    out = u.copy()
    out[:, ~good] = np.column_stack(fill) if fill else out[:, ~good]
    return out


def svd(a, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> SvdResult:
    """Thin singular value decomposition by one-sided Jacobi rotations.

    Tall inputs are first reduced to their square R factor by
    :func:`householder_qr`; wide inputs are handled through the transpose.
    Sweeps stop once no column pair has a normalized inner product above
    ``tol``.  Raises :class:`NumericalError` after ``max_sweeps`` sweeps.
    """
    a = as_matrix(a)
    if not np.all(np.isfinite(a)):
        raise NumericalError("svd input contains non-finite values")
    rows, cols = a.shape
    if rows < cols:
        res = svd(a.T, tol=tol, max_sweeps=max_sweeps)
        return SvdResult(u=res.vt.T.copy(), s=res.s, vt=res.u.T.copy(), sweeps=res.sweeps)

    q, r = householder_qr(a)
    w, v, sweeps = _jacobi_square(r, tol, max_sweeps)
    s = np.linalg.norm(w, axis=0)
    order = np.argsort(-s, kind="stable")
    s, w, v = s[order], w[:, order], v[:, order]

    cutoff = EPS * max(rows, cols) * s[0] if s[0] > 0 else 0.0
    good = s > cutoff
    ur = np.zeros_like(w)
    ur[:, good] = w[:, good] / s[good]
    if not good.all():
        ur = _complete_columns(ur, good)
    return SvdResult(u=q @ ur, s=s, vt=np.ascontiguousarray(v.T), sweeps=sweeps)


def cholesky(a) -> np.ndarray:
    """Lower-triangular L with ``a = L @ L.T``.

    Raises :class:`SingularMatrixError` when a pivot falls to
    ``eps * trace(a)`` or below.
    """
    a = as_matrix(a)
    n, m = a.shape
    if n != m:
        raise ShapeError(f"cholesky needs a square matrix, got shape {a.shape}")
    scale = np.max(np.abs(a)) if a.size else 0.0
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-10 * max(scale, 1.0):
        raise ShapeError("cholesky input is not symmetric")
    floor = EPS * np.trace(a)
    low = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - low[j, :j] @ low[j, :j]
        if not pivot > floor:
            raise SingularMatrixError(
                f"matrix is not positive definite (pivot {pivot:.3e} at column {j})",
                {"column": j, "pivot": float(pivot), "floor": float(floor)},
            )
        low[j, j] = np.sqrt(pivot)
        low[j + 1 :, j] = (a[j + 1 :, j] - low[j + 1 :, :j] @ low[j, :j]) / low[j, j]
    return low


def solve_lower(low, b) -> np.ndarray:
    x = np.array(b, dtype=np.float64)
    for i in range(x.shape[0]):
        x[i] = (x[i] - low[i, :i] @ x[:i]) / low[i, i]
    return x


def solve_upper(up, b) -> np.ndarray:
    x = np.array(b, dtype=np.float64)
    for i in range(x.shape[0] - 1, -1, -1):
        x[i] = (x[i] - up[i, i + 1 :] @ x[i + 1 :]) / up[i, i]
    return x


def cholesky_solve(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` for symmetric positive definite ``a``."""
    b = as_vector(b, "b")
    if np.shape(a)[0] != b.shape[0]:
        raise ShapeError(f"cannot solve system of shape {np.shape(a)} with rhs {b.shape}")
    low = cholesky(a)
    return solve_upper(low.T, solve_lower(low, b))
