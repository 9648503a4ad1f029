"""Extremal singular values and inverse iteration shared by all modules.

Resolvent norms are reciprocals of smallest singular values. Dense problems
go through LAPACK; banded or large problems use inverse-power iteration on
M*M with a sparse LU, warm-startable from a neighboring spectral point.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spl

from .errors import NumericsError

DENSE_SVD_LIMIT = 3000
INVERSE_POWER_MAXIT = 500


def svd_extremes(M: np.ndarray):
    """(sigma_min, right singular vector of sigma_min, sigma_max) by full SVD."""
    _, s, Vh = sla.svd(M)
    return float(s[-1]), Vh[-1].conj(), float(s[0])


def sigma_min_dense(M: np.ndarray) -> float:
    return float(sla.svdvals(M)[-1])


def sigma_max_dense(M: np.ndarray) -> float:
    return float(sla.svdvals(M)[0])


def sigma_min_inverse_power(M, v0: np.ndarray | None = None,
                            tol: float = 1e-12, maxit: int = INVERSE_POWER_MAXIT,
                            seed: int = 0):
    """Smallest singular value of sparse M and its right singular vector.

    Power iteration on (M* M)^{-1} through one LU factorization; both
    triangular solves reuse it via the conjugate-transpose flag. The start
    vector may be warm-started from a neighboring parameter's result.
    """
    M = sp.csc_matrix(M)
    n = M.shape[0]
    try:
        lu = spl.splu(M)
    except RuntimeError as exc:
        raise NumericsError(f"sparse factorization failed (near-singular matrix): {exc}") from exc
    if v0 is None:
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    else:
        v = v0.astype(complex, copy=True)
    v /= np.linalg.norm(v)
    theta = 0.0
    rel = np.inf
    for _ in range(maxit):
        w = lu.solve(v, trans="H")
        y = lu.solve(w, trans="N")
        theta_new = float(np.linalg.norm(y))
        if not np.isfinite(theta_new) or theta_new == 0.0:
            raise NumericsError("inverse-power iterate overflowed or vanished "
                                "(matrix numerically singular)")
        v = y / theta_new
        rel = abs(theta_new - theta) / theta_new
        if rel <= tol:
            return 1.0 / np.sqrt(theta_new), v
        theta = theta_new
    # near-degenerate singular pairs (e.g. two symmetric turning points)
    # plateau above tol while the value itself is long settled
    if rel <= 1e-8:
        return 1.0 / np.sqrt(theta_new), v
    raise NumericsError(
        f"inverse-power iteration did not converge in {maxit} steps; "
        f"last relative change {rel:.2e}")


def sigma_min_auto(M, v0: np.ndarray | None = None, seed: int = 0):
    """Dispatch: dense SVD below the size limit, inverse power above or for
    sparse input. Returns (sigma_min, right_singular_vector)."""
    if sp.issparse(M):
        return sigma_min_inverse_power(M, v0=v0, seed=seed)
    if M.shape[0] <= DENSE_SVD_LIMIT:
        smin, v, _ = svd_extremes(np.asarray(M))
        return smin, v
    return sigma_min_inverse_power(sp.csc_matrix(M), v0=v0, seed=seed)


def inverse_iteration_eigvec(A, shift: complex, maxit: int = 30, seed: int = 0):
    """Eigenvector of sparse A nearest the shift, plus its Rayleigh quotient."""
    M = sp.csc_matrix(A - shift * sp.identity(A.shape[0], format="csc"))
    try:
        lu = spl.splu(M)
    except RuntimeError as exc:
        raise NumericsError(f"shifted factorization failed: {exc}") from exc
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(M.shape[0]) + 1j * rng.standard_normal(M.shape[0])
    v /= np.linalg.norm(v)
    for _ in range(maxit):
        v = lu.solve(v)
        v /= np.linalg.norm(v)
    Av = A @ v
    lam = complex(np.vdot(v, Av) / np.vdot(v, v))
    return v, lam
