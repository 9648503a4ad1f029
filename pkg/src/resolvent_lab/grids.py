"""Finite-difference discretization on a truncated interval.

Everything lives on the interior nodes of [-L, L] with homogeneous Dirichlet
ends: x_j = -L + j h, j = 1..N, h = 2L/(N+1). The energy Gram carries the
quadrature weight h so that u' W u approximates the defining integrals.
"""
from __future__ import annotations

import enum
import functools
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .coeffs import CoefficientFunction
from .errors import NumericsError, UnresolvedWarning, ValidationError


class Space(enum.Enum):
    X = "x"
    FOURIER = "fourier"


class NormKind(enum.Enum):
    EUCLIDEAN = "euclidean"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class Grid1D:
    """Interior-node uniform grid on (-L, L), Dirichlet ends excluded."""

    half_width: float
    n_interior: int

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValidationError(f"half_width must be positive, got {self.half_width}")
        if self.n_interior < 3:
            raise ValidationError(f"n_interior must be >= 3, got {self.n_interior}")

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.n_interior + 1)

    @property
    def nodes(self) -> np.ndarray:
        return -self.half_width + self.h * np.arange(1, self.n_interior + 1)


@dataclass
class DiscreteOperator:
    matrix: np.ndarray
    grid: Grid1D
    space_tag: Space = Space.X
    norm_tag: NormKind = NormKind.EUCLIDEAN


def second_derivative(grid: Grid1D) -> DiscreteOperator:
    """Positive Dirichlet Laplacian: the matrix of -d^2/dx^2."""
    N, h = grid.n_interior, grid.h
    M = (np.diag(np.full(N, 2.0)) + np.diag(np.full(N - 1, -1.0), 1)
         + np.diag(np.full(N - 1, -1.0), -1)) / h**2
    return DiscreteOperator(M, grid)


def build_Hq(q: CoefficientFunction, grid: Grid1D) -> DiscreteOperator:
    """Schroedinger operator -d^2/dx^2 + q(x), real symmetric."""
    op = second_derivative(grid)
    M = op.matrix + np.diag(q.eval(grid.nodes))
    return DiscreteOperator(M, grid)


def _tridiag_cholesky(diag: np.ndarray, sub: np.ndarray):
    # banded Cholesky of an SPD tridiagonal, lower layout: row 0 diag, row 1 subdiag
    ab = np.zeros((2, diag.size))
    ab[0] = diag
    ab[1, :sub.size] = sub
    try:
        return sla.cholesky_banded(ab, lower=True)
    except sla.LinAlgError as exc:
        raise NumericsError(f"energy Gram lost positive definiteness: {exc}") from exc


@dataclass
class EnergyGram:
    """Gram matrix of the energy inner product on the product space.

    W = h * blockdiag(D1' D1 + diag(q), I) where D1 is the forward-difference
    first derivative with Dirichlet ends, so D1' D1 is the standard Laplacian
    stencil. The factor h makes u' W u a trapezoid-type quadrature of
    |u1'|^2 + q |u1|^2 + |u2|^2.

    Only banded data is stored; the dense `gram` and `cholesky_factor` views
    are assembled on first access so large banded-route systems never pay the
    2N x 2N memory cost.
    """

    grid: Grid1D
    # banded lower Cholesky of the first block (row 0 diag, row 1 subdiag)
    _banded: np.ndarray = field(repr=False, default=None)
    # tridiagonal of the first Gram block
    _diag: np.ndarray = field(repr=False, default=None)
    _sub: np.ndarray = field(repr=False, default=None)

    @functools.cached_property
    def gram(self) -> np.ndarray:
        N, h = self.n, self.grid.h
        W = np.zeros((2 * N, 2 * N))
        W[:N, :N] = np.diag(self._diag) + np.diag(self._sub, 1) + np.diag(self._sub, -1)
        W[N:, N:] = h * np.eye(N)
        return W

    @functools.cached_property
    def cholesky_factor(self) -> np.ndarray:
        N, h = self.n, self.grid.h
        Lfac = np.zeros((2 * N, 2 * N))
        Lfac[:N, :N] = np.diag(self._banded[0]) + np.diag(self._banded[1, :-1], -1)
        Lfac[N:, N:] = np.sqrt(h) * np.eye(N)
        return Lfac

    @property
    def n(self) -> int:
        return self.grid.n_interior

    @property
    def _sqrt_h(self) -> float:
        return np.sqrt(self.grid.h)

    def lt_matvec(self, u: np.ndarray) -> np.ndarray:
        """L^T u for the block factor W = L L^T; maps into Euclidean coords."""
        N = self.n
        d, e = self._banded[0], self._banded[1]
        u1, u2 = u[:N], u[N:]
        r = d * u1
        r[:-1] = r[:-1] + e[:-1] * u1[1:]
        return np.concatenate([r, self._sqrt_h * u2])

    def l_matvec(self, u: np.ndarray) -> np.ndarray:
        N = self.n
        d, e = self._banded[0], self._banded[1]
        u1, u2 = u[:N], u[N:]
        r = d * u1
        r[1:] = r[1:] + e[:-1] * u1[:-1]
        return np.concatenate([r, self._sqrt_h * u2])

    def lt_solve(self, v: np.ndarray) -> np.ndarray:
        N = self.n
        d, e = self._banded[0], self._banded[1]
        ab = np.zeros((2, N), dtype=v.dtype)
        ab[0, 1:] = e[:-1]
        ab[1] = d
        u1 = sla.solve_banded((0, 1), ab, v[:N])
        return np.concatenate([u1, v[N:] / self._sqrt_h])

    def l_solve(self, v: np.ndarray) -> np.ndarray:
        N = self.n
        d, e = self._banded[0], self._banded[1]
        ab = np.zeros((2, N), dtype=v.dtype)
        ab[0] = d
        ab[1, :-1] = e[:-1]
        u1 = sla.solve_banded((1, 0), ab, v[:N])
        return np.concatenate([u1, v[N:] / self._sqrt_h])

    def weighted_norm(self, u: np.ndarray) -> float:
        return float(np.linalg.norm(self.lt_matvec(u)))


def build_energy_gram(q: CoefficientFunction, grid: Grid1D) -> EnergyGram:
    N, h = grid.n_interior, grid.h
    qv = q.eval(grid.nodes)
    if np.any(qv < 0):
        raise ValidationError("potential must be nonnegative for the energy Gram")
    diag = h * (2.0 / h**2 + qv)
    sub = h * np.full(N - 1, -1.0 / h**2)
    banded = _tridiag_cholesky(diag, sub)
    return EnergyGram(grid=grid, _banded=banded, _diag=diag, _sub=sub)


def boundary_mass(vec: np.ndarray, grid: Grid1D) -> float:
    """Fraction of squared mass in the outer 5 percent of nodes per side.

    Accepts a length-N vector or a stacked (u1, u2) pair of length 2N.
    """
    N = grid.n_interior
    if vec.size not in (N, 2 * N):
        raise ValidationError(f"vector length {vec.size} does not match grid N={N}")
    nb = max(1, int(0.05 * N))
    m = np.abs(vec) ** 2
    blocks = [m] if vec.size == N else [m[:N], m[N:]]
    outer = sum(float(b[:nb].sum() + b[-nb:].sum()) for b in blocks)
    total = float(m.sum())
    return outer / total if total > 0 else 0.0


def check_boundary_mass(vec: np.ndarray, grid: Grid1D, what: str,
                        tol: float = 1e-6) -> float:
    bm = boundary_mass(vec, grid)
    if bm >= tol:
        warnings.warn(
            f"{what}: boundary mass {bm:.2e} >= {tol:.0e}; increase the half-width "
            f"(currently {grid.half_width:g})", UnresolvedWarning, stacklevel=3)
    return bm


def suggested_half_width(a: CoefficientFunction, q: CoefficientFunction,
                         spectral_scale: float) -> float:
    """Smallest integer L with min over the growing coefficients of
    a(L), q(L), L^2 at least 10x the spectral scale. Bounded coefficients do
    not constrain the box (they never dominate)."""
    target = 10.0 * max(spectral_scale, 1.0)
    for L in range(1, 201):
        vals = [float(L) ** 2]
        for f in (a, q):
            if f.unbounded:
                vals.append(float(f.eval(np.array(float(L)))))
        if min(vals) >= target:
            return float(L)
    return 200.0
