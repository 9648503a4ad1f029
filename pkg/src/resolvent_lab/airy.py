"""Resolvent norms of generalized Airy operators A = -d/dx + a(x) shifted by c.

Three independent routes: the exact causal integral kernel (Nystrom),
a Fourier-side matrix discretization (monomial dampings only), and the
closed-form large-c asymptotics. The operator has empty spectrum, so the
norm is finite for every c >= 0.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _linalg
from .coeffs import CoefficientFunction, Monomial, Scaled
from .errors import CapabilityError, NumericsError, UnresolvedWarning, ValidationError
from .grids import DiscreteOperator, Grid1D, Space, check_boundary_mass, second_derivative

EXP_UNDERFLOW = -745.0  # below this, exp underflows to subnormal zero


@dataclass(frozen=True)
class AiryOperatorSpec:
    """A - c for A = -d/dx + a(x), with the antiderivative-based kernel data."""

    a: CoefficientFunction
    c: float = 0.0

    def __post_init__(self):
        if self.c < 0:
            raise ValidationError(f"shift c must be >= 0, got {self.c}")

    def psi(self, x):
        """Psi(x) = Phi(x) - c x with Phi' = a, Phi(0) = 0."""
        return self.a.antiderivative(x) - self.c * np.asarray(x, dtype=float)


def resolvent_kernel(spec: AiryOperatorSpec, x, t):
    """Kernel of (A - c)^{-1}: exp(Psi(x) - Psi(t)) for t >= x, else 0.

    The exponent is computed first; below the double-precision underflow
    threshold the entry is set to exact zero. Positive exponents occur only
    inside the well where a < c and are bounded by the well integral, so they
    never overflow for the supported families.
    """
    scalar = np.isscalar(x) and np.isscalar(t)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    E, causal = np.broadcast_arrays(spec.psi(x) - spec.psi(t), t >= x)
    out = np.zeros(E.shape)
    ok = causal & (E >= EXP_UNDERFLOW)
    out[ok] = np.exp(E[ok])
    return float(out[0]) if scalar else out


def _positive_exponent_bound(spec: AiryOperatorSpec, xs: np.ndarray) -> float:
    # integral of (c - a)_+ bounds any positive kernel exponent
    gap = np.maximum(spec.c - spec.a.eval(xs), 0.0)
    h = xs[1] - xs[0]
    return float(np.trapezoid(gap, dx=h))


def _kernel_matrix(spec: AiryOperatorSpec, L_A: float, N_A: int) -> np.ndarray:
    xs = np.linspace(-L_A, L_A, N_A)
    h = xs[1] - xs[0]
    w = np.full(N_A, h)
    w[0] = w[-1] = h / 2.0
    Psi = spec.psi(xs)
    E = Psi[:, None] - Psi[None, :]
    causal = xs[None, :] >= xs[:, None]
    bound = _positive_exponent_bound(spec, xs) + 1.0
    if float(E[causal].max(initial=0.0)) > bound:
        raise NumericsError("kernel exponent exceeds the well-integral bound; "
                            "coefficient family violates the kernel assumptions")
    K = np.zeros_like(E)
    ok = causal & (E >= EXP_UNDERFLOW)
    K[ok] = np.exp(E[ok])
    # causal jump 0 -> 1 across the diagonal: trapezoid takes the midpoint value
    np.fill_diagonal(K, 0.5)
    sw = np.sqrt(w)
    return sw[:, None] * K * sw[None, :], xs


def airy_norm_kernel(spec: AiryOperatorSpec, L_A: float = 8.0, N_A: int = 800) -> float:
    """Norm of (A - c)^{-1} as the top singular value of the Nystrom matrix."""
    norm, _ = airy_norm_kernel_diagnostics(spec, L_A, N_A)
    return norm


def airy_norm_kernel_diagnostics(spec: AiryOperatorSpec, L_A: float = 8.0,
                                 N_A: int = 800):
    """(norm, boundary_mass of the top singular vector)."""
    A, _ = _kernel_matrix(spec, L_A, N_A)
    U, s, _ = np.linalg.svd(A)
    bm = _bm_simple(U[:, 0])
    if bm >= 1e-6:
        warnings.warn(
            f"airy kernel norm at c={spec.c:g}: boundary mass {bm:.2e} >= 1e-06; "
            f"increase L_A (currently {L_A:g})", UnresolvedWarning, stacklevel=2)
    return float(s[0]), bm


def _bm_simple(vec: np.ndarray) -> float:
    nb = max(1, int(0.05 * vec.size))
    m = np.abs(vec) ** 2
    return float((m[:nb].sum() + m[-nb:].sum()) / m.sum())


def _monomial_parts(a: CoefficientFunction):
    if isinstance(a, Monomial):
        return a.exponent // 2, 1.0
    if isinstance(a, Scaled) and isinstance(a.base, Monomial):
        return a.base.exponent // 2, a.factor
    raise CapabilityError(
        "matrix route needs a monomial damping (x^2m); use airy_norm_kernel for "
        f"{a.descriptor()}")


def build_airy_matrix(spec: AiryOperatorSpec, grid: Grid1D,
                      adjoint: bool = False) -> DiscreteOperator:
    """Fourier-side matrix of A - c: a(i d/dxi) - i xi - c, so a monomial x^2m
    becomes the m-th power of the positive FD Laplacian."""
    m, factor = _monomial_parts(spec.a)
    K = second_derivative(grid).matrix
    M = factor * np.linalg.matrix_power(K, m).astype(complex)
    sign = 1.0 if adjoint else -1.0
    xi = grid.nodes
    M += np.diag(sign * 1j * xi) - spec.c * np.eye(grid.n_interior)
    return DiscreteOperator(M, grid, space_tag=Space.FOURIER)


def airy_norm_matrix(spec: AiryOperatorSpec, grid: Grid1D | None = None,
                     adjoint: bool = False) -> float:
    norm, _ = airy_norm_matrix_diagnostics(spec, grid, adjoint)
    return norm


def airy_norm_matrix_diagnostics(spec: AiryOperatorSpec, grid: Grid1D | None = None,
                                 adjoint: bool = False):
    if grid is None:
        grid = Grid1D(8.0, 400)
    if grid.h > 0.1:
        raise ValidationError(
            f"matrix route needs h <= 0.1 to resolve the localization scale, got h={grid.h:g}")
    op = build_airy_matrix(spec, grid, adjoint=adjoint)
    smin, vec, _ = _linalg.svd_extremes(op.matrix)
    if smin <= 0:
        raise NumericsError("singular matrix discretization; operator should be spectrum-free")
    bm = check_boundary_mass(vec, grid, f"airy matrix norm at c={spec.c:g}")
    return 1.0 / smin, bm


@dataclass(frozen=True)
class MonomialP:
    """Asymptotic family tag for a(x) = x^p with p = 2n."""

    p: float

    def __post_init__(self):
        if self.p <= 0:
            raise ValidationError(f"monomial asymptotics need p > 0, got {self.p}")


@dataclass(frozen=True)
class LogP:
    """Asymptotic family tag for a(x) = log<x>^p."""

    p: float

    def __post_init__(self):
        if self.p <= 0:
            raise ValidationError(f"log asymptotics need p > 0, got {self.p}")


def airy_asymptotic_norm(family, c: float) -> float:
    """Leading-order closed form for the resolvent norm at large c."""
    if c <= 0:
        raise ValidationError(f"asymptotic formula needs c > 0, got {c}")
    if isinstance(family, MonomialP):
        n = family.p / 2.0
        return float(np.sqrt(np.pi / (2 * n)) * c ** ((1 - 2 * n) / (4 * n))
                     * np.exp(4 * n / (2 * n + 1) * c ** ((2 * n + 1) / (2 * n))))
    if isinstance(family, LogP):
        p = family.p
        return float(np.sqrt(np.pi / p)
                     * np.exp(2 * p * np.sqrt(np.expm1(2 * c / p)) + c / (2 * p) - p * np.pi))
    raise CapabilityError(f"unknown asymptotic family {family!r}")
