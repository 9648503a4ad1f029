"""Closed-form spectrum for the quadratic-coefficient family a = x^2, q = kappa x^2.

Every eigenvalue candidate solves the quartic
    lam^4 - 2 (2n+1)^2 lam - (2n+1)^2 kappa = 0,
obtained from the pencil kernel condition -lam^2 in sigma(-d^2 + (kappa+2 lam)x^2)
after squaring away the square root. Ferrari's method resolves the four roots
through the real Cardano root y_n of the cubic
    y^3 + (2n+1)^2 kappa y - (2n+1)^4 / 2 = 0.
Two roots form a complex-conjugate pair (these satisfy the kernel relation with
the principal square root), one negative real root sits in (-kappa/2, 0), and
one positive real root is discarded outright by dissipativity.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericsError, ValidationError
from .generator import SpectrumResult

_SAFETY_SCAN_N = 50


def _validate_nk(n: int, kappa: float) -> None:
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValidationError(f"branch index must be an integer >= 0, got {n!r}")
    if kappa <= 0:
        raise ValidationError(f"kappa must be positive, got {kappa}")


def cardano_y(n: int, kappa: float) -> float:
    """Real Cardano root of y^3 + (2n+1)^2 kappa y - (2n+1)^4/2 = 0.

    Evaluated in a product form with no subtractions: with s = (1+kappa_n)^{1/2},
    kappa_n = (16/27) kappa^3 (2n+1)^{-2} and rho = (s-1)/(s+1) = kappa_n/(s+1)^2,
        y_n = 2^{1/3} (2n+1)^{4/3} / ((s+1)^{2/3} (1 + rho^{1/3} + rho^{2/3})),
    which keeps full precision both for kappa_n -> 0 (where the textbook
    difference of cube roots is benign) and kappa_n -> infinity (where it cancels).
    """
    _validate_nk(n, kappa)
    m = 2.0 * n + 1.0
    kn = (16.0 / 27.0) * kappa**3 / m**2
    s = np.sqrt(1.0 + kn)
    rho = kn / (s + 1.0) ** 2
    cr = np.cbrt(rho)
    return float(np.cbrt(2.0) * m ** (4.0 / 3.0)
                 / ((s + 1.0) ** (2.0 / 3.0) * (1.0 + cr + cr * cr)))


@dataclass(frozen=True)
class QuarticBranches:
    """All four quartic roots at index n, split by branch."""

    n: int
    kappa: float
    y_n: float
    lam_r: float
    lam_i_plus: complex
    lam_i_minus: complex
    discarded_root: float

    def retained(self) -> list:
        return [self.lam_r, self.lam_i_plus, self.lam_i_minus]


def quartic_branches(n: int, kappa: float) -> QuarticBranches:
    """Ferrari branches of lam^4 - 2 m^2 lam - m^2 kappa = 0, m = 2n+1.

    With t = (2 y_n)^{1/2} and g = 4 m^2 / t^3, the roots are
    (t/2)(1 +/- sqrt(g-1)) and -(t/2)(1 -/+ i sqrt(g+1)). The combination
    2 - g cancels catastrophically for large n, so it is evaluated through
    the cubic identity t^3 = 2 m (m^2 - 2 kappa y)^{1/2}:
        2 - g = -4 kappa y / (sqrt(m^2-2ky) (sqrt(m^2-2ky) + m)).
    """
    y = cardano_y(n, kappa)
    m = 2.0 * n + 1.0
    t = np.sqrt(2.0 * y)
    X = m * m - 2.0 * kappa * y
    if X <= 0.0:
        raise NumericsError(f"cubic root inconsistent at n={n}, kappa={kappa}")
    sX = np.sqrt(X)
    two_minus_g = -4.0 * kappa * y / (sX * (sX + m))
    y_minus = np.sqrt(1.0 - two_minus_g)  # sqrt(g - 1) >= 1
    y_plus = np.sqrt(3.0 - two_minus_g)   # sqrt(g + 1)
    lam_r = 0.5 * t * two_minus_g / (1.0 + y_minus)
    discarded = 0.5 * t * (1.0 + y_minus)
    lam_i_plus = complex(-0.5 * t, 0.5 * t * y_plus)
    return QuarticBranches(n=int(n), kappa=float(kappa), y_n=y,
                           lam_r=float(lam_r), lam_i_plus=lam_i_plus,
                           lam_i_minus=lam_i_plus.conjugate(),
                           discarded_root=float(discarded))


@dataclass(frozen=True)
class AsymptoticBranches:
    """Large-n expansions with first corrections, o(.) terms dropped."""

    n: int
    kappa: float
    lam_r_asym: float
    modulus_asym: float
    theta_asym: float

    @property
    def arg_asym(self) -> float:
        return float(np.pi - self.theta_asym)


def asymptotic_branches(n: int, kappa: float) -> AsymptoticBranches:
    _validate_nk(n, kappa)
    m = 2.0 * n + 1.0
    lam_r = -0.5 * kappa * (1.0 - 2.0 ** (-8.0 / 3.0) / 3.0 * kappa**2 * m ** (-4.0 / 3.0))
    modulus = 2.0 ** (1.0 / 3.0) * m ** (2.0 / 3.0) \
        * (1.0 - 2.0 ** (-7.0 / 3.0) / 3.0 * kappa * m ** (-2.0 / 3.0))
    theta = np.arctan(np.sqrt(3.0) * (1.0 + 2.0 ** (-1.0 / 3.0) / 3.0 * kappa * m ** (-2.0 / 3.0)))
    return AsymptoticBranches(n=int(n), kappa=float(kappa), lam_r_asym=float(lam_r),
                              modulus_asym=float(modulus), theta_asym=float(theta))


def _spectral_bound(kappa: float) -> float:
    """max(lam_0^r, Re lam_0^i); the n = 0 branches dominate since y_n increases.

    A scan over small n guards the monotonicity argument numerically.
    """
    b0 = quartic_branches(0, kappa)
    s = max(b0.lam_r, b0.lam_i_plus.real)
    for n in range(1, _SAFETY_SCAN_N + 1):
        bn = quartic_branches(n, kappa)
        if max(bn.lam_r, bn.lam_i_plus.real) > s + 1e-12:
            raise NumericsError(
                f"spectral bound not attained at n=0 for kappa={kappa} (violated at n={n})")
    return s


def growth_bound(kappa: float) -> float:
    """Semigroup growth rate; coincides with the spectral bound for this family."""
    return _spectral_bound(kappa)


def spectrum_exact(kappa: float, n_max: int) -> SpectrumResult:
    """Closed-form branch catalog for n = 0..n_max plus the essential ray end."""
    if kappa <= 0:
        raise ValidationError(f"kappa must be positive, got {kappa}")
    if n_max < 0:
        raise ValidationError(f"n_max must be >= 0, got {n_max}")
    eigs, tags = [], []
    for n in range(n_max + 1):
        br = quartic_branches(n, kappa)
        eigs.extend([complex(br.lam_r), br.lam_i_plus, br.lam_i_minus])
        tags.extend([f"real:{n}", f"imag_plus:{n}", f"imag_minus:{n}"])
    order = np.argsort([-e.real for e in eigs], kind="stable")
    eigs = np.array([eigs[i] for i in order])
    tags = [tags[i] for i in order]
    return SpectrumResult(
        eigenvalues=eigs, tags=tags, boundary_masses=np.zeros(len(eigs)),
        essential_ray_end=-kappa / 2.0, spectral_bound=_spectral_bound(kappa),
        method_tag="exact")


@dataclass(frozen=True)
class KappaSummary:
    kappa: float
    branches: tuple
    s_bound: float
    omega0: float
    y0: float


def kappa_sweep(kappa_list, n_count: int = 5) -> list:
    """One row per kappa: first n_count branch triples plus decay-rate summary."""
    ks = [float(k) for k in kappa_list]
    if not ks or any(k <= 0 for k in ks):
        raise ValidationError("kappa list must be nonempty and positive")
    if ks != sorted(ks):
        raise ValidationError("kappa list must be sorted ascending")
    if n_count < 1:
        raise ValidationError(f"n_count must be >= 1, got {n_count}")
    rows = []
    for k in ks:
        branches = tuple(quartic_branches(n, k) for n in range(n_count))
        s = _spectral_bound(k)
        rows.append(KappaSummary(kappa=k, branches=branches, s_bound=s,
                                 omega0=s, y0=branches[0].y_n))
    return rows
