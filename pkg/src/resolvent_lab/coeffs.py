"""Damping and potential coefficient families.

Every family is smooth, nonnegative, and carries closed-form derivatives up
to order 8 plus a closed-form antiderivative vanishing at 0 (used by the
Airy-kernel route). The admissibility checker samples the defining
symbol-class ratios on a log-spaced grid and reports the empirical constants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import hyp2f1

from .errors import CapabilityError, ValidationError

MAX_DERIVATIVE_ORDER = 8


def _as_array(x):
    return np.asarray(x, dtype=float)


class CoefficientFunction:
    """Base class: nonnegative smooth function family on the real line."""

    unbounded: bool = True

    def eval(self, x):
        return self.derivative(0, x)

    def derivative(self, order: int, x):
        raise NotImplementedError

    def antiderivative(self, x):
        """Antiderivative with value 0 at x = 0."""
        raise NotImplementedError

    def descriptor(self) -> str:
        raise NotImplementedError

    def _check_order(self, order: int) -> None:
        if not 0 <= order <= MAX_DERIVATIVE_ORDER:
            raise CapabilityError(
                f"derivative order {order} unsupported (0..{MAX_DERIVATIVE_ORDER})")


@dataclass(frozen=True)
class Monomial(CoefficientFunction):
    """x**exponent with an even exponent 2m, m >= 1."""

    exponent: int

    def __post_init__(self):
        if self.exponent < 2 or self.exponent % 2 != 0:
            raise ValidationError(f"monomial exponent must be even and >= 2, got {self.exponent}")

    def derivative(self, order, x):
        self._check_order(order)
        x = _as_array(x)
        n = self.exponent
        if order > n:
            return np.zeros_like(x)
        coef = math.perm(n, order)
        return coef * x ** (n - order)

    def antiderivative(self, x):
        x = _as_array(x)
        return x ** (self.exponent + 1) / (self.exponent + 1)

    def descriptor(self):
        return f"monomial:{self.exponent}"


@lru_cache(maxsize=None)
def _bracket_polys(p: float, max_order: int):
    # f_j = P_j(x) * (1+x^2)^((p-2j)/2);  P_{j+1} = P_j'(1+x^2) + (p-2j) x P_j
    polys = [np.polynomial.Polynomial([1.0])]
    base = np.polynomial.Polynomial([1.0, 0.0, 1.0])
    xpoly = np.polynomial.Polynomial([0.0, 1.0])
    for j in range(max_order):
        pj = polys[-1]
        polys.append(pj.deriv() * base + (p - 2 * j) * xpoly * pj)
    return tuple(polys)


@dataclass(frozen=True)
class BracketPower(CoefficientFunction):
    """(1 + x^2)**(p/2), the p-th power of the Japanese bracket."""

    p: float

    def __post_init__(self):
        if self.p <= 0:
            raise ValidationError(f"bracket power must be positive, got {self.p}")

    def derivative(self, order, x):
        self._check_order(order)
        x = _as_array(x)
        pj = _bracket_polys(self.p, MAX_DERIVATIVE_ORDER)[order]
        return pj(x) * (1.0 + x * x) ** ((self.p - 2 * order) / 2.0)

    def antiderivative(self, x):
        x = _as_array(x)
        return x * hyp2f1(0.5, -self.p / 2.0, 1.5, -x * x)

    def descriptor(self):
        return f"bracket:{self.p:g}"


@lru_cache(maxsize=None)
def _logbracket_polys(p: float, max_order: int):
    # for j >= 1: f_j = Q_j(x) / (1+x^2)^j;  Q_{j+1} = Q_j'(1+x^2) - 2j x Q_j
    polys = {1: np.polynomial.Polynomial([0.0, p])}
    base = np.polynomial.Polynomial([1.0, 0.0, 1.0])
    xpoly = np.polynomial.Polynomial([0.0, 1.0])
    for j in range(1, max_order):
        qj = polys[j]
        polys[j + 1] = qj.deriv() * base - 2 * j * xpoly * qj
    return polys


@dataclass(frozen=True)
class LogBracketPower(CoefficientFunction):
    """log of the p-th bracket power, (p/2) log(1 + x^2)."""

    p: float

    def __post_init__(self):
        if self.p <= 0:
            raise ValidationError(f"log bracket power must be positive, got {self.p}")

    def derivative(self, order, x):
        self._check_order(order)
        x = _as_array(x)
        if order == 0:
            return (self.p / 2.0) * np.log1p(x * x)
        qj = _logbracket_polys(self.p, MAX_DERIVATIVE_ORDER)[order]
        return qj(x) / (1.0 + x * x) ** order

    def antiderivative(self, x):
        x = _as_array(x)
        return (self.p / 2.0) * (x * np.log1p(x * x) - 2.0 * x + 2.0 * np.arctan(x))

    def descriptor(self):
        return f"logbracket:{self.p:g}"


@dataclass(frozen=True)
class Constant(CoefficientFunction):
    """Constant k >= 0. Bounded, so never admissible as a damping."""

    k: float
    unbounded = False

    def __post_init__(self):
        if self.k < 0:
            raise ValidationError(f"constant coefficient must be >= 0, got {self.k}")

    def derivative(self, order, x):
        self._check_order(order)
        x = _as_array(x)
        if order == 0:
            return np.full_like(x, self.k)
        return np.zeros_like(x)

    def antiderivative(self, x):
        return self.k * _as_array(x)

    def descriptor(self):
        return f"const:{self.k:g}"


@dataclass(frozen=True)
class Scaled(CoefficientFunction):
    """factor * base with factor > 0."""

    base: CoefficientFunction
    factor: float

    def __post_init__(self):
        if self.factor <= 0:
            raise ValidationError(f"scale factor must be positive, got {self.factor}")

    @property
    def unbounded(self):
        return self.base.unbounded

    def derivative(self, order, x):
        return self.factor * self.base.derivative(order, x)

    def antiderivative(self, x):
        return self.factor * self.base.antiderivative(x)

    def descriptor(self):
        return f"scaled:{self.base.descriptor()}:{self.factor:g}"


def eval_derivative(f: CoefficientFunction, order: int, x):
    """Closed-form derivative of order `order` at x (scalar or array)."""
    return f.derivative(order, x)


def parse_descriptor(text: str) -> CoefficientFunction:
    """Parse `monomial:2`, `bracket:1.5`, `logbracket:0.25`, `const:0`,
    `scaled:<descriptor>:<factor>`. Case-insensitive."""
    parts = text.strip().lower().split(":")
    try:
        kind = parts[0]
        if kind == "monomial" and len(parts) == 2:
            return Monomial(int(parts[1]))
        if kind == "bracket" and len(parts) == 2:
            return BracketPower(float(parts[1]))
        if kind == "logbracket" and len(parts) == 2:
            return LogBracketPower(float(parts[1]))
        if kind == "const" and len(parts) == 2:
            return Constant(float(parts[1]))
        if kind == "scaled" and len(parts) >= 3:
            return Scaled(parse_descriptor(":".join(parts[1:-1])), float(parts[-1]))
    except (ValueError, ValidationError) as exc:
        raise ValidationError(f"bad coefficient descriptor {text!r}: {exc}") from exc
    raise ValidationError(
        f"bad coefficient descriptor {text!r}; expected monomial:<even-int>, "
        "bracket:<p>, logbracket:<p>, const:<k>, or scaled:<descriptor>:<factor>")


@dataclass
class AssumptionReport:
    """Empirical admissibility constants sampled on a log-spaced grid."""

    unbounded_ok: bool
    a_derivative_constants: list
    q_derivative_constants: list
    domination_constant: float
    crossover: float
    sample_grid: np.ndarray


def _sample_grid(x_max: float, npts: int = 4096) -> np.ndarray:
    half = npts // 2
    pos = np.logspace(-4, np.log10(x_max), half)
    return np.concatenate([-pos[::-1], pos])


def check_assumptions(a: CoefficientFunction, q: CoefficientFunction,
                      x_max: float = 1e4, n_max: int = 2) -> AssumptionReport:
    """Sample the derivative-control ratios |f^(n)| <x>^n / (1 + f) for a and q
    and the smallest K with q <= K a beyond the crossover where a reaches 1.

    Constants are suprema over the sample grid, so they are finite by
    construction; a bounded damping is reported via unbounded_ok = False
    rather than an exception.
    """
    if x_max <= 0:
        raise ValidationError(f"x_max must be positive, got {x_max}")
    if not 1 <= n_max <= MAX_DERIVATIVE_ORDER:
        raise ValidationError(f"n_max must be in 1..{MAX_DERIVATIVE_ORDER}, got {n_max}")
    xs = _sample_grid(x_max)
    bracket = np.sqrt(1.0 + xs * xs)
    a0 = a.eval(xs)
    q0 = q.eval(xs)

    def constants(f, f0):
        out = []
        for n in range(1, n_max + 1):
            ratio = np.abs(f.derivative(n, xs)) * bracket ** n / (1.0 + f0)
            out.append(float(ratio.max()))
        return out

    # crossover: first scale where the damping has grown past 1
    above = np.abs(xs)[a0 >= 1.0]
    if above.size:
        x0 = float(above.min())
        mask = np.abs(xs) >= x0
        with np.errstate(divide="ignore", invalid="ignore"):
            dom = float(np.max(q0[mask] / a0[mask]))
    else:
        x0 = math.inf
        dom = math.inf

    return AssumptionReport(
        unbounded_ok=bool(a.unbounded),
        a_derivative_constants=constants(a, a0),
        q_derivative_constants=constants(q, q0),
        domination_constant=dom,
        crossover=x0,
        sample_grid=xs,
    )
