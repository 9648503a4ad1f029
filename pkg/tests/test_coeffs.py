"""Coefficient families: values, derivatives, descriptors, assumption report."""

import numpy as np
import pytest

from resolvent_lab.coeffs import (BracketPower, Constant, LogBracketPower,
                                  Monomial, Scaled, check_assumptions,
                                  eval_derivative, parse_descriptor)
from resolvent_lab.errors import CapabilityError, ValidationError

X = np.linspace(-3.0, 3.0, 61)


def test_monomial_values_and_derivatives():
    f = Monomial(4)
    assert np.allclose(f.eval(X), X**4)
    assert np.allclose(f.derivative(1, X), 4 * X**3)
    assert np.allclose(f.derivative(2, X), 12 * X**2)
    assert np.allclose(f.antiderivative(X), X**5 / 5.0)
    assert f.unbounded


def test_constant_family():
    f = Constant(3.5)
    assert np.allclose(f.eval(X), 3.5)
    assert np.allclose(f.derivative(1, X), 0.0)
    assert np.allclose(f.antiderivative(X), 3.5 * X)
    assert not f.unbounded


def test_scaled_composition():
    f = Scaled(Monomial(2), 10.0)
    assert np.allclose(f.eval(X), 10.0 * X**2)
    assert np.allclose(f.derivative(2, X), 20.0)
    assert np.allclose(f.antiderivative(X), 10.0 * X**3 / 3.0)


@pytest.mark.parametrize("f", [BracketPower(1.5), LogBracketPower(0.25),
                               BracketPower(0.5), LogBracketPower(2.0)])
def test_closed_form_derivatives_match_finite_differences(f):
    x = np.linspace(-2.0, 2.0, 9)
    h = 1e-5
    fd1 = (f.eval(x + h) - f.eval(x - h)) / (2 * h)
    assert np.allclose(f.derivative(1, x), fd1, rtol=1e-7, atol=1e-8)
    fd2 = (f.eval(x + h) - 2 * f.eval(x) + f.eval(x - h)) / h**2
    assert np.allclose(f.derivative(2, x), fd2, rtol=1e-4, atol=1e-4)


def test_antiderivative_matches_quadrature():
    # fundamental theorem cross-check on a dense trapezoid grid
    for f in (BracketPower(1.5), LogBracketPower(0.25), Monomial(2)):
        xs = np.linspace(0.0, 2.0, 20001)
        quad = np.trapezoid(f.eval(xs), xs)
        assert abs(f.antiderivative(np.array(2.0)) - quad) < 1e-6


def test_eval_derivative_helper():
    assert np.allclose(eval_derivative(Monomial(2), 1, X), 2 * X)


def test_derivative_order_cap():
    with pytest.raises(CapabilityError):
        Monomial(2).derivative(9, X)


def test_descriptor_roundtrip():
    for text in ("monomial:2", "bracket:1.5", "logbracket:0.25", "const:0",
                 "scaled:monomial:2:10"):
        f = parse_descriptor(text)
        again = parse_descriptor(f.descriptor())
        assert np.allclose(f.eval(X), again.eval(X))


def test_descriptor_case_insensitive():
    f = parse_descriptor("SCALED:Monomial:2:10.0")
    assert np.allclose(f.eval(X), 10.0 * X**2)


@pytest.mark.parametrize("bad", ["x^2", "monomial:3", "monomial:0", "monomial",
                                 "scaled:monomial:2", "const", "bracket:-1",
                                 "frob:1", ""])
def test_descriptor_rejects(bad):
    with pytest.raises(ValidationError):
        parse_descriptor(bad)


def test_assumption_report_quadratic_pair():
    rpt = check_assumptions(Monomial(2), Scaled(Monomial(2), 10.0))
    assert rpt.unbounded_ok
    # q = 10 a, so the smallest domination constant is 10
    assert abs(rpt.domination_constant - 10.0) < 1e-9
    assert all(np.isfinite(c) for c in rpt.a_derivative_constants)
    assert all(np.isfinite(c) for c in rpt.q_derivative_constants)


def test_assumption_report_bounded_damping():
    rpt = check_assumptions(Constant(1.0), Monomial(2))
    assert not rpt.unbounded_ok


def test_assumption_report_validation():
    with pytest.raises(ValidationError):
        check_assumptions(Monomial(2), Monomial(2), x_max=-1.0)
