"""Quadratic pencil: norms, constant-free bounds, large-b ratio, level curves."""

import warnings

import numpy as np
import pytest

from resolvent_lab.coeffs import Constant, Monomial, Scaled
from resolvent_lab.errors import ValidationError
from resolvent_lab.grids import Grid1D, Space
from resolvent_lab.quadratic import (SpectralParameter, as_lambda, build_T,
                                     closed_form_level, default_fourier_grid,
                                     level_curve, pencil_norm, pencil_ratio,
                                     resolvent_scan, verify_graph_inequalities)

A = Monomial(2)

# frozen closed-form level-curve values for the quadratic family at eps = 0.01
CLOSED_FORM_CB = {40.0: 3.56826426658, 80.0: 3.74945405362, 160.0: 3.92636621092}


def test_exact_resolvent_norm_oracle():
    # harmonic family admits 1/(sqrt(kappa + 2 mu) + mu^2) at the ground state
    norm, _, _, _ = pencil_norm(A, A, 1.0)
    assert norm == pytest.approx(1.0 / (np.sqrt(3.0) + 1.0), rel=1e-3)


def test_positive_shift_bound_and_monotone():
    norms = []
    for mu in (1.0, 2.0, 5.0, 10.0):
        norm, _, _, _ = pencil_norm(A, A, mu)
        assert norm <= mu**-2 * (1 + 1e-12)
        norms.append(norm)
    assert all(n2 < n1 for n1, n2 in zip(norms, norms[1:]))


def test_sqrt_graph_bound():
    rpt = verify_graph_inequalities(A, A, mu_values=(1.0, 4.0))
    for mu, val in rpt.sqrt_bound.items():
        assert val <= 1.0 + 1e-8, (mu, val)
    assert rpt.ground_state_lower_bound_ok


def test_conjugation_symmetry():
    g = Grid1D(6.0, 60)
    z = complex(-0.7, 3.0)
    T1 = build_T(A, A, z, g, space=Space.X).matrix
    T2 = build_T(A, A, np.conj(z), g, space=Space.X).matrix
    assert np.array_equal(np.conj(T1), T2)


def test_pencil_norm_conjugate_pair_equal():
    n1, _, _, _ = pencil_norm(A, Constant(0.0), complex(-0.5, 10.0))
    n2, _, _, _ = pencil_norm(A, Constant(0.0), complex(-0.5, -10.0),
                              grid=default_fourier_grid(10.0))
    assert n1 == pytest.approx(n2, rel=1e-9)


def test_ratio_approaches_one():
    devs = [abs(pencil_ratio(A, A, 0.5, b) - 1.0) for b in (10.0, 20.0, 40.0)]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.1


def test_x_space_route_agrees_at_small_b():
    z = complex(-0.5, 10.0)
    nf, _, _, _ = pencil_norm(A, A, z)
    nx, _, _, _ = pencil_norm(A, A, z, grid=Grid1D(12.0, 1200), space=Space.X)
    assert abs(nf - nx) / nf < 1e-2


def test_grid_doubling_stability():
    z = complex(-1.0, 20.0)
    n1, _, _, _ = pencil_norm(A, A, z, grid=default_fourier_grid(20.0, 0.1))
    n2, _, _, _ = pencil_norm(A, A, z, grid=default_fourier_grid(20.0, 0.05))
    assert abs(n1 - n2) / n2 < 5e-3


def test_spectral_parameter_validation():
    with pytest.raises(ValidationError):
        SpectralParameter(-0.1, 1.0)
    with pytest.raises(ValidationError):
        SpectralParameter(1.0, 0.0)
    with pytest.raises(ValidationError):
        as_lambda(-2.0)  # the frame degenerates on (-inf, 0]
    assert as_lambda(SpectralParameter(1.0, 2.0)) == complex(-1.0, 2.0)
    assert as_lambda(3.0) == complex(3.0, 0.0)  # positive shifts are fine


def test_resolvent_scan_rows():
    pts = [SpectralParameter(0.5, b) for b in (5.0, 10.0)]
    scan = resolvent_scan(A, Constant(0.0), pts)
    rows = list(scan.rows())
    assert len(rows) == 2
    re, im, norm, smin, bm, resolved = rows[0]
    assert (re, im) == (-0.5, 5.0)
    assert norm == pytest.approx(1.0 / smin)
    assert resolved == (bm < 1e-6)


def test_level_curve_monotone_in_b():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lc = level_curve(A, Constant(0.0), 0.1, [20.0, 40.0])
    cbs = [s.c_numeric for s in lc.samples]
    assert cbs[0] < cbs[1]
    assert all(s.monotone_ok for s in lc.samples)
    assert all(np.isfinite(s.phi_b) for s in lc.samples)


def test_closed_form_level_frozen_values():
    for b, cb in CLOSED_FORM_CB.items():
        assert closed_form_level(A, b, 0.01) == pytest.approx(cb, rel=1e-9)
    # no closed form for the bounded family
    assert np.isnan(closed_form_level(Constant(1.0), 40.0, 0.01))


def test_level_curve_validation():
    with pytest.raises(ValidationError):
        level_curve(A, Constant(0.0), -0.1, [20.0])
    with pytest.raises(ValidationError):
        level_curve(A, Constant(0.0), 0.1, [0.0])
