"""Grids, stencils, and the energy Gram."""

import numpy as np
import pytest

from resolvent_lab.coeffs import Constant, Monomial, Scaled
from resolvent_lab.errors import ValidationError
from resolvent_lab.grids import (Grid1D, boundary_mass, build_energy_gram,
                                 build_Hq, second_derivative,
                                 suggested_half_width)


def test_grid_geometry():
    g = Grid1D(2.0, 7)
    assert g.h == pytest.approx(4.0 / 8.0)
    assert g.nodes[0] == pytest.approx(-2.0 + g.h)
    assert g.nodes[-1] == pytest.approx(2.0 - g.h)
    assert len(g.nodes) == 7


def test_grid_validation():
    with pytest.raises(ValidationError):
        Grid1D(-1.0, 10)
    with pytest.raises(ValidationError):
        Grid1D(1.0, 2)


def test_stencil_eigenpair():
    # the positive Dirichlet stencil has sin(k pi (x+L)/(2L)) eigenvectors
    g = Grid1D(np.pi / 2, 80)
    k = 3
    v = np.sin(k * (g.nodes + g.half_width))
    lam = 2.0 * (1.0 - np.cos(k * g.h)) / g.h**2
    D2 = second_derivative(g).matrix
    assert np.linalg.norm(D2 @ v - lam * v) < 1e-10 * np.linalg.norm(v)


def test_second_derivative_positive():
    g = Grid1D(5.0, 40)
    w = np.linalg.eigvalsh(second_derivative(g).matrix)
    assert w.min() > 0


def test_build_Hq_adds_potential_diagonal():
    g = Grid1D(5.0, 30)
    q = Scaled(Monomial(2), 10.0)
    H = build_Hq(q, g).matrix
    D2 = second_derivative(g).matrix
    assert np.allclose(H - D2, np.diag(10.0 * g.nodes**2))


def test_gram_spd_and_lazy_dense_views():
    g = Grid1D(6.0, 35)
    gram = build_energy_gram(Monomial(2), g)
    W = gram.gram
    assert np.allclose(W, W.T)
    assert np.linalg.eigvalsh(W).min() > 0
    L = gram.cholesky_factor
    assert np.allclose(L @ L.T, W, atol=1e-12)


def test_gram_banded_ops_match_dense():
    g = Grid1D(6.0, 35)
    gram = build_energy_gram(Monomial(2), g)
    rng = np.random.default_rng(3)
    u = rng.standard_normal(2 * g.n_interior)
    L = gram.cholesky_factor
    assert np.allclose(gram.lt_matvec(u), L.T @ u)
    assert np.allclose(gram.l_matvec(u), L @ u)
    assert np.allclose(gram.lt_solve(u), np.linalg.solve(L.T, u))
    assert np.allclose(gram.l_solve(u), np.linalg.solve(L, u))
    wn = gram.weighted_norm(u)
    assert wn == pytest.approx(np.sqrt(u @ gram.gram @ u))


def test_gram_is_energy_quadrature():
    # u' W u is the quadrature of |u1'|^2 + q |u1|^2 + |u2|^2 with Dirichlet ends
    g = Grid1D(6.0, 800)
    q = Scaled(Monomial(2), 4.0)
    gram = build_energy_gram(q, g)
    u1 = np.exp(-g.nodes**2)
    u2 = np.sin(g.nodes) * np.exp(-g.nodes**2 / 2)
    u = np.concatenate([u1, u2])
    du = np.diff(np.concatenate([[0.0], u1, [0.0]])) / g.h
    direct = g.h * (np.sum(du**2) + np.sum(q.eval(g.nodes) * u1**2) + np.sum(u2**2))
    assert gram.weighted_norm(u) ** 2 == pytest.approx(direct, rel=1e-12)


def test_gram_rejects_negative_potential():
    with pytest.raises(ValidationError):
        build_energy_gram(Constant(-1.0), Grid1D(2.0, 10))


def test_boundary_mass_detects_wall_support():
    g = Grid1D(5.0, 200)
    interior = np.exp(-g.nodes**2)
    wall = np.zeros(g.n_interior)
    wall[:4] = 1.0
    assert boundary_mass(np.concatenate([interior, interior]), g) < 1e-10
    assert boundary_mass(np.concatenate([wall, 0 * wall]), g) > 0.9


def test_suggested_half_width():
    L = suggested_half_width(Monomial(2), Scaled(Monomial(2), 10.0), 10.0)
    assert L == 10.0
    # bounded coefficients never constrain the box
    L2 = suggested_half_width(Constant(1.0), Monomial(2), 10.0)
    assert L2 == 10.0
