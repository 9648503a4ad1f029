"""Closed-form branch catalog for the quadratic-coefficient family."""

import numpy as np
import pytest

from resolvent_lab.errors import ValidationError
from resolvent_lab.oscillator import (asymptotic_branches, cardano_y,
                                      growth_bound, kappa_sweep,
                                      quartic_branches, spectrum_exact)

# frozen reference values at kappa = 10
Y0_K10 = 0.0499875094
LAM0_R = -1.6132553442
LAM0_I = complex(-0.1580941323, 1.7854037295)
S_K10 = -0.158094132348


def test_cardano_reference_value():
    assert cardano_y(0, 10.0) == pytest.approx(Y0_K10, rel=1e-9)


@pytest.mark.parametrize("n", [0, 1, 3, 10, 100])
@pytest.mark.parametrize("kappa", [0.1, 1.0, 10.0, 200.0])
def test_cardano_solves_cubic(n, kappa):
    m = 2.0 * n + 1.0
    y = cardano_y(n, kappa)
    res = y**3 + m**2 * kappa * y - m**4 / 2.0
    assert abs(res) < 1e-12 * m**4


@pytest.mark.parametrize("n", [0, 2, 7, 40])
@pytest.mark.parametrize("kappa", [0.5, 5.0, 50.0])
def test_branches_solve_quartic(n, kappa):
    m = 2.0 * n + 1.0
    br = quartic_branches(n, kappa)
    for lam in (br.lam_r, br.lam_i_plus, br.lam_i_minus, br.discarded_root):
        res = lam**4 - 2.0 * m**2 * lam - m**2 * kappa
        assert abs(res) < 1e-9 * (abs(lam) ** 4 + m**2 * kappa)


@pytest.mark.parametrize("n", [0, 1, 5, 30])
@pytest.mark.parametrize("kappa", [0.5, 10.0, 80.0])
def test_vieta_invariants(n, kappa):
    m = 2.0 * n + 1.0
    br = quartic_branches(n, kappa)
    trace = br.lam_r + br.discarded_root + 2.0 * br.lam_i_plus.real
    prod = br.lam_r * br.discarded_root * abs(br.lam_i_plus) ** 2
    scale = abs(br.discarded_root) + abs(br.lam_i_plus)
    assert abs(trace) < 1e-11 * scale
    assert prod == pytest.approx(-m**2 * kappa, rel=1e-9)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
@pytest.mark.parametrize("kappa", [0.5, 5.0, 50.0])
def test_branches_match_companion_roots(n, kappa):
    m = 2.0 * n + 1.0
    ref = np.sort_complex(np.roots([1.0, 0.0, 0.0, -2.0 * m**2, -m**2 * kappa]))
    br = quartic_branches(n, kappa)
    ours = np.sort_complex(np.array(
        [br.lam_r, br.discarded_root, br.lam_i_plus, br.lam_i_minus]))
    assert np.max(np.abs(ours - ref)) < 1e-9 * np.max(np.abs(ref))


def test_branch_structure():
    br = quartic_branches(0, 10.0)
    assert len(br.retained()) == 3
    assert br.discarded_root > 0
    assert -10.0 / 2.0 < br.lam_r < 0.0
    assert br.lam_i_minus == br.lam_i_plus.conjugate()
    assert br.lam_r == pytest.approx(LAM0_R, rel=1e-9)
    assert br.lam_i_plus.real == pytest.approx(LAM0_I.real, rel=1e-8)
    assert br.lam_i_plus.imag == pytest.approx(LAM0_I.imag, rel=1e-8)


def test_growth_bound_reference():
    assert growth_bound(10.0) == pytest.approx(S_K10, rel=1e-10)


def test_growth_bound_monotone_here():
    vals = [growth_bound(k) for k in (1.0, 4.0, 10.0, 25.0)]
    assert all(v < 0 for v in vals)
    assert vals == sorted(vals)


def test_real_branch_stays_in_gap():
    # lam_n^r lives in (-kappa/2, 0) and creeps toward -kappa/2 as n grows
    kappa = 10.0
    reals = [quartic_branches(n, kappa).lam_r for n in (0, 1, 5, 20, 100)]
    assert all(-kappa / 2.0 < r < 0.0 for r in reals)
    assert reals == sorted(reals, reverse=True)


def test_spectrum_exact_layout():
    res = spectrum_exact(10.0, 6)
    assert res.method_tag == "exact"
    assert len(res.eigenvalues) == 3 * 7
    assert len(res.tags) == 3 * 7
    assert res.essential_ray_end == pytest.approx(-5.0)
    assert res.spectral_bound == pytest.approx(S_K10, rel=1e-10)
    re = res.eigenvalues.real
    assert np.all(np.diff(re) <= 1e-12)
    assert res.tags[0] == "imag_plus:0" and res.tags[1] == "imag_minus:0"
    kinds = {t.split(":")[0] for t in res.tags}
    assert kinds == {"real", "imag_plus", "imag_minus"}
    assert np.all(res.boundary_masses == 0.0)


def test_nonreal_branch_argument_approaches_two_thirds_pi():
    target = 2.0 * np.pi / 3.0
    devs = [abs(np.angle(quartic_branches(n, 2.0).lam_i_plus) - target)
            for n in (1, 10, 100, 1000)]
    assert devs == sorted(devs, reverse=True)
    assert devs[-1] < 5e-3  # convergence is only O(n^{-2/3})


def test_asymptotic_forms_improve_with_n():
    kappa = 2.0
    rel_mod, rel_r = [], []
    for n in (5, 20, 80):
        br = quartic_branches(n, kappa)
        asym = asymptotic_branches(n, kappa)
        rel_mod.append(abs(abs(br.lam_i_plus) - asym.modulus_asym) / abs(br.lam_i_plus))
        rel_r.append(abs(br.lam_r - asym.lam_r_asym) / abs(br.lam_r))
        assert asym.arg_asym == pytest.approx(np.pi - asym.theta_asym)
    assert rel_mod == sorted(rel_mod, reverse=True)
    assert rel_r == sorted(rel_r, reverse=True)
    assert rel_mod[-1] < 1e-3 and rel_r[-1] < 1e-3


def test_kappa_sweep_rows():
    rows = kappa_sweep([1.0, 10.0], n_count=3)
    assert len(rows) == 2
    for row in rows:
        assert len(row.branches) == 3
        assert row.omega0 == row.s_bound
        assert row.y0 == row.branches[0].y_n
    assert rows[1].s_bound == pytest.approx(S_K10, rel=1e-10)


def test_kappa_sweep_validation():
    with pytest.raises(ValidationError):
        kappa_sweep([])
    with pytest.raises(ValidationError):
        kappa_sweep([2.0, 1.0])
    with pytest.raises(ValidationError):
        kappa_sweep([1.0, -2.0])
    with pytest.raises(ValidationError):
        kappa_sweep([1.0], n_count=0)


def test_branch_input_validation():
    with pytest.raises(ValidationError):
        quartic_branches(-1, 1.0)
    with pytest.raises(ValidationError):
        quartic_branches(1.5, 1.0)
    with pytest.raises(ValidationError):
        quartic_branches(0, 0.0)
    with pytest.raises(ValidationError):
        cardano_y(0, -3.0)
    with pytest.raises(ValidationError):
        spectrum_exact(-1.0, 3)
    with pytest.raises(ValidationError):
        spectrum_exact(10.0, -1)
