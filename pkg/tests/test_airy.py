"""First-order model operator: kernel route, matrix route, asymptotics."""

import numpy as np
import pytest

from resolvent_lab.airy import (AiryOperatorSpec, LogP, MonomialP,
                                airy_asymptotic_norm, airy_norm_kernel,
                                airy_norm_kernel_diagnostics, airy_norm_matrix,
                                build_airy_matrix, resolvent_kernel)
from resolvent_lab.coeffs import BracketPower, Monomial, parse_descriptor
from resolvent_lab.errors import CapabilityError, ValidationError
from resolvent_lab.grids import Grid1D

# frozen high-precision evaluations of the closed-form large-shift formulas
ASYM_MONOMIAL2_C4 = 38020.6392352155
ASYM_LOGP_QUARTER_C1 = 8.529993222e12


def test_kernel_diagonal_and_causality():
    spec = AiryOperatorSpec(Monomial(2), 0.5)
    assert resolvent_kernel(spec, 1.0, 1.0) == pytest.approx(1.0)
    assert resolvent_kernel(spec, 1.0, 0.5) == 0.0
    # x < t: exp(integral of (c - a))
    val = resolvent_kernel(spec, 0.0, 1.0)
    assert val == pytest.approx(np.exp(0.5 - 1.0 / 3.0), rel=1e-12)


def test_kernel_never_overflows_in_the_well():
    spec = AiryOperatorSpec(Monomial(2), 2.0)
    xs = np.linspace(-4.0, 4.0, 200)
    K = resolvent_kernel(spec, xs[:, None], xs[None, :])
    assert np.all(np.isfinite(K))


def test_two_route_agreement():
    for c in (0.0, 2.0):
        spec = AiryOperatorSpec(Monomial(2), c)
        kn = airy_norm_kernel(spec, 8.0, 800)
        mn = airy_norm_matrix(spec, Grid1D(8.0, 400))
        assert abs(kn - mn) / mn < 1e-3


def test_adjoint_symmetry():
    spec = AiryOperatorSpec(Monomial(2), 1.0)
    n = airy_norm_matrix(spec, Grid1D(8.0, 400), adjoint=False)
    na = airy_norm_matrix(spec, Grid1D(8.0, 400), adjoint=True)
    assert abs(n - na) / n < 1e-6


def test_matrix_route_is_fourier_side():
    # monomial damping becomes a power of the positive Laplacian plus -i xi
    spec = AiryOperatorSpec(Monomial(2), 0.0)
    g = Grid1D(4.0, 50)
    M = build_airy_matrix(spec, g).matrix
    assert np.allclose(np.diag(M).imag, -g.nodes)


def test_asymptotic_frozen_values():
    assert airy_asymptotic_norm(MonomialP(2.0), 4.0) == pytest.approx(
        ASYM_MONOMIAL2_C4, rel=1e-10)
    assert airy_asymptotic_norm(LogP(0.25), 1.0) == pytest.approx(
        ASYM_LOGP_QUARTER_C1, rel=1e-6)


def test_asymptotic_trend_toward_formula():
    # log-ratio of computed to formula tends to 1 from above as c grows
    ratios = []
    for c in (2.0, 4.0):
        computed = airy_norm_kernel(AiryOperatorSpec(Monomial(2), c), 10.0, 1000)
        ratios.append(np.log(computed) / np.log(airy_asymptotic_norm(MonomialP(2.0), c)))
    assert ratios[0] > ratios[1] > 1.0


def test_boundary_mass_diagnostic_returned():
    _, bm = airy_norm_kernel_diagnostics(AiryOperatorSpec(Monomial(2), 0.5), 8.0, 400)
    assert bm < 1e-6


def test_validation_errors():
    with pytest.raises(ValidationError):
        airy_norm_matrix(AiryOperatorSpec(Monomial(2), 0.5), Grid1D(8.0, 20))
    with pytest.raises(CapabilityError):
        airy_norm_matrix(AiryOperatorSpec(BracketPower(1.5), 0.5), Grid1D(8.0, 400))
    with pytest.raises(ValidationError):
        airy_asymptotic_norm(MonomialP(2.0), -1.0)
    with pytest.raises(ValidationError):
        MonomialP(0.0)


def test_bracket_family_goes_through_kernel_route():
    a = parse_descriptor("bracket:1.5")
    norm = airy_norm_kernel(AiryOperatorSpec(a, 0.5), 8.0, 400)
    assert np.isfinite(norm) and norm > 0
