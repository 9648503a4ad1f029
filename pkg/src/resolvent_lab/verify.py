"""Named self-checks behind the `verify` subcommand.

Two suites: `trivial` holds fast structural identities (seconds), `all` adds
the module-level invariant properties at desk scale (a couple of minutes).
Each check returns (ok, detail); the CLI prints one line per check and exits
nonzero if any fails.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import airy as _airy
from . import generator as _gen
from . import oscillator as _osc
from . import quadratic as _quad
from . import semigroup as _semi
from .coeffs import Constant, Monomial, Scaled
from .errors import ValidationError
from .grids import Grid1D, boundary_mass, build_energy_gram, second_derivative


def _a() -> Monomial:
    return Monomial(2)


def _q(kappa: float):
    return Scaled(Monomial(2), kappa) if kappa != 1.0 else Monomial(2)


# ---------------------------------------------------------------- trivial

def check_monomial_values():
    x = np.linspace(-3, 3, 11)
    ok = np.allclose(Monomial(2).eval(x), x**2) and np.allclose(Monomial(4).eval(x), x**4)
    return ok, "monomial:2 and monomial:4 evaluate to x^2, x^4 on samples"


def check_derivative_chain():
    x = np.linspace(-2, 2, 9)
    d = Monomial(4).derivative(1, x)
    ok = np.allclose(d, 4 * x**3)
    return ok, "d/dx x^4 = 4x^3 on samples"


def check_stencil_eigenvector():
    grid = Grid1D(np.pi / 2, 80)
    D2 = second_derivative(grid).matrix
    k = 3
    v = np.sin(k * (grid.nodes + grid.half_width))
    lam = 2.0 * (1.0 - np.cos(k * grid.h)) / grid.h**2
    res = np.linalg.norm(D2 @ v - lam * v) / np.linalg.norm(v)
    return res < 1e-9, f"Dirichlet stencil eigenpair residual {res:.2e}"


def check_gram_spd():
    grid = Grid1D(8.0, 120)
    g = build_energy_gram(_q(10.0), grid)
    sym = np.max(np.abs(g.gram - g.gram.T))
    L = g.cholesky_factor
    rec = np.max(np.abs(L @ L.T - g.gram)) / np.max(np.abs(g.gram))
    ok = sym == 0.0 and rec < 1e-12
    return ok, f"gram symmetric, Cholesky reconstruction {rec:.2e}"


def check_block_structure():
    grid = Grid1D(8.0, 60)
    sys = _gen.build_G(_a(), _q(10.0), grid)
    N = 60
    M = sys.G.matrix
    ok = (np.all(M[:N, :N] == 0.0) and np.array_equal(M[:N, N:], np.eye(N)))
    return ok, "top-left block exactly 0, top-right exactly I"


def check_identity_resolvent():
    grid = Grid1D(8.0, 60)
    sys = _gen.build_G(_a(), _q(10.0), grid)
    sm = _gen._weighted_sigma_min_dense(sys, np.eye(120, dtype=complex))
    return abs(sm - 1.0) < 1e-10, f"conjugated identity sigma_min = {sm:.12f}"


def check_kernel_diagonal_and_causality():
    spec = _airy.AiryOperatorSpec(a=_a(), c=1.0)
    d = _airy.resolvent_kernel(spec, 0.7, 0.7)
    below = _airy.resolvent_kernel(spec, 0.7, 0.3)
    return d == 1.0 and below == 0.0, f"k(x,x)={d}, k(x,t<x)={below}"


def check_cubic_residual_grid():
    worst = 0.0
    for n in range(10):
        for kappa in np.linspace(0.5, 50.0, 10):
            y = _osc.cardano_y(n, float(kappa))
            m2 = (2 * n + 1) ** 2
            res = abs(y**3 + m2 * kappa * y - 0.5 * m2**2) / (0.5 * m2**2)
            worst = max(worst, res)
    return worst < 1e-10, f"worst relative cubic residual {worst:.2e} on 10x10 grid"


def check_quartic_residual():
    worst = 0.0
    for n in (0, 3, 9):
        for kappa in (0.5, 10.0, 50.0):
            br = _osc.quartic_branches(n, kappa)
            m2 = (2 * n + 1) ** 2
            for lam in (br.lam_r, br.lam_i_plus, br.lam_i_minus, br.discarded_root):
                res = abs(lam**4 - 2 * m2 * lam - m2 * kappa) / max(1.0, abs(lam) ** 4)
                worst = max(worst, res)
    return worst < 1e-9, f"worst quartic residual {worst:.2e}"


def check_conjugation_symmetry():
    grid = Grid1D(6.0, 80)
    lam = -0.3 + 2.0j
    T1 = _quad.build_T(_a(), _q(1.0), lam, grid).matrix
    T2 = _quad.build_T(_a(), _q(1.0), np.conj(lam), grid).matrix
    diff = np.max(np.abs(T1.conj() - T2))
    return diff == 0.0, f"T(conj lam) = conj T(lam) entrywise, max diff {diff:.1e}"


def check_quick_conservation():
    sys = _gen.build_G(Constant(0.0), _q(10.0), Grid1D(8.0, 100))
    u0 = _semi.random_smooth_state(sys, seed=1)
    _, norms, _ = _semi.evolve(sys, u0, 0.01, 2.0)
    drift = abs(norms[-1] - norms[0]) / norms[0]
    return drift < 1e-8, f"undamped norm drift {drift:.2e} over 200 steps"


# ------------------------------------------------------------------- all

def check_dissipativity_random():
    grid = Grid1D(10.0, 200)
    sys = _gen.build_G(_a(), _q(10.0), grid)
    rng = np.random.default_rng(0)
    worst = -np.inf
    for _ in range(100):
        u = rng.standard_normal(400) + 1j * rng.standard_normal(400)
        r = _gen.rayleigh_real_part(sys, u) / sys.gram.weighted_norm(u) ** 2
        worst = max(worst, r)
    return worst <= 1e-10, f"max Re<Gu,u>_W/||u||^2 = {worst:.2e} over 100 samples"


def check_gram_vs_direct():
    grid = Grid1D(10.0, 200)
    q = _q(10.0)
    sys = _gen.build_G(_a(), q, grid)
    qv = q.eval(grid.nodes)
    h = grid.h
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(100):
        u = rng.standard_normal(400) + 1j * rng.standard_normal(400)
        u1, u2 = u[:200], u[200:]
        du = np.diff(np.concatenate([[0.0], u1, [0.0]])) / h
        direct = np.sqrt(h * (np.sum(np.abs(du) ** 2) + np.sum(qv * np.abs(u1) ** 2)
                              + np.sum(np.abs(u2) ** 2)))
        g = sys.gram.weighted_norm(u)
        worst = max(worst, abs(g - direct) / direct)
    return worst < 1e-10, f"Gram norm vs direct quadrature, worst rel {worst:.2e}"


def check_resolvent_conj_pair():
    grid = Grid1D(10.0, 200)
    sys = _gen.build_G(_a(), _q(10.0), grid)
    lam = -0.4 + 7.0j
    n1 = _gen.generator_resolvent_norm(sys, lam, method="dense")
    n2 = _gen.generator_resolvent_norm(sys, np.conj(lam), method="dense")
    rel = abs(n1 - n2) / n1
    return rel < 1e-10, f"norm at lam vs conj(lam), rel diff {rel:.2e}"


def check_spectrum_filters():
    sys = _gen.build_G(_a(), _q(10.0), Grid1D(12.0, 400))
    res = _gen.spectrum(sys)
    min_abs_re = min(abs(l.real) for l in res.eigenvalues)
    max_re = max(l.real for l in res.eigenvalues)
    ray = res.essential_ray_end
    bad_ray = [l for l, t in zip(res.eigenvalues, res.tags)
               if t == "ok" and l.real < ray and abs(l.imag) <= 1e-2 * max(1.0, abs(ray))]
    ok = min_abs_re > 1e-6 and max_re <= 1e-8 and not bad_ray
    return ok, (f"min|Re|={min_abs_re:.2e}, max Re={max_re:.2e}, "
                f"untagged near-ray survivors: {len(bad_ray)}")


def check_generator_lower_bound():
    kappa, c, b = 10.0, 0.5, 20.0
    lam = complex(-c, b)
    grid = Grid1D(10.0, 500)
    sys = _gen.build_G(_a(), _q(kappa), grid)
    gn = _gen.generator_resolvent_norm(sys, lam, method="banded")
    tn, *_ = _quad.pencil_norm(_a(), _q(kappa), lam, grid=grid, space=_quad.Space.X)
    ok = gn >= abs(b) * tn * 0.95
    return ok, f"||(G-lam)^-1||={gn:.4f} vs |b|*||T^-1||={abs(b) * tn:.4f}"


def check_mu_bound_and_monotone():
    vals = []
    for mu in (1.0, 2.0, 4.0, 5.0, 8.0, 10.0):
        n, *_ = _quad.pencil_norm(_a(), Constant(0.0), mu,
                                  grid=Grid1D(10.0, 400), space=_quad.Space.X)
        vals.append((mu, n))
    bound_ok = all(n <= mu**-2 * (1 + 1e-9) for mu, n in vals if mu in (1.0, 2.0, 5.0, 10.0))
    mono_ok = all(vals[i][1] > vals[i + 1][1] for i in range(len(vals) - 1))
    return bound_ok and mono_ok, f"||T(mu)^-1|| <= mu^-2 and decreasing: {vals}"


def check_exact_oscillator_norm():
    n, *_ = _quad.pencil_norm(_a(), _q(1.0), 1.0, grid=Grid1D(10.0, 500),
                              space=_quad.Space.X)
    exact = 1.0 / (np.sqrt(3.0) + 1.0)
    rel = abs(n - exact) / exact
    return rel < 1e-3, f"||T(1)^-1|| = {n:.6f} vs 1/(sqrt3+1) = {exact:.6f}, rel {rel:.1e}"


def check_grid_doubling():
    lam = complex(-0.5, 20.0)
    g1 = _quad.default_fourier_grid(20.0, h_xi=0.1)
    g2 = Grid1D(g1.half_width, 2 * g1.n_interior + 1)
    n1, *_ = _quad.pencil_norm(_a(), Constant(0.0), lam, grid=g1)
    n2, *_ = _quad.pencil_norm(_a(), Constant(0.0), lam, grid=g2)
    rel = abs(n1 - n2) / n2
    return rel < 1e-2, f"Fourier norm at h and h/2 differ by {rel:.2e}"


def check_sqrt_graph_bound():
    rep = _quad.verify_graph_inequalities(_a(), _q(1.0), mu_values=(1.0, 4.0),
                                          b_values=(10.0,), grid=Grid1D(10.0, 400))
    ok = all(s <= 1.0 + 1e-8 for s in rep.sqrt_bound.values()) \
        and all(rep.inverse_norm_bound_ok.values()) and rep.ground_state_lower_bound_ok
    return ok, f"sqrt bounds {rep.sqrt_bound}"


def check_airy_two_routes():
    worst = 0.0
    for c in (0.0, 0.5, 1.0, 2.0):
        spec = _airy.AiryOperatorSpec(a=_a(), c=c)
        nk = _airy.airy_norm_kernel(spec, 8.0, 800)
        nm = _airy.airy_norm_matrix(spec)
        worst = max(worst, abs(nk - nm) / nm)
    return worst < 1e-3, f"kernel vs matrix route, worst rel {worst:.2e}"


def check_airy_adjoint():
    worst = 0.0
    for c in (0.5, 2.0):
        spec = _airy.AiryOperatorSpec(a=_a(), c=c)
        n1 = _airy.airy_norm_matrix(spec)
        n2 = _airy.airy_norm_matrix(spec, adjoint=True)
        worst = max(worst, abs(n1 - n2) / n1)
    return worst < 1e-6, f"adjoint symmetry, worst rel {worst:.2e}"


def check_airy_asymptotic_trend():
    ratios = []
    for c in (2.0, 4.0, 6.0):
        spec = _airy.AiryOperatorSpec(a=_a(), c=c)
        num = _airy.airy_norm_kernel(spec, 10.0, 1000)
        den = _airy.airy_asymptotic_norm(_airy.MonomialP(2.0), c)
        ratios.append(np.log(num) / np.log(den))
    mono = all(abs(ratios[i + 1] - 1) < abs(ratios[i] - 1) for i in range(2))
    return mono, f"log-ratio trend toward 1: {['%.4f' % r for r in ratios]}"


def check_companion_match():
    worst = 0.0
    for n in (0, 2, 7):
        for kappa in (0.5, 5.0, 50.0):
            br = _osc.quartic_branches(n, kappa)
            m2 = (2 * n + 1) ** 2
            mine = np.sort_complex(np.array(
                [br.lam_r + 0j, br.lam_i_plus, br.lam_i_minus, br.discarded_root + 0j]))
            ref = np.sort_complex(np.roots([1.0, 0.0, 0.0, -2.0 * m2, -m2 * kappa]))
            worst = max(worst, float(np.max(np.abs(mine - ref)) / np.max(np.abs(ref))))
    return worst < 1e-9, f"Ferrari vs companion matrix, worst rel {worst:.2e}"


def check_admissibility():
    ok = True
    for n in (0, 1, 10):
        for kappa in (0.5, 10.0):
            br = _osc.quartic_branches(n, kappa)
            ok &= br.discarded_root > 0
            ok &= -kappa / 2 < br.lam_r < 0
            ok &= br.lam_i_plus.real < 0
            ok &= br.lam_i_minus == br.lam_i_plus.conjugate()
    return bool(ok), "discarded root positive, retained branches in the left half-plane"


def check_sbound_cross_module():
    worst = 0.0
    for kappa in (1.0, 10.0):
        sys = _gen.build_G(_a(), _q(kappa), Grid1D(12.0, 600))
        disc = _gen.spectrum(sys).spectral_bound
        exact = _osc.growth_bound(kappa)
        worst = max(worst, abs(disc - exact) / abs(exact))
    return worst < 1e-3, f"discrete vs exact spectral bound, worst rel {worst:.2e}"


def check_semigroup_contraction():
    sys = _gen.build_G(_a(), _q(10.0), Grid1D(10.0, 300))
    u0 = _semi.random_smooth_state(sys, seed=0)
    _, norms, _ = _semi.evolve(sys, u0, 0.01, 5.0)
    viol = int(np.sum(norms[1:] > norms[:-1] * (1 + 1e-9)))
    return viol == 0, f"{viol} contraction violations in 500 steps"


def check_dt_order():
    sys = _gen.build_G(_a(), _q(10.0), Grid1D(10.0, 200))
    u0 = _semi.random_smooth_state(sys, seed=2)
    _, nA, _ = _semi.evolve(sys, u0, 0.02, 1.0)
    _, nB, _ = _semi.evolve(sys, u0, 0.01, 1.0)
    _, nC, _ = _semi.evolve(sys, u0, 0.005, 1.0)
    dA, dB = abs(nA[-1] - nC[-1]), abs(nB[-1] - nC[-1])
    return dA / dB > 3.0, f"halving dt shrank the t=1 error by x{dA / dB:.2f}"


def check_decay_rate():
    sys = _gen.build_G(_a(), _q(10.0), Grid1D(10.0, 500))
    fit = _semi.decay_experiment(sys, _semi.random_smooth_state(sys, seed=0), 0.01, 60.0)
    target = _osc.growth_bound(10.0)
    rel = abs(fit.fitted_rate - target) / abs(target)
    ok = rel < 0.1 and fit.fitted_rate >= _gen.spectrum(
        _gen.build_G(_a(), _q(10.0), Grid1D(12.0, 400))).spectral_bound - 0.01
    return ok, f"fitted {fit.fitted_rate:.6f} vs omega0 {target:.6f} (rel {rel:.1e})"


def check_singular_sequence():
    res = {n: _gen.singular_sequence_probe(10.0, -7.0, n).residual for n in (10, 20, 40)}
    dec = res[10] > res[20] > res[40]
    p10 = _gen.singular_sequence_probe(10.0, -7.0, 10)
    p40 = _gen.singular_sequence_probe(10.0, -7.0, 40)
    pred = np.sqrt(p10.rho_n / p40.rho_n)
    ratio = res[10] / res[40]
    within = pred / 2 < ratio < pred * 2
    return dec and within, f"residuals {res}, ratio {ratio:.3f} vs predicted {pred:.3f}"


def check_level_curve_monotone():
    lc = _quad.level_curve(_a(), Constant(0.0), 0.01, (40.0, 80.0))
    cs = [s.c_numeric for s in lc.samples]
    return cs[0] < cs[1], f"c_b at b=40,80: {cs}"


@dataclass
class CheckResult:
    name: str
    suite: str
    ok: bool
    detail: str
    seconds: float


_TRIVIAL = [
    ("coeffs.monomial_values", check_monomial_values),
    ("coeffs.derivative_chain", check_derivative_chain),
    ("grids.stencil_eigenvector", check_stencil_eigenvector),
    ("grids.gram_spd", check_gram_spd),
    ("generator.block_structure", check_block_structure),
    ("generator.identity_resolvent", check_identity_resolvent),
    ("airy.kernel_diagonal_causality", check_kernel_diagonal_and_causality),
    ("oscillator.cubic_residual_grid", check_cubic_residual_grid),
    ("oscillator.quartic_residual", check_quartic_residual),
    ("quadratic.conjugation_symmetry", check_conjugation_symmetry),
    ("semigroup.undamped_conservation", check_quick_conservation),
]

_EXTENDED = [
    ("generator.dissipativity_random", check_dissipativity_random),
    ("generator.gram_vs_direct", check_gram_vs_direct),
    ("generator.resolvent_conj_pair", check_resolvent_conj_pair),
    ("generator.spectrum_filters", check_spectrum_filters),
    ("generator.lower_bound", check_generator_lower_bound),
    ("quadratic.mu_bound_monotone", check_mu_bound_and_monotone),
    ("quadratic.exact_oscillator_norm", check_exact_oscillator_norm),
    ("quadratic.grid_doubling", check_grid_doubling),
    ("quadratic.sqrt_graph_bound", check_sqrt_graph_bound),
    ("airy.two_route_agreement", check_airy_two_routes),
    ("airy.adjoint_symmetry", check_airy_adjoint),
    ("airy.asymptotic_trend", check_airy_asymptotic_trend),
    ("oscillator.companion_match", check_companion_match),
    ("oscillator.admissibility", check_admissibility),
    ("oscillator.sbound_cross_module", check_sbound_cross_module),
    ("semigroup.contraction", check_semigroup_contraction),
    ("semigroup.dt_order", check_dt_order),
    ("semigroup.decay_rate", check_decay_rate),
    ("generator.singular_sequence", check_singular_sequence),
    ("quadratic.level_curve_monotone", check_level_curve_monotone),
]


def suite_names() -> list:
    return ["trivial", "all"]


def run_suite(suite: str) -> list:
    if suite == "trivial":
        items = [(n, f, "trivial") for n, f in _TRIVIAL]
    elif suite == "all":
        items = [(n, f, "trivial") for n, f in _TRIVIAL] \
            + [(n, f, "all") for n, f in _EXTENDED]
    else:
        raise ValidationError(f"unknown suite {suite!r}; valid: trivial, all")
    out = []
    for name, fn, tag in items:
        t0 = time.time()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        out.append(CheckResult(name=name, suite=tag, ok=bool(ok), detail=detail,
                               seconds=time.time() - t0))
    return out
