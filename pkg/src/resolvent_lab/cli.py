"""Command line front end.

One executable, nine subcommands, deterministic CSV output. Every run writes
a single CSV whose first comment line records the resolved configuration, so
a rerun with the same flags reproduces the file byte for byte. `--svg`
additionally renders a figure next to the CSV; the figures have no numeric
authority. Exit codes: 0 success, 1 validation failure, 2 numerical failure,
3 verification-suite failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import verify as verify_mod
from .airy import (AiryOperatorSpec, LogP, MonomialP, airy_asymptotic_norm,
                   airy_norm_kernel, airy_norm_kernel_diagnostics,
                   airy_norm_matrix_diagnostics)
from .coeffs import LogBracketPower, Monomial, Scaled, parse_descriptor
from .errors import NumericsError, ValidationError
from .generator import build_G, generator_resolvent_norm
from .generator import spectrum as discrete_spectrum
from .grids import Grid1D, Space
from .oscillator import growth_bound, kappa_sweep, quartic_branches, spectrum_exact
from .quadratic import default_fourier_grid, level_curve, pencil_norm
from .semigroup import evolve, fit_decay_rate, mode_state, random_smooth_state

# config-file keys and their types; flags override config, config overrides
# the per-subcommand defaults
_CONFIG_KEYS = {
    "c_max": float,
    "c_tol": float,
    "dt": float,
    "h_xi": float,
    "half_width": float,
    "n_points": int,
    "output_dir": str,
    "seed": int,
    "t_end": float,
    "window_fraction": float,
}


def _load_config(path):
    if path is None:
        return {}
    if not os.path.isfile(path):
        raise ValidationError(f"config file not found: {path}")
    cfg = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{lineno}: expected key = value, got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _CONFIG_KEYS:
                raise ValidationError(
                    f"{path}:{lineno}: unknown config key {key!r}; valid keys: "
                    + ", ".join(sorted(_CONFIG_KEYS)))
            try:
                cfg[key] = _CONFIG_KEYS[key](value)
            except ValueError:
                raise ValidationError(
                    f"{path}:{lineno}: bad value {value!r} for {key} "
                    f"(expected {_CONFIG_KEYS[key].__name__})") from None
    return cfg


def _pick(flag_value, cfg, key, default):
    if flag_value is not None:
        return flag_value
    return cfg.get(key, default)


def _fmt(x) -> str:
    # 12 significant digits, locale-independent; canonical cell format
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def _write_csv(path, config_line, header, rows, extra_comments=()):
    lines = ["# " + config_line]
    lines.extend("# " + c for c in extra_comments)
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    with open(path, "w", newline="") as f:
        f.write("\n".join(lines) + "\n")
    print(f"wrote {path}")


def _out_path(args, cfg, filename):
    d = _pick(getattr(args, "output_dir", None), cfg, "output_dir", ".")
    os.makedirs(d, exist_ok=True)
    return os.path.join(d, filename)


def _resolve_jobs(args):
    if args.jobs is not None:
        jobs = args.jobs
    else:
        env = os.environ.get("RESOLVENT_LAB_JOBS")
        if env is not None:
            try:
                jobs = int(env)
            except ValueError:
                raise ValidationError(
                    f"RESOLVENT_LAB_JOBS must be an integer, got {env!r}") from None
        else:
            jobs = os.cpu_count() or 1
    if jobs < 1:
        raise ValidationError(f"jobs must be >= 1, got {jobs}")
    return jobs


def _pool_map(fn, items, jobs):
    # results keep the submission order regardless of scheduling, so output
    # is identical for any jobs setting
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(jobs, len(items))) as ex:
        return list(ex.map(fn, items))


def _parse_float_list(text, what):
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValidationError(f"{what} must be a nonempty comma-separated float list")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ValidationError(f"{what}: could not parse {text!r} as floats") from None
    if not all(np.isfinite(vals)):
        raise ValidationError(f"{what} must be finite")
    return vals


def _parse_range(text, what):
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"{what} must look like lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise ValidationError(f"{what}: could not parse {text!r}") from None
    if step <= 0:
        raise ValidationError(f"{what}: step must be positive, got {step:g}")
    if hi < lo:
        raise ValidationError(f"{what}: hi must be >= lo, got {text!r}")
    return np.arange(lo, hi + 0.5 * step, step)


def _positive(value, name):
    if value <= 0:
        raise ValidationError(f"{name} must be positive, got {value:g}")
    return value


def _grid_from(args, cfg, default_L, default_N):
    L = _positive(float(_pick(args.L, cfg, "half_width", default_L)), "half width")
    N = int(_pick(args.N, cfg, "n_points", default_N))
    return Grid1D(L, N)


# ---------------------------------------------------------------------------
# subcommand handlers; each returns the process exit code


def _cmd_spectrum(args, cfg):
    if args.exact:
        if args.kappa is None:
            raise ValidationError("spectrum --exact needs --kappa")
        if args.a is not None or args.q is not None:
            raise ValidationError("spectrum --exact takes --kappa; drop --a/--q")
        kappa = _positive(args.kappa, "kappa")
        nmax = args.nmax if args.nmax is not None else 20
        if nmax < 0:
            raise ValidationError(f"nmax must be >= 0, got {nmax}")
        res = spectrum_exact(kappa, nmax)
        rows = []
        for eig, tag in zip(res.eigenvalues, res.tags):
            branch, n = tag.rsplit(":", 1)
            rows.append((int(n), branch, eig.real, eig.imag))
        config = f"resolvent-lab spectrum exact=true kappa={_fmt(kappa)} nmax={nmax}"
        extra = [f"essential_ray_end={_fmt(res.essential_ray_end)}",
                 f"spectral_bound={_fmt(res.spectral_bound)}"]
        path = _out_path(args, cfg, "spectrum.csv")
        _write_csv(path, config, ("n", "branch", "re", "im"), rows, extra)
    else:
        if args.kappa is not None:
            raise ValidationError("--kappa only applies with --exact")
        if args.a is None or args.q is None:
            raise ValidationError("discrete spectrum needs --a and --q descriptors")
        a = parse_descriptor(args.a)
        q = parse_descriptor(args.q)
        grid = _grid_from(args, cfg, 12.0, 600)
        if args.nmax is not None and args.nmax < 1:
            raise ValidationError(f"nmax must be >= 1, got {args.nmax}")
        seed = int(_pick(args.seed, cfg, "seed", 0))
        sys_ = build_G(a, q, grid)
        res = discrete_spectrum(sys_, n_wanted=args.nmax)
        rows = [(e.real, e.imag, tag) for e, tag in zip(res.eigenvalues, res.tags)]
        config = (f"resolvent-lab spectrum a={a.descriptor()} q={q.descriptor()} "
                  f"half_width={_fmt(grid.half_width)} n_points={grid.n_interior} "
                  f"nmax={args.nmax if args.nmax is not None else 'all'} seed={seed}")
        extra = [
            f"essential_ray_end={_fmt(res.essential_ray_end) if res.essential_ray_end is not None else 'nan'}",
            f"spectral_bound={_fmt(res.spectral_bound)}",
            f"n_dropped_boundary={res.n_dropped_boundary}",
            f"n_dropped_rough={res.n_dropped_rough}",
        ]
        path = _out_path(args, cfg, "spectrum.csv")
        _write_csv(path, config, ("re", "im", "tag"), rows, extra)
    if args.svg:
        from . import _plots
        svg = _out_path(args, cfg, "spectrum.svg")
        title = ("oscillator spectrum, closed form" if args.exact
                 else "discretized generator spectrum")
        _plots.spectrum_figure(res.eigenvalues, res.tags, res.essential_ray_end,
                               svg, title)
        print(f"wrote {svg}")
    return 0


def _cmd_resolvent(args, cfg):
    a = parse_descriptor(args.a)
    q = parse_descriptor(args.q)
    if args.c < 0:
        raise ValidationError(f"c must be >= 0, got {args.c:g}")
    b_vals = sorted(_parse_float_list(args.b_list, "--b-list"))
    if any(b == 0 for b in b_vals):
        raise ValidationError("--b-list entries must be nonzero")
    h_xi = _positive(float(_pick(args.h_xi, cfg, "h_xi", 0.1)), "h_xi")
    space = Space.FOURIER if args.space == "fourier" else Space.X
    xgrid = _grid_from(args, cfg, 12.0, 600) if space is Space.X else None
    jobs = _resolve_jobs(args)

    airy_ref = airy_norm_kernel(AiryOperatorSpec(a, args.c))

    def one(b):
        grid = xgrid if xgrid is not None else default_fourier_grid(abs(b), h_xi)
        norm, smin, bm, _ = pencil_norm(a, q, complex(-args.c, abs(b)),
                                        grid=grid, space=space)
        return (b, norm, smin, bm, 2.0 * abs(b) * norm / airy_ref)

    rows = _pool_map(one, b_vals, jobs)
    config = (f"resolvent-lab resolvent a={a.descriptor()} q={q.descriptor()} "
              f"c={_fmt(args.c)} b_list={','.join(_fmt(b) for b in b_vals)} "
              f"space={args.space} h_xi={_fmt(h_xi)}")
    path = _out_path(args, cfg, "resolvent.csv")
    _write_csv(path, config, ("b", "norm", "sigma_min", "boundary_mass", "ratio"), rows)
    if args.svg:
        from . import _plots
        svg = _out_path(args, cfg, "resolvent.svg")
        _plots.norm_lines_figure(
            [r[0] for r in rows],
            {"pencil resolvent norm": [r[1] for r in rows],
             "|ratio - 1|": [abs(r[4] - 1.0) for r in rows]},
            svg, f"pencil resolvent at c={args.c:g}")
        print(f"wrote {svg}")
    return 0


def _cmd_gresolvent(args, cfg):
    a = parse_descriptor(args.a)
    q = parse_descriptor(args.q)
    if args.c < 0:
        raise ValidationError(f"c must be >= 0, got {args.c:g}")
    b_vals = sorted(_parse_float_list(args.b_list, "--b-list"))
    if any(b == 0 for b in b_vals):
        raise ValidationError("--b-list entries must be nonzero")
    L = _positive(float(_pick(args.L, cfg, "half_width", 10.0)), "half width")
    n_fixed = _pick(args.N, cfg, "n_points", None)
    jobs = _resolve_jobs(args)

    def one(b):
        # spatial oscillation scale of the quasimode is 1/|b|
        N = int(n_fixed) if n_fixed is not None else max(int(round(20 * L * abs(b))) - 1, 200)
        sys_ = build_G(a, q, Grid1D(L, N))
        return (args.c, b, generator_resolvent_norm(sys_, complex(-args.c, b)))

    rows = _pool_map(one, b_vals, jobs)
    config = (f"resolvent-lab gresolvent a={a.descriptor()} q={q.descriptor()} "
              f"c={_fmt(args.c)} b_list={','.join(_fmt(b) for b in b_vals)} "
              f"half_width={_fmt(L)} n_points={'auto' if n_fixed is None else int(n_fixed)}")
    path = _out_path(args, cfg, "gresolvent.csv")
    _write_csv(path, config, ("c", "b", "norm"), rows)
    if args.svg:
        from . import _plots
        svg = _out_path(args, cfg, "gresolvent.svg")
        _plots.norm_lines_figure([r[1] for r in rows],
                                 {"energy-norm resolvent": [r[2] for r in rows]},
                                 svg, f"generator resolvent at c={args.c:g}", logy=False)
        print(f"wrote {svg}")
    return 0


def _cmd_pseudospectrum(args, cfg):
    a = parse_descriptor(args.a)
    q = parse_descriptor(args.q)
    re_vals = _parse_range(args.re, "--re")
    im_vals = _parse_range(args.im, "--im")
    if np.any(re_vals > 0):
        raise ValidationError("--re values must be <= 0 (closed left half-plane)")
    if np.any(im_vals == 0):
        raise ValidationError("--im values must avoid 0 (the scan frame "
                              "degenerates on the real axis)")
    h_xi = _positive(float(_pick(args.h_xi, cfg, "h_xi", 0.1)), "h_xi")
    jobs = _resolve_jobs(args)
    points = [(re, im) for re in re_vals for im in im_vals]

    def one(pt):
        re, im = pt
        grid = default_fourier_grid(abs(im), h_xi)
        norm, smin, bm, _ = pencil_norm(a, q, complex(re, im), grid=grid)
        return (re, im, norm, smin, bm, bool(bm < 1e-6))

    rows = _pool_map(one, points, jobs)
    config = (f"resolvent-lab pseudospectrum a={a.descriptor()} q={q.descriptor()} "
              f"re={args.re} im={args.im} h_xi={_fmt(h_xi)}")
    path = _out_path(args, cfg, "pseudospectrum.csv")
    _write_csv(path, config,
               ("re", "im", "norm", "sigma_min", "boundary_mass", "resolved"), rows)
    if args.svg:
        from . import _plots
        svg = _out_path(args, cfg, "pseudospectrum.svg")
        Z = np.array([r[2] for r in rows]).reshape(len(re_vals), len(im_vals)).T
        _plots.pseudospectrum_figure(re_vals, im_vals, Z, svg,
                                     "pencil resolvent norm over the scan window")
        print(f"wrote {svg}")
    return 0


def _cmd_levelcurve(args, cfg):
    a = parse_descriptor(args.a)
    q = parse_descriptor(args.q)
    eps = _positive(args.eps, "eps")
    b_vals = sorted(_parse_float_list(args.b_list, "--b-list"))
    if any(b == 0 for b in b_vals):
        raise ValidationError("--b-list entries must be nonzero")
    c_max = _positive(float(_pick(args.c_max, cfg, "c_max", 20.0)), "c_max")
    c_tol = _positive(float(_pick(None, cfg, "c_tol", 1e-3)), "c_tol")
    h_xi = _positive(float(_pick(args.h_xi, cfg, "h_xi", 0.1)), "h_xi")
    jobs = _resolve_jobs(args)

    if jobs > 1 and len(b_vals) > 1:
        # per-b bisections are independent; assemble the Phi_b diagnostic after
        parts = _pool_map(
            lambda b: level_curve(a, q, eps, [b], c_max=c_max, c_tol=c_tol, h_xi=h_xi),
            b_vals, jobs)
        samples = [lc.samples[0] for lc in parts]
        phis = [s.phi_b for s in samples]
        phi_dec = bool(all(p2 <= p1 for p1, p2 in zip(phis, phis[1:])))
    else:
        lc = level_curve(a, q, eps, b_vals, c_max=c_max, c_tol=c_tol, h_xi=h_xi)
        samples, phi_dec = lc.samples, lc.phi_decreasing

    rows = [(s.b, s.c_numeric, s.c_closed_form, s.phi_b) for s in samples]
    config = (f"resolvent-lab levelcurve a={a.descriptor()} q={q.descriptor()} "
              f"eps={_fmt(eps)} b_list={','.join(_fmt(b) for b in b_vals)} "
              f"c_max={_fmt(c_max)} c_tol={_fmt(c_tol)} h_xi={_fmt(h_xi)}")
    extra = [f"phi_decreasing={_fmt(phi_dec)}"]
    path = _out_path(args, cfg, "levelcurve.csv")
    _write_csv(path, config, ("b", "c_numeric", "c_closed_form", "phi_b"), rows, extra)
    if args.svg:
        from . import _plots
        svg = _out_path(args, cfg, "levelcurve.svg")
        _plots.levelcurve_figure([r[0] for r in rows], [r[1] for r in rows],
                                 np.array([r[2] for r in rows]), svg,
                                 f"level curve at eps={eps:g}")
        print(f"wrote {svg}")
    return 0


def _cmd_airy_norm(args, cfg):
    a = parse_descriptor(args.a)
    spec = AiryOperatorSpec(a, args.c)
    if args.method == "kernel":
        L = _positive(float(_pick(args.L, cfg, "half_width", 8.0)), "half width")
        N = int(_pick(args.N, cfg, "n_points", 800))
        if N < 8:
            raise ValidationError(f"n_points must be >= 8, got {N}")
        norm, bm = airy_norm_kernel_diagnostics(spec, L, N)
    elif args.method == "matrix":
        grid = _grid_from(args, cfg, 8.0, 400)
        norm, bm = airy_norm_matrix_diagnostics(spec, grid)
    else:  # asymptotic closed form
        if isinstance(a, Monomial):
            family = MonomialP(float(a.exponent))
        elif isinstance(a, LogBracketPower):
            family = LogP(a.p)
        elif isinstance(a, Scaled) and a.factor == 1.0 and isinstance(a.base, Monomial):
            family = MonomialP(float(a.base.exponent))
        else:
            raise ValidationError(
                "asymptotic route covers monomial:<p> and logbracket:<p> families")
        norm, bm = airy_asymptotic_norm(family, args.c), float("nan")
    rows = [(args.method, args.c, norm, bm)]
    config = f"resolvent-lab airy-norm a={a.descriptor()} c={_fmt(args.c)} method={args.method}"
    path = _out_path(args, cfg, "airy_norm.csv")
    _write_csv(path, config, ("method", "c", "norm", "boundary_mass"), rows)
    if args.svg:
        from . import _plots
        svg = _out_path(args, cfg, "airy_norm.svg")
        _plots.norm_lines_figure([args.c], {"resolvent norm": [norm]}, svg,
                                 f"shifted first-order model operator, {args.method} route")
        print(f"wrote {svg}")
    return 0


def _cmd_decay(args, cfg):
    kappa = _positive(args.kappa, "kappa")
    dt = _positive(float(_pick(args.dt, cfg, "dt", 0.01)), "dt")
    t_end = float(_pick(args.t_end, cfg, "t_end", 60.0))
    if t_end <= dt:
        raise ValidationError(f"t_end must exceed dt, got t_end={t_end:g} dt={dt:g}")
    seed = int(_pick(args.seed, cfg, "seed", 0))
    window = float(_pick(None, cfg, "window_fraction", 0.75))
    grid = _grid_from(args, cfg, 10.0, 500)
    u0_spec = args.u0
    mode_n = None
    if u0_spec != "random":
        if not u0_spec.startswith("mode:"):
            raise ValidationError(f"--u0 must be 'random' or 'mode:<n>', got {u0_spec!r}")
        try:
            mode_n = int(u0_spec.split(":", 1)[1])
        except ValueError:
            raise ValidationError(f"bad mode index in {u0_spec!r}") from None
        if mode_n < 0:
            raise ValidationError(f"mode index must be >= 0, got {mode_n}")

    a = Monomial(2)
    q = Scaled(Monomial(2), kappa) if kappa != 1.0 else Monomial(2)
    sys_ = build_G(a, q, grid)
    if mode_n is None:
        u0 = random_smooth_state(sys_, seed=seed)
    else:
        u0 = mode_state(sys_, quartic_branches(mode_n, kappa).lam_i_plus, seed=seed)
    times, norms, _ = evolve(sys_, u0, dt, t_end)
    fit = fit_decay_rate(list(zip(times, norms)), window_fraction=window)

    rows = list(zip(times, norms))
    config = (f"resolvent-lab decay kappa={_fmt(kappa)} dt={_fmt(dt)} t_end={_fmt(t_end)} "
              f"u0={u0_spec} half_width={_fmt(grid.half_width)} "
              f"n_points={grid.n_interior} window_fraction={_fmt(window)} seed={seed}")
    extra = [
        "summary fitted_rate={} prefactor={} fit_residual={}".format(
            _fmt(fit.fitted_rate), _fmt(fit.prefactor), _fmt(fit.fit_residual)),
        f"fit_window={_fmt(fit.fit_window[0])}:{_fmt(fit.fit_window[1])}",
        f"omega0_exact={_fmt(growth_bound(kappa))}",
    ]
    path = _out_path(args, cfg, "decay.csv")
    _write_csv(path, config, ("t", "norm"), rows, extra)
    if args.svg:
        from . import _plots
        svg = _out_path(args, cfg, "decay.svg")
        _plots.decay_figure(times, norms, fit, svg,
                            f"energy-norm decay at kappa={kappa:g}")
        print(f"wrote {svg}")
    return 0


def _cmd_kappa_sweep(args, cfg):
    ks = _parse_float_list(args.kappa_list, "--kappa-list")
    if args.count < 1:
        raise ValidationError(f"count must be >= 1, got {args.count}")
    summaries = kappa_sweep(ks, n_count=args.count)
    rows, extra = [], []
    for row in summaries:
        extra.append(f"kappa={_fmt(row.kappa)}: s_bound={_fmt(row.s_bound)} "
                     f"omega0={_fmt(row.omega0)} y0={_fmt(row.y0)}")
        for n, br in enumerate(row.branches):
            rows.append((row.kappa, n, "real", br.lam_r, 0.0))
            rows.append((row.kappa, n, "imag_plus", br.lam_i_plus.real, br.lam_i_plus.imag))
            rows.append((row.kappa, n, "imag_minus", br.lam_i_minus.real, br.lam_i_minus.imag))
    config = (f"resolvent-lab kappa-sweep kappa_list="
              f"{','.join(_fmt(k) for k in ks)} count={args.count}")
    path = _out_path(args, cfg, "kappa_sweep.csv")
    _write_csv(path, config, ("kappa", "n", "branch", "re", "im"), rows, extra)
    if args.svg:
        from . import _plots
        svg = _out_path(args, cfg, "kappa_sweep.svg")
        _plots.kappa_sweep_figure(summaries, svg, "closed-form branches by damping strength")
        print(f"wrote {svg}")
    return 0


def _cmd_verify(args, cfg):
    if args.suite not in verify_mod.suite_names():
        raise ValidationError(
            f"unknown suite {args.suite!r}; choose from {', '.join(verify_mod.suite_names())}")
    results = verify_mod.run_suite(args.suite)
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.suite:8s} {r.name}: {r.detail}")
    n_fail = sum(1 for r in results if not r.ok)
    print(f"{len(results)} checks, {n_fail} failed")
    rows = [(r.suite, r.name, "pass" if r.ok else "fail") for r in results]
    config = f"resolvent-lab verify suite={args.suite}"
    path = _out_path(args, cfg, "verify.csv")
    _write_csv(path, config, ("suite", "name", "status"), rows)
    return 0 if n_fail == 0 else 3


_DISPATCH = {
    "spectrum": _cmd_spectrum,
    "resolvent": _cmd_resolvent,
    "gresolvent": _cmd_gresolvent,
    "pseudospectrum": _cmd_pseudospectrum,
    "levelcurve": _cmd_levelcurve,
    "airy-norm": _cmd_airy_norm,
    "decay": _cmd_decay,
    "kappa-sweep": _cmd_kappa_sweep,
    "verify": _cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    # route argparse failures through the library's validation error so the
    # process exits 1, not argparse's default 2
    def error(self, message):
        raise ValidationError(message)


def _build_parser():
    top = _Parser(prog="resolvent-lab",
                  description="spectra and resolvent norms for a damped wave "
                              "system with unbounded damping")
    sub = top.add_subparsers(dest="cmd", required=True, metavar="subcommand")

    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value file overriding defaults")
    common.add_argument("--output-dir", help="directory for CSV/SVG output (default .)")
    common.add_argument("--svg", action="store_true", help="render a figure next to the CSV")
    common.add_argument("--jobs", type=int,
                        help="worker threads (default: RESOLVENT_LAB_JOBS or all cores)")
    common.add_argument("--seed", type=int, help="seed for randomized states (default 0)")

    gridf = _Parser(add_help=False)
    gridf.add_argument("--L", type=float, help="grid half width")
    gridf.add_argument("--N", type=int, help="interior grid points")

    p = sub.add_parser("spectrum", parents=[common, gridf],
                       help="closed-form or discretized generator spectrum")
    p.add_argument("--exact", action="store_true", help="closed-form branch catalog")
    p.add_argument("--kappa", type=float, help="potential strength (exact mode)")
    p.add_argument("--a", help="damping descriptor (discrete mode)")
    p.add_argument("--q", help="potential descriptor (discrete mode)")
    p.add_argument("--nmax", type=int, help="branch count (exact) or retained modes (discrete)")

    p = sub.add_parser("resolvent", parents=[common, gridf],
                       help="pencil resolvent norms along a horizontal line")
    p.add_argument("--a", required=True, help="damping descriptor")
    p.add_argument("--q", required=True, help="potential descriptor")
    p.add_argument("--c", type=float, required=True, help="real shift, lam = -c + ib")
    p.add_argument("--b-list", required=True, help="comma-separated b values")
    p.add_argument("--space", choices=("fourier", "x"), default="fourier")
    p.add_argument("--h-xi", type=float, help="frequency-grid spacing (default 0.1)")

    p = sub.add_parser("gresolvent", parents=[common, gridf],
                       help="energy-norm generator resolvent along a horizontal line")
    p.add_argument("--a", default="monomial:2", help="damping descriptor")
    p.add_argument("--q", default="monomial:2", help="potential descriptor")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--b-list", required=True)

    p = sub.add_parser("pseudospectrum", parents=[common],
                       help="pencil norm over a left-half-plane rectangle")
    p.add_argument("--a", default="monomial:2")
    p.add_argument("--q", default="const:0")
    p.add_argument("--re", required=True, help="lo:hi:step, values <= 0")
    p.add_argument("--im", required=True, help="lo:hi:step, values != 0")
    p.add_argument("--h-xi", type=float)

    p = sub.add_parser("levelcurve", parents=[common],
                       help="bisect c so the pencil resolvent norm hits 1/eps")
    p.add_argument("--a", default="monomial:2")
    p.add_argument("--q", default="const:0")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--b-list", required=True)
    p.add_argument("--c-max", type=float)
    p.add_argument("--h-xi", type=float)

    p = sub.add_parser("airy-norm", parents=[common, gridf],
                       help="resolvent norm of the first-order model operator")
    p.add_argument("--a", required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--method", choices=("kernel", "matrix", "asymptotic"),
                   default="kernel")

    p = sub.add_parser("decay", parents=[common, gridf],
                       help="implicit-midpoint semigroup trajectory and decay fit")
    p.add_argument("--kappa", type=float, default=10.0)
    p.add_argument("--dt", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--u0", default="random", help="'random' or 'mode:<n>'")

    p = sub.add_parser("kappa-sweep", parents=[common],
                       help="closed-form branches across damping strengths")
    p.add_argument("--kappa-list", required=True)
    p.add_argument("--count", type=int, default=5)

    p = sub.add_parser("verify", parents=[common],
                       help="run an invariant suite and report per-check results")
    p.add_argument("--suite", default="all")

    return top


# flags whose values may start with '-' (ranges, signed lists); fold the value
# into --flag=value form so argparse does not mistake it for an option
_SIGNED_VALUE_FLAGS = {"--re", "--im", "--b-list", "--kappa-list"}


def _fold_signed_values(argv):
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SIGNED_VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(tok + "=" + argv[i + 1])
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv=None) -> int:
    argv = _fold_signed_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:  # --help
        return 0 if not exc.code else int(exc.code)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = _load_config(args.config)
        return _DISPATCH[args.cmd](args, cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
