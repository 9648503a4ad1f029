"""SVG rendering helpers for the command line front end.

CSV is the canonical output; these figures are a convenience view with no
numeric authority. Everything is rendered through the Agg backend so the CLI
works headless, and the SVG output carries no timestamps or per-run hashes.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

plt.rcParams["svg.hashsalt"] = "resolvent-lab"

_BRANCH_STYLE = {
    "real": dict(marker="x", color="tab:red", label="real branch"),
    "imag_plus": dict(marker="o", color="tab:blue", label="oscillatory (+)"),
    "imag_minus": dict(marker="o", color="tab:cyan", label="oscillatory (-)"),
    "ok": dict(marker="o", color="tab:blue", label="eigenvalue"),
    "essential_cluster": dict(marker=".", color="0.6", label="essential-ray cluster"),
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _tag_class(tag: str) -> str:
    return tag.split(":")[0]


def spectrum_figure(eigenvalues, tags, ray_end, path, title):
    """Eigenvalue markers over the essential ray on the real axis."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    eigs = np.asarray(eigenvalues, dtype=complex)
    seen = set()
    for cls in dict.fromkeys(_tag_class(t) for t in tags):
        style = _BRANCH_STYLE.get(cls, dict(marker="o", color="0.3", label=cls))
        sel = np.array([_tag_class(t) == cls for t in tags])
        label = style["label"] if cls not in seen else None
        seen.add(cls)
        ax.plot(eigs[sel].real, eigs[sel].imag, linestyle="none",
                markersize=5, label=label,
                marker=style["marker"], color=style["color"])
    if ray_end is not None:
        left = min(float(eigs.real.min()) if eigs.size else ray_end, ray_end) - 1.0
        ax.plot([left, ray_end], [0.0, 0.0], color="k", linewidth=2.5,
                solid_capstyle="butt", label="essential ray")
    ax.axhline(0.0, color="0.85", linewidth=0.6, zorder=0)
    ax.axvline(0.0, color="0.85", linewidth=0.6, zorder=0)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    _save(fig, path)


def norm_lines_figure(b_vals, series, path, title, logy=True):
    """Norm-vs-b lines; series is {label: values}."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, vals in series.items():
        ax.plot(b_vals, vals, marker="o", label=label)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel("b")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    _save(fig, path)


def pseudospectrum_figure(re_vals, im_vals, norms, path, title):
    """log10 resolvent norm over the sampled rectangle."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    Z = np.log10(np.asarray(norms, dtype=float)).reshape(len(im_vals), len(re_vals))
    pc = ax.pcolormesh(re_vals, im_vals, Z, shading="nearest", cmap="viridis")
    cs = ax.contour(re_vals, im_vals, Z, colors="w", linewidths=0.6,
                    levels=np.arange(np.floor(Z.min()), np.ceil(Z.max()) + 1))
    ax.clabel(cs, fontsize=7, fmt="%d")
    fig.colorbar(pc, ax=ax, label="log10 resolvent norm")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title)
    _save(fig, path)


def levelcurve_figure(b_vals, c_numeric, c_closed, path, title):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(b_vals, c_numeric, marker="o", label="bisection")
    finite = np.isfinite(c_closed)
    if finite.any():
        ax.plot(np.asarray(b_vals)[finite], np.asarray(c_closed)[finite],
                linestyle="--", marker=".", label="closed form")
    ax.set_xlabel("b")
    ax.set_ylabel("c_b")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    _save(fig, path)


def decay_figure(times, norms, fit, path, title):
    """Semilogy trajectory with the fitted exponential over its window."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.semilogy(times, norms, color="tab:blue", linewidth=1.0, label="energy norm")
    t0, t1 = fit.fit_window
    tw = np.linspace(t0, t1, 50)
    ax.semilogy(tw, fit.prefactor * np.exp(fit.fitted_rate * tw), "r--",
                label=f"fit rate {fit.fitted_rate:.5f}")
    ax.set_xlabel("t")
    ax.set_ylabel("norm")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    _save(fig, path)


def kappa_sweep_figure(summaries, path, title):
    """Branch triples in the complex plane, one color per damping strength."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    cmap = plt.get_cmap("viridis")
    nk = max(len(summaries) - 1, 1)
    for i, row in enumerate(summaries):
        color = cmap(i / nk)
        pts = []
        for br in row.branches:
            pts.extend([complex(br.lam_r), br.lam_i_plus, br.lam_i_minus])
        pts = np.array(pts)
        ax.plot(pts.real, pts.imag, linestyle="none", marker="o", markersize=4,
                color=color, label=f"kappa={row.kappa:g}")
    ax.axhline(0.0, color="0.85", linewidth=0.6, zorder=0)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=7)
    _save(fig, path)
