"""Figures for CLI reports.

Rendering uses the Agg backend with the software tag stripped, so the same
data produce the same PNG bytes.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (5.0, 3.2),
    "savefig.dpi": 120,
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def invariant_levels(estimates, path):
    """Per-level ratios of each estimated invariant."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for est in estimates:
            ax.plot(est.levels_used, [float(v) for v in est.per_level], marker="o", label=est.name)
        ax.set_xlabel("level n")
        ax.set_ylabel("finite-level ratio")
        ax.legend(frameon=False)
        _save(fig, path)


def tvz_gap(rows, path):
    """Brauer-Siegel ratio, prime-count side and their gap per level."""
    with plt.rc_context(STYLE):
        fig, (left, right) = plt.subplots(1, 2, figsize=(7.0, 3.0))
        n = [r["n"] for r in rows]
        left.plot(n, [float(r["bs"]) for r in rows], marker="o", label="log(hR)/g")
        left.plot(n, [float(r["rhs"]) for r in rows], marker="s", label="prime-count side")
        left.set_xlabel("level n")
        left.legend(frameon=False)
        right.semilogy(n, [float(r["gap"]) for r in rows], marker="o", color="k")
        right.set_xlabel("level n")
        right.set_ylabel("gap")
        _save(fig, path)


def beta_chain(values, path, constant=None):
    """beta along a subgroup chain, with the recovered constant if any."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(range(len(values)), [float(v) for v in values], marker="o")
        if constant is not None:
            ax.axhline(float(constant), color="0.5", lw=0.8, ls="--")
        ax.set_xlabel("chain index")
        ax.set_ylabel("beta")
        _save(fig, path)


def suite_summary(results, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 2.2))
        colors = ["tab:green" if r.passed else "tab:red" for r in results]
        ax.bar([str(r.number) for r in results], [1] * len(results), color=colors)
        ax.set_yticks([])
        ax.set_xlabel("check")
        _save(fig, path)
