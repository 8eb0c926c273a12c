"""SVG figures for simulation runs and eps sweeps.

Uses the object-oriented matplotlib API so nothing touches pyplot state.
The H1 curve is drawn solid and the H2 curve dashed; line groups carry the
ids ``mu_h1``, ``mu_h2`` (and ``*_theory``) in the SVG.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

from .walk import ProbabilitySeries

_RC = {
    "svg.hashsalt": "bridgewalk",
    "svg.fonttype": "none",
    "font.size": 11,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def _save(fig: Figure, path: str | Path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})


def plot_series(series: ProbabilitySeries, path: str | Path, title: str = "",
                show_theory: bool = True) -> None:
    with matplotlib.rc_context(_RC):
        fig = Figure(figsize=(6.4, 4.0))
        ax = fig.add_subplot()
        if show_theory and series.mu_h1_theory is not None:
            ax.plot(series.t, series.mu_h1_theory, color="0.6", lw=0.8, ls="-", gid="mu_h1_theory")
            ax.plot(series.t, series.mu_h2_theory, color="0.6", lw=0.8, ls="--", gid="mu_h2_theory")
        ax.plot(series.t, series.mu_h1, color="k", lw=1.4, ls="-", gid="mu_h1", label=r"$\mu_t(H_1)$")
        ax.plot(series.t, series.mu_h2, color="k", lw=1.4, ls="--", gid="mu_h2", label=r"$\mu_t(H_2)$")
        ax.set_xlim(0, series.horizon)
        ax.set_ylim(0.0, 1.0)
        ax.set_xlabel("t")
        ax.set_ylabel("probability")
        if title:
            ax.set_title(title)
        ax.legend(loc="center right", frameon=False)
        fig.tight_layout()
        _save(fig, path)


def plot_sweep(rows: list[dict], path: str | Path) -> None:
    eps = [r["eps"] for r in rows]
    with matplotlib.rc_context(_RC):
        fig = Figure(figsize=(6.4, 4.0))
        ax = fig.add_subplot()
        ax.loglog(eps, [r["max_dev"] for r in rows], "o-", color="k", gid="max_dev",
                  label="max envelope deviation")
        ax.loglog(eps, [r["cos_dev"] for r in rows], "s--", color="k", gid="cos_dev",
                  label=r"$|\cos\theta - \cos\theta_{asym}|$")
        ax.loglog(eps, [r["lambda1_error"] for r in rows], "^:", color="k", gid="lambda1_error",
                  label=r"$|(\lambda_2-1)/\epsilon - \lambda^{(1)}|$")
        ax.set_xlabel(r"$\epsilon$")
        ax.legend(frameon=False)
        fig.tight_layout()
        _save(fig, path)
