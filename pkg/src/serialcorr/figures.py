"""Figure rendering for experiment reports.

Figures are written straight to files with the Agg canvas (no interactive
backend), so the report path can render them alongside the delimited output
in headless runs.
"""
from __future__ import annotations

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .asymptotics import gumbel_cdf
from .harness import ExperimentResult

__all__ = ["ecdf_figure", "rejection_figure"]


def ecdf_figure(result: ExperimentResult, path: str) -> None:
    """Empirical distribution functions of the Gumbel-normalized max statistic
    against the limiting curve exp(-exp(-x))."""
    if not result.ecdf:
        raise ValueError("result carries no ECDF samples; run with ecdf=true")
    fig = Figure(figsize=(6.4, 4.2))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    grid = np.linspace(-3.0, 7.0, 400)
    ax.plot(grid, [gumbel_cdf(x) for x in grid], "k-", lw=1.6, label="Gumbel")
    for s_n, sample in sorted(result.ecdf.items()):
        xs = np.asarray(sample)
        ax.step(xs, np.arange(1, xs.size + 1) / xs.size, where="post", lw=1.0,
                label=f"$s_n$={s_n} ({xs.size} reps)")
    ax.set_xlabel("normalized max statistic")
    ax.set_ylabel("distribution function")
    ax.set_title(f"{result.config.model.label()}, n={result.config.n}")
    ax.legend(loc="lower right", fontsize=8)
    ax.set_xlim(grid[0], grid[-1])
    fig.tight_layout()
    fig.savefig(path, dpi=150)


def rejection_figure(result: ExperimentResult, path: str) -> None:
    """Empirical rejection rates with +/-3 SE whiskers against nominal levels."""
    levels = result.config.levels
    s_list = result.config.s_n_list
    fig = Figure(figsize=(6.4, 4.2))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    width = 0.8 / max(1, len(s_list))
    base = np.arange(len(levels))
    for j, s_n in enumerate(s_list):
        row = {c.level: c for c in result.cells if c.s_n == s_n}
        rates = np.array([row[a].rate for a in levels])
        errs = 3.0 * np.array([row[a].se for a in levels])
        ax.bar(base + j * width, 100 * rates, width=width * 0.9,
               yerr=100 * errs, capsize=2, label=f"$s_n$={s_n}")
    for i, a in enumerate(levels):
        lo, hi = i - 0.1, i + 0.8
        ax.plot([lo, hi], [100 * a, 100 * a], "k--", lw=0.8)
    ax.set_xticks(base + 0.4 - width / 2)
    ax.set_xticklabels([f"{100 * a:g}%" for a in levels])
    ax.set_xlabel("nominal level")
    ax.set_ylabel("empirical rejection (%)")
    ax.set_title(f"{result.config.model.label()}, {result.config.test}, n={result.config.n}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
