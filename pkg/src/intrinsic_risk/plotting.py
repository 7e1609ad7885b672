"""Figures for the ``compare`` report.

Two figures are written next to the textual output:

* ``payoffs.png``: per-scenario payoff of the original position and of both
  altered positions;
* ``segment.png``: the acceptance shortfall along the sell-and-reinvest
  segment, with the intrinsic risk marked where it crosses zero.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.dpi": 120,
}

COLORS = {"original": "#1f4e9c", "intrinsic": "#2e8b57", "traditional": "#c98a00"}


def plot_payoffs(report, x, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 3.2))
        n = x.payoff.size
        idx = np.arange(n)
        series = [("original", x.payoff), ("intrinsic", report.altered_intrinsic.payoff)]
        if report.altered_traditional is not None:
            series.append(("traditional", report.altered_traditional.payoff))
        width = 0.8 / len(series)
        for k, (label, values) in enumerate(series):
            ax.bar(idx + (k - (len(series) - 1) / 2) * width, values, width,
                   label=label, color=COLORS[label])
        ax.axhline(0.0, color="0.3", lw=0.6)
        ax.set_xticks(idx)
        ax.set_xlabel("scenario")
        ax.set_ylabel("payoff at maturity")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_segment(report, aset, x, s, path, points: int = 201):
    lam = np.linspace(0.0, 1.0, points)
    target = (x.initial_value / s.initial_price) * s.payoff
    short = [aset.shortfall((1.0 - t) * x.payoff + t * target) for t in lam]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 3.2))
        ax.plot(lam, short, color=COLORS["original"], lw=1.2, label=f"{aset.kind} shortfall")
        ax.axhline(0.0, color="0.3", lw=0.6)
        r = report.intrinsic.value
        ax.axvline(r, color=COLORS["intrinsic"], ls="--", lw=1.0, label=f"intrinsic risk {r:.4g}")
        ax.set_xlabel("fraction sold and reinvested")
        ax.set_ylabel("shortfall (acceptable if <= 0)")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def write_figures(report, aset, x, s, outdir) -> list:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = [outdir / "payoffs.png", outdir / "segment.png"]
    plot_payoffs(report, x, paths[0])
    plot_segment(report, aset, x, s, paths[1])
    return [str(p) for p in paths]
