"""Static SVG renderers for envelope series and densities.

Figures are batch outputs written next to the delimited data. Rendering is
made byte-deterministic: a fixed hash salt for generated ids and no date
metadata in the SVG header.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_STYLE = {
    "figure.figsize": (4.2, 3.0),
    "figure.dpi": 120,
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.0,
    "svg.hashsalt": "qho",
}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_series(z, values, path, *, ylabel, title, color="C0"):
    """Line plot of a z-series (propagation distance in wavelengths)."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(constrained_layout=True)
        ax.plot(z, values, color=color)
        ax.set_xlabel("propagation distance (wavelengths)")
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        _save(fig, path)


def plot_density(density, path, *, xlabel, title, color="C2"):
    """Histogram bars of an empirical density; one tagged bar per bin."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(constrained_layout=True)
        bars = ax.bar(
            density.midpoints,
            density.probabilities,
            width=density.widths,
            align="center",
            color=color,
            edgecolor="white",
            linewidth=0.3,
        )
        for i, bar in enumerate(bars):
            bar.set_gid(f"density-bin-{i}")
        ax.set_xlabel(xlabel)
        ax.set_ylabel("probability")
        ax.set_title(title)
        _save(fig, path)
