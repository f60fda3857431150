"""Figure rendering for the CLI report path.

Curves are written straight to image files (any extension matplotlib
accepts); nothing is ever shown interactively.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .expsum import ExpSum  # noqa: E402


def save_curves(path, xs: Sequence[float], curves: Mapping[str, Sequence[float]],
                xlabel: str = "t", ylabel: str = "value", title: str | None = None) -> None:
    """Render one or more named curves over a common grid to an image file."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for name, ys in curves.items():
        ax.plot(xs, ys, label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(curves) > 1:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_magnitude_plot(path, f: ExpSum, ts: Sequence[float],
                        label: str = "magnitude", title: str | None = None) -> None:
    """Render a magnitude function (an exponential sum) over a t-grid."""
    save_curves(path, ts, {label: [f.eval(t) for t in ts]},
                xlabel="t", ylabel="magnitude", title=title)
