"""Residual figure for batch verification runs."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def residual_figure(rows, path: str, precision_bits: int | None = None):
    """Scatter -log2 |lhs - rhs| for each (D, d) pair.

    ``rows`` are (D, d, abs_error, passed) tuples. Exact zeros are drawn at the
    top of the axis with a distinct marker.
    """
    rows = sorted(rows)
    if not rows:
        raise ValueError("nothing to plot")
    cap = 2 * precision_bits if precision_bits else 1000
    ys, markers = [], []
    for _, _, err, _ in rows:
        err = float(err)
        if err == 0 or -math.log2(err) > cap:
            ys.append(cap)
            markers.append("^")
        else:
            ys.append(-math.log2(err))
            markers.append("o")

    fig, ax = plt.subplots(figsize=(max(6, 0.18 * len(rows)), 3.6))
    for i, ((D, d, _, ok), y, mk) in enumerate(zip(rows, ys, markers)):
        ax.scatter(i, y, marker=mk, s=18, color="tab:blue" if ok else "tab:red", zorder=3)
    if precision_bits:
        ax.axhline(precision_bits / 3, color="0.4", lw=0.8, ls="--", label="pass threshold")
        ax.axhline(precision_bits, color="0.7", lw=0.8, ls=":", label="working precision")
        ax.legend(loc="lower right", fontsize=7, frameon=False)
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels([f"{D},{d}" for D, d, _, _ in rows], rotation=90, fontsize=6)
    ax.set_ylabel("-log2 |lhs - rhs|")
    ax.set_xlabel("(D, d)")
    ax.grid(axis="y", lw=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
