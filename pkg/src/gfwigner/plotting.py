"""Figure rendering and gnuplot-style data files.

Figures are written with the non-interactive Agg backend; every plot is
accompanied by plain text data so nothing depends on the images.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def write_dat(path: Path, xs: Sequence[float], ys: Sequence[float], header: str = "") -> Path:
    """Two whitespace-separated columns, optional '#' header line."""
    lines = [f"# {header}"] if header else []
    lines += [f"{x!r} {float(y)!r}" for x, y in zip(xs, ys)]
    path.write_text("\n".join(lines) + "\n")
    return path


def plot_decay(ns, ratios, devs, fit, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.errorbar(ns, ratios, yerr=devs, fmt="o", capsize=3, label="mean ratio")
    if fit is not None:
        xs = np.linspace(min(ns), max(ns), 100)
        ax.plot(xs, np.exp(fit.intercept + fit.slope * xs), "-", label=f"fit, slope {fit.slope:.3f}")
    ax.set_xlabel("qubits n")
    ax.set_ylabel("max interference x d")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_entropy(ns, entropies, devs, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.errorbar(ns, entropies, yerr=devs, fmt="s", capsize=3)
    ax.set_ylim(0, 1.05)
    ax.set_xlabel("qubits n")
    ax.set_ylabel("normalised entropy")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_table(values: np.ndarray, path: Path, title: str = "", labels: Sequence[str] | None = None) -> Path:
    """Heatmap of a d x d table, rows = q, columns = p (p drawn upward)."""
    v = np.asarray(values, dtype=float)
    lim = float(np.max(np.abs(v))) or 1.0
    d = v.shape[0]
    size = 3 + min(d, 32) * 0.15
    fig, ax = plt.subplots(figsize=(size + 1, size))
    im = ax.imshow(v.T, origin="lower", cmap="RdBu_r", vmin=-lim, vmax=lim)
    fig.colorbar(im, ax=ax, shrink=0.8)
    if labels is not None and d <= 8:
        ax.set_xticks(range(d), labels, rotation=90)
        ax.set_yticks(range(d), labels)
    ax.set_xlabel("q")
    ax.set_ylabel("p")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
