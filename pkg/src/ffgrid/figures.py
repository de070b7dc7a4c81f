"""Matplotlib rendering of color grids, pinned cells, and count tables."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib import patches


def save_grid_figure(grid, path, boxed=(), title=None):
    """Render an integer grid as a colored array with entry labels; boxed
    cells (row, col) get a heavy outline, which is how pin sets are drawn."""
    rows = len(grid)
    cols = len(grid[0])
    fig, ax = plt.subplots(figsize=(max(3.0, cols * 0.45), max(3.0, rows * 0.45)))
    ax.imshow(grid, cmap="tab20", interpolation="nearest")
    show_labels = rows <= 32 and cols <= 32
    if show_labels:
        for i in range(rows):
            for j in range(cols):
                ax.text(j, i, str(grid[i][j]), ha="center", va="center", fontsize=8)
    for i, j in boxed:
        ax.add_patch(
            patches.Rectangle((j - 0.5, i - 0.5), 1.0, 1.0, fill=False, lw=2.0, ec="black")
        )
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_count_figure(ks, values, path, title=None, ylabel=None, hline=None):
    """Line plot of a per-level count or ratio table."""
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    ax.plot(ks, values, marker="o")
    if hline is not None:
        ax.axhline(hline, ls="--", lw=1.0, color="gray")
    ax.set_xlabel("level")
    if ylabel:
        ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
