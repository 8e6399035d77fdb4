"""Figures for similarity grids: one gray-scale panel per algorithm, darker = more similar."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .facets import LABELS  # noqa: E402

PANEL_WIDTH = 3.2
PANEL_HEIGHT = 2.8


def grid_matrix(grid):
    """``(matrix, xbins, ybins)``; cells without data are NaN."""
    if not grid.cells:
        return np.full((0, 0), np.nan), [], []
    xs = sorted({x for x, _ in grid.cells})
    ys = sorted({y for _, y in grid.cells})
    xbins = list(range(xs[0], xs[-1] + 1))
    ybins = list(range(ys[0], ys[-1] + 1))
    mat = np.full((len(ybins), len(xbins)), np.nan)
    for (x, y) in grid.cells:
        mat[y - ybins[0], x - xbins[0]] = grid.mean(x, y)
    return mat, xbins, ybins


def plot_grids(grids, path, title=""):
    n = max(len(grids), 1)
    fig, axes = plt.subplots(1, n, figsize=(PANEL_WIDTH * n, PANEL_HEIGHT), squeeze=False)
    image = None
    for ax, grid in zip(axes[0], grids):
        mat, xbins, ybins = grid_matrix(grid)
        ax.set_title(LABELS.get(grid.algorithm, grid.algorithm), fontsize=9)
        if mat.size:
            cmap = plt.get_cmap("Greys").copy()
            cmap.set_bad("white")
            image = ax.imshow(np.ma.masked_invalid(mat), origin="lower", cmap=cmap,
                              vmin=0.0, vmax=1.0, aspect="auto")
            ax.set_xticks(range(len(xbins)), [str(2 ** b) for b in xbins], fontsize=7, rotation=45)
            ax.set_yticks(range(len(ybins)), [str(2 ** b) for b in ybins], fontsize=7)
        ax.set_xlabel("reference result size", fontsize=8)
        ax.set_ylabel("top n", fontsize=8)
    if image is not None:
        fig.colorbar(image, ax=list(axes[0]), shrink=0.9)
    if title:
        fig.suptitle(title, fontsize=10)
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
