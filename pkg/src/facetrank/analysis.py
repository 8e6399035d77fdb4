"""Network statistics: log-binned degree and PageRank distributions,
in-neighbor indegree correlation, tags per edge, power-law fits."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .centrality import PageRankParams, pagerank
from .errors import EmptyGraphError, TooFewBinsError
from .graph import TaggedGraph

DEFAULT_BINS_PER_DECADE = 10


@dataclass(frozen=True)
class BinnedDistribution:
    """Log-binned points, bin centers strictly increasing.

    ``density`` is the per-unit-width probability for distributions and the
    bin mean for correlations. ``counts`` holds observations per bin;
    ``zero_count`` the observations at or below zero, which no log bin holds.
    """

    centers: tuple
    density: tuple
    counts: tuple
    zero_count: int = 0
    bins_per_decade: int = DEFAULT_BINS_PER_DECADE
    discrete: bool = True

    def __len__(self):
        return len(self.centers)

    def points(self):
        return list(zip(self.centers, self.density))

    def total(self) -> int:
        return int(sum(self.counts)) + self.zero_count


def _bin_edges(lo, hi, bins_per_decade):
    first = int(np.floor(np.log10(lo) * bins_per_decade))
    last = int(np.floor(np.log10(hi) * bins_per_decade)) + 1
    edges = 10.0 ** (np.arange(first, last + 1) / bins_per_decade)
    # guard against log10 rounding at exact decade boundaries
    while edges[0] > lo:
        first -= 1
        edges = np.concatenate([[10.0 ** (first / bins_per_decade)], edges])
    while edges[-1] <= hi:
        last += 1
        edges = np.concatenate([edges, [10.0 ** (last / bins_per_decade)]])
    return edges


def _assign(x, bins_per_decade):
    """Bin index per positive observation, and the bin edges."""
    edges = _bin_edges(x.min(), x.max(), bins_per_decade)
    return np.searchsorted(edges, x, side="right") - 1, edges


def log_binned(values, bins_per_decade=DEFAULT_BINS_PER_DECADE, discrete=True) -> BinnedDistribution:
    """Log-binned empirical density of ``values``.

    For integer data a bin's width is the number of integers it covers, so
    the density is a probability per integer value. Bin centers are the
    geometric mean of the observations in the bin.
    """
    values = np.asarray(values, dtype=float)
    total = len(values)
    pos = values[values > 0]
    zero = total - len(pos)
    if len(pos) == 0:
        return BinnedDistribution((), (), (), zero, bins_per_decade, discrete)
    idx, edges = _assign(pos, bins_per_decade)
    centers, density, counts = [], [], []
    logs = np.log(pos)
    for b in np.unique(idx):
        sel = idx == b
        lo, hi = edges[b], edges[b + 1]
        width = (np.ceil(hi) - np.ceil(lo)) if discrete else (hi - lo)
        c = int(sel.sum())
        centers.append(float(np.exp(logs[sel].mean())))
        density.append(c / (total * width))
        counts.append(c)
    return BinnedDistribution(tuple(centers), tuple(density), tuple(counts), zero,
                              bins_per_decade, discrete)


def binned_mean(x, y, bins_per_decade=DEFAULT_BINS_PER_DECADE) -> BinnedDistribution:
    """Mean of ``y`` within log bins of ``x``; points with ``x <= 0`` are counted apart."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = x > 0
    zero = int((~keep).sum())
    x, y = x[keep], y[keep]
    if len(x) == 0:
        return BinnedDistribution((), (), (), zero, bins_per_decade)
    idx, _ = _assign(x, bins_per_decade)
    centers, means, counts = [], [], []
    for b in np.unique(idx):
        sel = idx == b
        centers.append(float(np.exp(np.log(x[sel]).mean())))
        means.append(float(y[sel].mean()))
        counts.append(int(sel.sum()))
    return BinnedDistribution(tuple(centers), tuple(means), tuple(counts), zero, bins_per_decade)


def degree_histogram(G: TaggedGraph, direction: str = "in") -> dict:
    """Exact ``degree -> node count``."""
    deg = _degrees(G, direction)
    return dict(sorted(Counter(deg.values()).items()))


def _degrees(G, direction):
    if direction == "in":
        return G.in_degree()
    if direction == "out":
        return G.out_degree()
    raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")


def degree_distribution(G: TaggedGraph, direction: str = "in",
                        bins_per_decade: int = DEFAULT_BINS_PER_DECADE) -> BinnedDistribution:
    if G.num_nodes == 0:
        raise EmptyGraphError("degree distribution of an empty graph")
    deg = _degrees(G, direction)
    return log_binned(list(deg.values()), bins_per_decade, discrete=True)


def neighbor_indegree_correlation(G: TaggedGraph,
                                  bins_per_decade: int = DEFAULT_BINS_PER_DECADE) -> BinnedDistribution:
    """Mean indegree of in-neighbors, averaged within log bins of node indegree.

    Nodes without in-neighbors are left out. A rising curve means
    assortative mixing.
    """
    if G.num_nodes == 0:
        raise EmptyGraphError("correlation of an empty graph")
    arr = G.arrays()
    n = len(arr.names)
    indeg = np.bincount(arr.dst, minlength=n).astype(float)
    nbr_sum = np.bincount(arr.dst, weights=indeg[arr.src], minlength=n)
    has = indeg > 0
    if not has.any():
        return BinnedDistribution((), (), (), 0, bins_per_decade)
    return binned_mean(indeg[has], nbr_sum[has] / indeg[has], bins_per_decade)


def tags_per_edge_histogram(G: TaggedGraph):
    """``({|T(e)|: edge count}, mean)``; the mean is ``None`` for an edgeless graph."""
    hist = dict(sorted(Counter(len(t) for t in G.edges.values()).items()))
    if not G.edges:
        return hist, None
    return hist, G.label_count() / G.num_edges


def pagerank_distribution(G: TaggedGraph, params: PageRankParams = PageRankParams(),
                          bins_per_decade: int = DEFAULT_BINS_PER_DECADE) -> BinnedDistribution:
    c = pagerank(G, params)
    return log_binned(list(c.values()), bins_per_decade, discrete=False)


def fit_power_law(d: BinnedDistribution, xmin: float | None = None, xmax: float | None = None,
                  min_count: int = 1):
    """Least-squares line through the log-log binned points.

    Returns ``(exponent, r_squared)`` with ``exponent = -slope``. Bins with a
    non-positive value, fewer than ``min_count`` observations, or centers
    outside ``[xmin, xmax]`` are ignored.
    """
    x = np.asarray(d.centers, dtype=float)
    y = np.asarray(d.density, dtype=float)
    keep = y > 0
    if d.counts:
        keep &= np.asarray(d.counts) >= min_count
    if xmin is not None:
        keep &= x >= xmin
    if xmax is not None:
        keep &= x <= xmax
    if keep.sum() < 3:
        raise TooFewBinsError(f"power-law fit needs 3 occupied bins, got {int(keep.sum())}")
    lx, ly = np.log10(x[keep]), np.log10(y[keep])
    A = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    ss_res = float((resid ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(-slope), r2


def format_distribution(d: BinnedDistribution) -> list[str]:
    return [f"{c:.12g}\t{v:.12g}" for c, v in zip(d.centers, d.density)]


def format_histogram(hist: dict) -> list[str]:
    return [f"{k}\t{v}" for k, v in hist.items()]
