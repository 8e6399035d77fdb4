"""Seeded synthetic tagged graphs with scale-free indegree.

Every node gets a planted attractiveness ``w_j ~ rank_j ** (-1 / (gamma - 1))``
(static scale-free model); each source draws a Poisson number of distinct
targets with probability proportional to attractiveness, which yields an
indegree tail ``P(k) ~ k ** -gamma``. Optional degree-preserving edge swaps
then add (dis)assortative mixing, and each edge gets a Poisson-sized set of
Zipf-distributed tags.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import ParameterError
from .graph import TaggedGraph


@dataclass(frozen=True)
class GenParams:
    node_count: int = 1000
    mean_outdegree: float = 25.0
    indegree_exponent: float = 2.5
    tag_vocabulary_size: int = 1000
    tags_per_edge_mean: float = 9.26
    tag_popularity_exponent: float = 1.0
    assortativity_bias: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.node_count < 2:
            raise ParameterError("node_count must be at least 2")
        if not 0 < self.mean_outdegree < self.node_count - 1:
            raise ParameterError("mean_outdegree must lie in (0, node_count - 1)")
        if not 2 < self.indegree_exponent < 3:
            raise ParameterError("indegree_exponent must lie in (2, 3)")
        if self.tag_vocabulary_size < 1:
            raise ParameterError("tag_vocabulary_size must be positive; every edge needs a tag")
        if not 0 < self.tags_per_edge_mean <= self.tag_vocabulary_size:
            raise ParameterError("tags_per_edge_mean must lie in (0, tag_vocabulary_size]")
        if self.tag_popularity_exponent < 0:
            raise ParameterError("tag_popularity_exponent must be non-negative")
        if not -1 <= self.assortativity_bias <= 1:
            raise ParameterError("assortativity_bias must lie in [-1, 1]")

    def header(self) -> list[str]:
        return [f"{k}={v}" for k, v in asdict(self).items()]


class _Stream:
    """Pre-drawn categorical samples, refilled in blocks; keeps draws reproducible."""

    def __init__(self, rng, n, p, block):
        self.rng, self.n, self.p, self.block = rng, n, p, block
        self.buf = rng.choice(n, size=block, p=p)
        self.i = 0

    def take(self, k):
        if self.i + k > len(self.buf):
            self.buf = np.concatenate([self.buf[self.i:], self.rng.choice(self.n, size=max(self.block, k), p=self.p)])
            self.i = 0
        out = self.buf[self.i:self.i + k]
        self.i += k
        return out


def _names(prefix, n):
    width = len(str(n - 1))
    return [f"{prefix}{i:0{width}d}" for i in range(n)]


def _draw_edges(rng, p):
    n = p.node_count
    alpha = 1.0 / (p.indegree_exponent - 1.0)
    weight = np.arange(1, n + 1, dtype=float) ** -alpha
    weight = weight[rng.permutation(n)]
    prob = weight / weight.sum()
    outdeg = np.minimum(rng.poisson(p.mean_outdegree, size=n), n - 1)
    stream = _Stream(rng, n, prob, block=int(outdeg.sum() * 1.2) + 64)
    src, dst = [], []
    for s in range(n):
        need = int(outdeg[s])
        chosen = set()
        while len(chosen) < need:
            for t in stream.take(need - len(chosen)).tolist():
                if t != s:
                    chosen.add(t)
        # sorted so the edge order does not depend on set iteration order
        for t in sorted(chosen):
            src.append(s)
            dst.append(t)
    return np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)


def _rewire(rng, src, dst, n, bias):
    """Degree-preserving swaps ``(a->b, c->d) -> (a->d, c->b)``.

    Each attempted swap pairs the higher-indegree source with the
    higher-indegree target (``bias > 0``) or the lower one (``bias < 0``).
    About ``|bias| * |E|`` swaps are attempted.
    """
    m = len(src)
    attempts = int(round(abs(bias) * m))
    if attempts == 0 or m < 2:
        return src, dst
    indeg = np.bincount(dst, minlength=n)
    # small jitter breaks indegree ties without favoring low ids
    key = indeg + rng.random(n) * 0.5
    present = set(zip(src.tolist(), dst.tolist()))
    src, dst = src.copy(), dst.copy()
    picks = rng.integers(0, m, size=(attempts, 2))
    for i, j in picks.tolist():
        if i == j:
            continue
        a, b, c, d = int(src[i]), int(dst[i]), int(src[j]), int(dst[j])
        high_src_first = key[a] >= key[c]
        high_dst_first = key[b] >= key[d]
        aligned = high_src_first == high_dst_first
        if aligned == (bias > 0):
            continue   # already in the preferred arrangement
        if a == d or c == b or (a, d) in present or (c, b) in present:
            continue
        present.discard((a, b))
        present.discard((c, d))
        present.add((a, d))
        present.add((c, b))
        dst[i], dst[j] = d, b
    return src, dst


def _draw_tags(rng, p, m):
    v = p.tag_vocabulary_size
    zipf = np.arange(1, v + 1, dtype=float) ** -p.tag_popularity_exponent
    zipf /= zipf.sum()
    sizes = np.clip(rng.poisson(p.tags_per_edge_mean, size=m), 1, v)
    names = _names("tag", v)
    stream = _Stream(rng, v, zipf, block=int(sizes.sum() * 1.3) + 64)
    out = []
    cache = {}
    for k in sizes.tolist():
        chosen = set()
        while len(chosen) < k:
            chosen.update(stream.take(k - len(chosen)).tolist())
        key = frozenset(chosen)
        tags = cache.get(key)
        if tags is None:
            tags = cache[key] = frozenset(names[i] for i in chosen)
        out.append(tags)
    return out


def generate(p: GenParams) -> TaggedGraph:
    """A synthetic tagged graph fully determined by ``p`` (including ``p.seed``)."""
    rng = np.random.default_rng(p.seed)
    src, dst = _draw_edges(rng, p)
    src, dst = _rewire(rng, src, dst, p.node_count, p.assortativity_bias)
    tags = _draw_tags(rng, p, len(src))
    nodes = _names("u", p.node_count)
    edges = {(nodes[s], nodes[d]): t for s, d, t in zip(src.tolist(), dst.tolist(), tags)}
    return TaggedGraph(nodes, edges)
