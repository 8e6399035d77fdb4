"""Faceted rankings for conjunctive multi-tag queries.

Two reference rankings recompute PageRank on a facet-dependent subgraph
(``e_intersection``, ``e_union_n_intersection``); four online rankings
merge per-tag results precomputed offline (``single``, ``pr_product``,
``r_sum``, ``tau_n_intersection``).

Facets are canonicalized to sorted tag order before any computation, so
every algorithm is invariant to the order of the query tags.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

from .centrality import PageRankParams, Ranking, pagerank, subgraph_pagerank
from .graph import TaggedGraph, TagIndex, build_index, make_facet
from .store import RankStore

ALGORITHMS = (
    "e_intersection",
    "e_union_n_intersection",
    "single",
    "pr_product",
    "r_sum",
    "tau_n_intersection",
)
REFERENCES = ("e_intersection", "e_union_n_intersection")
MERGERS = ("single", "pr_product", "r_sum", "tau_n_intersection")

LABELS = {
    "e_intersection": "E-intersection",
    "e_union_n_intersection": "E-union/N-intersection",
    "single": "Single",
    "pr_product": "PR-product",
    "r_sum": "R-sum",
    "tau_n_intersection": "tau-N-inters",
}

DEFAULT_W = 500


def algorithm_name(name: str) -> str:
    """Canonical algorithm name; accepts ``pr-product``, ``PR_Product`` and the like."""
    key = name.strip().lower().replace("-", "_").replace("/", "_")
    aliases = {"tau_n_inters": "tau_n_intersection", "e_union": "e_union_n_intersection"}
    key = aliases.get(key, key)
    if key not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
    return key


def _canonical(facet: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(make_facet(facet)))


def node_intersection(source, facet) -> frozenset:
    """``N(G(t1)) & ... & N(G(tk))``; ``source`` is a TagIndex or RankStore."""
    sets = sorted((source.nodes(t) for t in facet), key=len)
    return reduce(frozenset.intersection, sets[1:], sets[0])


def _ranking_from_edges(index: TagIndex, edge_ids, params) -> Ranking:
    arr = index.graph.arrays()
    ids, x, _, _ = subgraph_pagerank(arr.src[edge_ids], arr.dst[edge_ids], params)
    return Ranking.from_scores([arr.names[i] for i in ids], x, ids=ids)


def _index(G, index):
    return build_index(G) if index is None else index


def e_intersection_rank(G: TaggedGraph, facet, index: TagIndex | None = None,
                        params: PageRankParams = PageRankParams()) -> Ranking:
    """PageRank ranking of the conjunction graph ``G(t1 AND ... AND tk)``."""
    index = _index(G, index)
    facet = _canonical(facet)
    edges = reduce(lambda a, b: np.intersect1d(a, b, assume_unique=True),
                   (index.edge_ids(t) for t in facet))
    return _ranking_from_edges(index, edges, params)


def e_union_n_intersection_rank(G: TaggedGraph, facet, index: TagIndex | None = None,
                                params: PageRankParams = PageRankParams()) -> Ranking:
    """PageRank of the disjunction graph, kept only on nodes present in every tag subgraph."""
    index = _index(G, index)
    facet = _canonical(facet)
    if any(t not in index for t in facet):
        return Ranking()
    keep = reduce(lambda a, b: np.intersect1d(a, b, assume_unique=True),
                  (index.node_ids(t) for t in facet))
    if len(keep) == 0:
        return Ranking()
    edges = reduce(np.union1d, (index.edge_ids(t) for t in facet))
    arr = index.graph.arrays()
    ids, x, _, _ = subgraph_pagerank(arr.src[edges], arr.dst[edges], params)
    mask = np.isin(ids, keep, assume_unique=True)
    ids, x = ids[mask], x[mask]
    return Ranking.from_scores([arr.names[i] for i in ids], x, ids=ids)


def single_rank(global_centrality: Mapping[str, float], index, facet) -> Ranking:
    """Global ranking filtered to nodes present in every tag subgraph.

    ``index`` is anything with a ``nodes(tag)`` method (TagIndex, RankStore).
    """
    facet = _canonical(facet)
    cand = node_intersection(index, facet)
    return Ranking.from_scores(sorted(cand), [global_centrality[u] for u in sorted(cand)])


def pr_product_rank(store: RankStore, facet) -> Ranking:
    """Rank candidates by the product of their per-tag PageRank values."""
    facet = _canonical(facet)
    entries = [store.entry(t) for t in facet]
    cents = [e.centrality() for e in entries]
    cand = node_intersection(store, facet)
    users, scores = [], []
    for u in sorted(cand):
        score = 1.0
        for c in cents:
            v = c.get(u)
            if v is None:   # truncated away for this tag
                break
            score *= v
        else:
            users.append(u)
            scores.append(score)
    return Ranking.from_scores(users, scores)


def r_sum_rank(store: RankStore, facet) -> Ranking:
    """Rank candidates by the sum of their per-tag rank positions (smaller is better)."""
    facet = _canonical(facet)
    entries = [store.entry(t) for t in facet]
    positions = [e.positions() for e in entries]
    cand = node_intersection(store, facet)
    users, scores = [], []
    for u in sorted(cand):
        total = 0
        for p in positions:
            r = p.get(u)
            if r is None:
                break
            total += r
        else:
            users.append(u)
            scores.append(total)
    return Ranking.from_scores(users, scores, ascending=True)


def tau_n_intersection_rank(G: TaggedGraph, store: RankStore, facet, w: int | None = DEFAULT_W,
                            index: TagIndex | None = None,
                            params: PageRankParams = PageRankParams()) -> Ranking:
    """PageRank of the edge intersection of per-tag graphs cut down to each tag's top ``w``.

    For each tag the subgraph ``G(t)`` is restricted to edges whose two
    endpoints are both among that tag's ``w`` best-ranked users. ``w=None``
    means no cut.
    """
    index = _index(G, index)
    facet = _canonical(facet)
    arr = G.arrays()
    per_tag = []
    for t in facet:
        entry = store.entry(t)
        e = index.edge_ids(t)
        winners = entry.users if w is None else entry.users[:w]
        if len(winners) < len(entry.nodes):
            keep = np.zeros(len(arr.names), dtype=bool)
            keep[[arr.position[u] for u in winners]] = True
            e = e[keep[arr.src[e]] & keep[arr.dst[e]]]
        per_tag.append(e)
    edges = reduce(lambda a, b: np.intersect1d(a, b, assume_unique=True), per_tag)
    return _ranking_from_edges(index, edges, params)


@dataclass(frozen=True)
class FacetRankRequest:
    facet: tuple
    algorithm: str
    top_n: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "facet", make_facet(self.facet))
        object.__setattr__(self, "algorithm", algorithm_name(self.algorithm))
        if self.top_n is not None and self.top_n < 1:
            raise ValueError("top_n must be positive")


@dataclass
class FacetRankResult:
    ranking: Ranking
    candidate_set_size: int
    provenance: dict = field(default_factory=dict)


class FacetRanker:
    """Answers facet queries over one graph with its inverted index and rank store.

    The global PageRank (for ``single``) is computed on first use.
    """

    def __init__(self, G: TaggedGraph, store: RankStore, index: TagIndex | None = None,
                 params: PageRankParams | None = None, w: int | None = DEFAULT_W,
                 global_centrality: Mapping[str, float] | None = None):
        self.graph = G
        self.store = store
        self.index = _index(G, index)
        self.params = store.params if params is None else params
        self.w = w
        self._global = global_centrality

    @property
    def global_centrality(self):
        if self._global is None:
            self._global = pagerank(self.graph, self.params)
        return self._global

    def rank(self, facet, algorithm: str) -> Ranking:
        algorithm = algorithm_name(algorithm)
        facet = make_facet(facet)
        if any(t not in self.index for t in facet):
            # a tag absent from the graph matches no node
            return Ranking()
        if algorithm == "e_intersection":
            return e_intersection_rank(self.graph, facet, self.index, self.params)
        if algorithm == "e_union_n_intersection":
            return e_union_n_intersection_rank(self.graph, facet, self.index, self.params)
        if algorithm == "single":
            return single_rank(self.global_centrality, self.index, facet)
        if algorithm == "pr_product":
            return pr_product_rank(self.store, facet)
        if algorithm == "r_sum":
            return r_sum_rank(self.store, facet)
        return tau_n_intersection_rank(self.graph, self.store, facet, self.w, self.index, self.params)

    def answer(self, request: FacetRankRequest) -> FacetRankResult:
        ranking = self.rank(request.facet, request.algorithm)
        if request.algorithm in ("e_intersection", "tau_n_intersection"):
            cand = len(ranking)
        else:
            cand = len(node_intersection(self.index, _canonical(request.facet)))
        prov = {"algorithm": request.algorithm, "facet": ",".join(request.facet),
                "damping": self.params.damping, "epsilon": self.params.epsilon}
        if request.algorithm == "tau_n_intersection":
            prov["w"] = "unlimited" if self.w is None else self.w
        if request.algorithm in ("pr_product", "r_sum", "tau_n_intersection"):
            prov["store_w"] = "unlimited" if self.store.w is None else self.store.w
        return FacetRankResult(ranking.truncate(request.top_n), cand, prov)

