"""Faceted PageRank over tagged recommendation graphs."""

__version__ = "0.1.0"

from .centrality import PageRankParams, Ranking, pagerank, prune_dangling, rank_of
from .facets import (
    ALGORITHMS,
    FacetRanker,
    FacetRankRequest,
    FacetRankResult,
    e_intersection_rank,
    e_union_n_intersection_rank,
    pr_product_rank,
    r_sum_rank,
    single_rank,
    tau_n_intersection_rank,
)
from .graph import (
    Recommendation,
    TaggedContent,
    TaggedGraph,
    TagIndex,
    build_graph,
    build_index,
    conjunction,
    disjunction,
    edge_intersection,
    edge_union,
    induced_subgraph,
    tag_subgraph,
)
from .similarity import ksim, osim
from .store import RankStore, build_store, load_store, save_store, top

__all__ = [
    "ALGORITHMS", "FacetRankRequest", "FacetRankResult", "FacetRanker", "PageRankParams",
    "RankStore", "Ranking", "Recommendation", "TagIndex", "TaggedContent", "TaggedGraph",
    "build_graph", "build_index", "build_store", "conjunction", "disjunction",
    "e_intersection_rank", "e_union_n_intersection_rank", "edge_intersection", "edge_union",
    "induced_subgraph", "ksim", "load_store", "osim", "pagerank", "pr_product_rank",
    "prune_dangling", "r_sum_rank", "rank_of", "save_store", "single_rank", "tag_subgraph",
    "tau_n_intersection_rank", "top",
]
