"""Tagged recommendation graphs.

A tagged graph is a simple directed graph whose edges carry a set of tags.
Edge ``(c, u)`` exists when user ``c`` favorited some content uploaded by
``u``; its tags are the union of the tag sets of all such contents.
"""

from __future__ import annotations

import hashlib
from collections import defaultdict
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, NamedTuple

import numpy as np

EMPTY_TAGS: frozenset = frozenset()


def normalize_tag(tag: str) -> str:
    return tag.strip().lower()


def normalize_tags(tags: Iterable[str], stop_tags: Iterable[str] = ()) -> frozenset:
    stop = {normalize_tag(t) for t in stop_tags}
    out = set()
    for t in tags:
        t = normalize_tag(t)
        if t and t not in stop:
            out.add(t)
    return frozenset(out)


def make_facet(tags: Iterable[str]) -> tuple[str, ...]:
    """Normalize a facet: lowercase, strip, drop duplicates (first occurrence wins)."""
    facet = []
    for t in tags:
        t = normalize_tag(t)
        if t and t not in facet:
            facet.append(t)
    if not facet:
        raise ValueError("a facet needs at least one non-empty tag")
    return tuple(facet)


class TaggedContent(NamedTuple):
    uploader: str
    content: str
    tags: frozenset


class Recommendation(NamedTuple):
    recommender: str
    content: str


class _Arrays(NamedTuple):
    names: tuple          # node ids, sorted; position = dense integer id
    position: dict        # node id -> dense integer id
    keys: list            # edge keys sorted by (src, dst)
    src: np.ndarray
    dst: np.ndarray


class TaggedGraph:
    """Immutable tagged directed graph ``G = (N, E, T)``.

    ``edges`` maps ``(src, dst)`` to the frozenset of tags on that edge.
    Nodes may be isolated; every edge endpoint is a node.
    """

    __slots__ = ("nodes", "edges", "_arrays")

    def __init__(self, nodes: Iterable[str] = (), edges: Mapping | None = None):
        edges = {} if edges is None else edges
        node_set = set(nodes)
        clean = {}
        for (src, dst), tags in edges.items():
            node_set.add(src)
            node_set.add(dst)
            clean[(src, dst)] = frozenset(tags)
        self.nodes = frozenset(node_set)
        self.edges = clean
        self._arrays = None

    @classmethod
    def from_edges(cls, edges: Mapping) -> "TaggedGraph":
        """Graph whose node set is exactly the endpoints of ``edges``."""
        return cls((), edges)

    def __repr__(self):
        return f"TaggedGraph(nodes={len(self.nodes)}, edges={len(self.edges)})"

    def __eq__(self, other):
        if not isinstance(other, TaggedGraph):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def __hash__(self):
        return hash((self.nodes, frozenset(self.edges)))

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def tags(self, src: str, dst: str) -> frozenset:
        """``T(e)``; empty for absent edges."""
        return self.edges.get((src, dst), EMPTY_TAGS)

    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def vocabulary(self) -> frozenset:
        vocab = set()
        for tags in self.edges.values():
            vocab.update(tags)
        return frozenset(vocab)

    def label_count(self) -> int:
        """``sum_e |T(e)|``."""
        return sum(len(t) for t in self.edges.values())

    def in_degree(self) -> dict:
        deg = dict.fromkeys(self.nodes, 0)
        for _, dst in self.edges:
            deg[dst] += 1
        return deg

    def out_degree(self) -> dict:
        deg = dict.fromkeys(self.nodes, 0)
        for src, _ in self.edges:
            deg[src] += 1
        return deg

    def arrays(self) -> _Arrays:
        """Dense integer view: nodes sorted by id, edges sorted by key."""
        if self._arrays is None:
            names = tuple(sorted(self.nodes))
            position = {n: i for i, n in enumerate(names)}
            keys = sorted(self.edges)
            src = np.fromiter((position[s] for s, _ in keys), dtype=np.int64, count=len(keys))
            dst = np.fromiter((position[d] for _, d in keys), dtype=np.int64, count=len(keys))
            self._arrays = _Arrays(names, position, keys, src, dst)
        return self._arrays

    def fingerprint(self) -> str:
        """SHA-256 over the sorted node list and the byte-stable edge export."""
        h = hashlib.sha256()
        for name in sorted(self.nodes):
            h.update(name.encode("utf-8"))
            h.update(b"\n")
        h.update(b"\x00")
        for line in export_lines(self):
            h.update(line.encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()


def export_lines(G: TaggedGraph) -> list[str]:
    """Edge lines ``src\\tdst\\ttag1,tag2`` sorted by edge key, tags sorted."""
    return [f"{s}\t{d}\t{','.join(sorted(G.edges[(s, d)]))}" for s, d in sorted(G.edges)]


@dataclass
class BuildReport:
    contents: int = 0
    recommendations: int = 0
    duplicate_contents: int = 0
    unknown_content_recs: int = 0
    malformed_lines: int = 0
    nodes: int = 0
    edges: int = 0
    labels: int = 0

    def as_lines(self) -> list[str]:
        return [f"{k}\t{v}" for k, v in self.__dict__.items()]


def build_graph(
    contents: Iterable[TaggedContent],
    recs: Iterable[Recommendation],
    report: BuildReport | None = None,
) -> TaggedGraph:
    """Build the tagged graph from tagged contents and favorite recommendations.

    A content id seen twice keeps its first record. Recommendations of
    unknown content are skipped and counted in ``report``.
    """
    report = BuildReport() if report is None else report
    owner = {}
    nodes = set()
    for c in contents:
        if c.content in owner:
            report.duplicate_contents += 1
            continue
        owner[c.content] = (c.uploader, frozenset(c.tags))
        nodes.add(c.uploader)
        report.contents += 1

    edge_tags = defaultdict(set)
    for r in recs:
        report.recommendations += 1
        nodes.add(r.recommender)
        hit = owner.get(r.content)
        if hit is None:
            report.unknown_content_recs += 1
            continue
        uploader, tags = hit
        edge_tags[(r.recommender, uploader)].update(tags)

    G = TaggedGraph(nodes, {k: frozenset(v) for k, v in edge_tags.items()})
    report.nodes = G.num_nodes
    report.edges = G.num_edges
    report.labels = G.label_count()
    return G


def tag_subgraph(G: TaggedGraph, t: str) -> TaggedGraph:
    """``G(t)``: edges carrying ``t``, each relabeled with ``{t}`` only."""
    t = normalize_tag(t)
    only = frozenset([t])
    return TaggedGraph.from_edges({e: only for e, tags in G.edges.items() if t in tags})


def edge_intersection(G1: TaggedGraph, G2: TaggedGraph) -> TaggedGraph:
    small, big = (G1, G2) if G1.num_edges <= G2.num_edges else (G2, G1)
    return TaggedGraph.from_edges(
        {e: tags & big.edges[e] for e, tags in small.edges.items() if e in big.edges}
    )


def edge_union(G1: TaggedGraph, G2: TaggedGraph) -> TaggedGraph:
    edges = dict(G1.edges)
    for e, tags in G2.edges.items():
        edges[e] = edges[e] | tags if e in edges else tags
    # endpoints only, per the union definition
    return TaggedGraph.from_edges(edges)


def conjunction(G: TaggedGraph, facet: Iterable[str]) -> TaggedGraph:
    """``G(t1 AND ... AND tk)`` as a left fold of edge intersections."""
    facet = make_facet(facet)
    return reduce(edge_intersection, (tag_subgraph(G, t) for t in facet))


def disjunction(G: TaggedGraph, facet: Iterable[str]) -> TaggedGraph:
    """``G(t1 OR ... OR tk)`` as a left fold of edge unions."""
    facet = make_facet(facet)
    return reduce(edge_union, (tag_subgraph(G, t) for t in facet))


def induced_subgraph(G: TaggedGraph, users: Iterable[str]) -> TaggedGraph:
    keep = set(users) & G.nodes
    return TaggedGraph(
        keep, {(s, d): tags for (s, d), tags in G.edges.items() if s in keep and d in keep}
    )


class TagIndex:
    """Inverted index from tag to the edges carrying it.

    Edge and node ids are the dense integer ids of ``G.arrays()``, kept as
    sorted numpy arrays so that facet set algebra is array intersection.
    """

    def __init__(self, G: TaggedGraph):
        self.graph = G
        arr = G.arrays()
        buckets = defaultdict(list)
        for i, key in enumerate(arr.keys):
            for t in G.edges[key]:
                buckets[t].append(i)
        self._edge_ids = {t: np.asarray(ids, dtype=np.int64) for t, ids in buckets.items()}
        self._node_ids = {}
        self._node_sets = {}

    def __contains__(self, t):
        return t in self._edge_ids

    def __len__(self):
        return len(self._edge_ids)

    def vocabulary(self) -> list[str]:
        return sorted(self._edge_ids)

    def edge_ids(self, t: str) -> np.ndarray:
        return self._edge_ids.get(t, np.empty(0, dtype=np.int64))

    def edges(self, t: str) -> list[tuple[str, str]]:
        keys = self.graph.arrays().keys
        return [keys[i] for i in self.edge_ids(t)]

    def edge_count(self, t: str) -> int:
        return len(self.edge_ids(t))

    def node_ids(self, t: str) -> np.ndarray:
        ids = self._node_ids.get(t)
        if ids is None:
            arr = self.graph.arrays()
            e = self.edge_ids(t)
            ids = np.union1d(arr.src[e], arr.dst[e])
            if t in self._edge_ids:
                self._node_ids[t] = ids
        return ids

    def nodes(self, t: str) -> frozenset:
        """``N(G(t))``."""
        nodes = self._node_sets.get(t)
        if nodes is None:
            names = self.graph.arrays().names
            nodes = frozenset(names[i] for i in self.node_ids(t))
            if t in self._edge_ids:
                self._node_sets[t] = nodes
        return nodes

    def usage(self) -> dict:
        """Tag -> number of edges carrying it."""
        return {t: len(ids) for t, ids in self._edge_ids.items()}

    def total_edges(self) -> int:
        return sum(len(ids) for ids in self._edge_ids.values())


def build_index(G: TaggedGraph) -> TagIndex:
    return TagIndex(G)
