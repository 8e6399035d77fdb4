"""Offline per-tag rankings: build, truncate, persist, load."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .centrality import PageRankParams, Ranking, subgraph_pagerank
from .errors import (
    CorruptStoreError,
    FingerprintMismatchError,
    MissingTagError,
    StoreNotFoundError,
    StoreVersionError,
)
from .graph import TaggedGraph, TagIndex, build_index

FORMAT_VERSION = 1
MAGIC = "#facetrank-store"


@dataclass
class TagEntry:
    """One tag's ranking, truncated to ``w``, plus its full node set."""

    users: tuple
    centralities: tuple
    nodes: frozenset
    num_edges: int
    converged: bool = True

    def __post_init__(self):
        self._centrality = None
        self._positions = None

    def __eq__(self, other):
        if not isinstance(other, TagEntry):
            return NotImplemented
        return (self.users, self.centralities, self.nodes, self.num_edges, self.converged) == (
            other.users, other.centralities, other.nodes, other.num_edges, other.converged)

    @property
    def ranking(self) -> Ranking:
        return Ranking(self.users, self.centralities)

    def centrality(self) -> dict:
        if self._centrality is None:
            self._centrality = dict(zip(self.users, self.centralities))
        return self._centrality

    def positions(self) -> dict:
        if self._positions is None:
            self._positions = {u: i + 1 for i, u in enumerate(self.users)}
        return self._positions


@dataclass
class RankStore:
    entries: dict
    params: PageRankParams = PageRankParams()
    w: int | None = None
    fingerprint: str = ""
    pruned: bool = False

    def __contains__(self, t):
        return t in self.entries

    def __len__(self):
        return len(self.entries)

    def entry(self, t: str) -> TagEntry:
        try:
            return self.entries[t]
        except KeyError:
            raise MissingTagError(t) from None

    def nodes(self, t: str) -> frozenset:
        """Untruncated ``N(G(t))``; empty for unknown tags."""
        e = self.entries.get(t)
        return e.nodes if e is not None else frozenset()

    def tags(self) -> list[str]:
        return sorted(self.entries)


@dataclass
class BuildReport:
    tags: int = 0
    edges: int = 0
    indexed_edges: int = 0
    labels: int = 0
    non_converged: list = field(default_factory=list)
    seconds: dict = field(default_factory=dict)

    def as_lines(self) -> list[str]:
        return [
            f"tags\t{self.tags}",
            f"edges\t{self.edges}",
            f"indexed_edges\t{self.indexed_edges}",
            f"labels\t{self.labels}",
            f"non_converged\t{len(self.non_converged)}",
            f"seconds\t{sum(self.seconds.values()):.3f}",
        ]


def _entry(G, index, t, params, w):
    arr = G.arrays()
    e = index.edge_ids(t)
    ids, x, _, ok = subgraph_pagerank(arr.src[e], arr.dst[e], params)
    ranking = Ranking.from_scores([arr.names[i] for i in ids], x, ids=ids)
    ranking = ranking.truncate(w)
    return TagEntry(ranking.users, ranking.scores, index.nodes(t), len(e), ok)


def build_store(
    G: TaggedGraph,
    index: TagIndex | None = None,
    params: PageRankParams = PageRankParams(),
    w: int | None = None,
    threads: int = 1,
    pruned: bool = False,
):
    """PageRank every tag subgraph of ``G`` and keep its top-``w`` ranking.

    Returns ``(store, report)``. Raises ``AssertionError`` if the indexed edge
    total does not equal the label total of ``G``.
    """
    if w is not None and w < 1:
        raise ValueError("w must be a positive integer or None")
    index = build_index(G) if index is None else index
    tags = index.vocabulary()
    report = BuildReport(tags=len(tags), edges=G.num_edges, labels=G.label_count())

    def work(t):
        start = time.perf_counter()
        entry = _entry(G, index, t, params, w)
        return t, entry, time.perf_counter() - start

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(work, tags))
    else:
        results = [work(t) for t in tags]

    entries = {}
    for t, entry, secs in results:
        entries[t] = entry
        report.indexed_edges += entry.num_edges
        report.seconds[t] = secs
        if not entry.converged:
            report.non_converged.append(t)
    assert report.indexed_edges == report.labels, "sum of tag subgraph sizes != sum of |T(e)|"
    store = RankStore(entries, params, w, G.fingerprint(), pruned)
    return store, report


def top(store: RankStore, t: str, w: int) -> list[tuple[str, int, float]]:
    """First ``min(w, stored)`` ``(user, rank, centrality)`` triples of tag ``t``."""
    e = store.entry(t)
    return [(u, i + 1, c) for i, (u, c) in enumerate(zip(e.users[:w], e.centralities[:w]))]


def check_fingerprint(store: RankStore, G: TaggedGraph) -> None:
    fp = G.fingerprint()
    if store.fingerprint != fp:
        raise FingerprintMismatchError(
            f"store was built for graph {store.fingerprint[:12]}, got {fp[:12]}")


# --- persistence -------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.12g}"


def dumps(store: RankStore) -> str:
    p = store.params
    w = "unlimited" if store.w is None else str(store.w)
    out = [
        f"{MAGIC} v{FORMAT_VERSION}",
        f"#damping={p.damping!r} epsilon={p.epsilon!r} max_iterations={p.max_iterations} "
        f"w={w} pruned={int(store.pruned)}",
        f"#graph-fingerprint={store.fingerprint}",
    ]
    for t in sorted(store.entries):
        e = store.entries[t]
        out.append(f"tag {t} {len(e.nodes)} {e.num_edges} {int(e.converged)}")
        for i, (u, c) in enumerate(zip(e.users, e.centralities)):
            out.append(f"{i + 1}\t{u}\t{_fmt(c)}")
        # members beyond the truncation, no rank
        ranked = set(e.users)
        for u in sorted(e.nodes - ranked):
            out.append(f"-\t{u}")
    out.append(f"#end {len(store.entries)}")
    return "\n".join(out) + "\n"


def save_store(store: RankStore, path) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps(store))
    os.replace(tmp, path)


def _parse_header(lines):
    if len(lines) < 3 or not lines[0].startswith(MAGIC + " v"):
        raise CorruptStoreError("missing store header")
    try:
        version = int(lines[0][len(MAGIC) + 2:])
    except ValueError:
        raise CorruptStoreError(f"bad version line {lines[0]!r}") from None
    if version != FORMAT_VERSION:
        raise StoreVersionError(f"store format v{version}; this build reads v{FORMAT_VERSION}")
    if not lines[1].startswith("#") or not lines[2].startswith("#graph-fingerprint="):
        raise CorruptStoreError("malformed store header")
    try:
        kv = dict(item.split("=", 1) for item in lines[1][1:].split())
        params = PageRankParams(float(kv["damping"]), float(kv["epsilon"]), int(kv["max_iterations"]))
        w = None if kv["w"] == "unlimited" else int(kv["w"])
        pruned = bool(int(kv["pruned"]))
    except (KeyError, ValueError) as exc:
        raise CorruptStoreError(f"malformed parameter line: {exc}") from None
    return params, w, pruned, lines[2].split("=", 1)[1]


def loads(text: str) -> RankStore:
    lines = text.split("\n")
    if not text.endswith("\n"):
        raise CorruptStoreError("store file is truncated")
    lines.pop()
    params, w, pruned, fingerprint = _parse_header(lines)
    if not lines[-1].startswith("#end "):
        raise CorruptStoreError("store file is truncated (no end marker)")
    entries = {}
    i = 3
    end = len(lines) - 1
    try:
        while i < end:
            head = lines[i][4:].rsplit(" ", 3) if lines[i].startswith("tag ") else []
            if len(head) != 4:
                raise CorruptStoreError(f"line {i + 1}: expected tag header, got {lines[i]!r}")
            t, n_nodes, n_edges, conv = head
            i += 1
            users, cents, rest = [], [], []
            while i < end and not lines[i].startswith("tag "):
                fields = lines[i].split("\t")
                if fields[0] == "-" and len(fields) == 2:
                    rest.append(fields[1])
                elif len(fields) == 3 and int(fields[0]) == len(users) + 1 and not rest:
                    users.append(fields[1])
                    cents.append(float(fields[2]))
                else:
                    raise CorruptStoreError(f"line {i + 1}: bad entry {lines[i]!r}")
                i += 1
            nodes = frozenset(users) | frozenset(rest)
            if len(nodes) != int(n_nodes):
                raise CorruptStoreError(f"tag {t!r}: node count mismatch")
            entries[t] = TagEntry(tuple(users), tuple(cents), nodes, int(n_edges), conv == "1")
        declared = int(lines[-1].split(" ", 1)[1])
    except ValueError as exc:
        if isinstance(exc, CorruptStoreError):
            raise
        raise CorruptStoreError(f"line {i + 1}: {exc}") from None
    if declared != len(entries):
        raise CorruptStoreError("tag count does not match end marker")
    return RankStore(entries, params, w, fingerprint, pruned)


def load_store(path) -> RankStore:
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except FileNotFoundError:
        raise StoreNotFoundError(f"no rank store at {path}") from None
    return loads(text)
