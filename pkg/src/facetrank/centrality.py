"""PageRank centrality and rankings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import EmptyGraphError, ParameterError
from .graph import TaggedGraph


@dataclass(frozen=True)
class PageRankParams:
    damping: float = 0.85
    epsilon: float = 1e-6
    max_iterations: int = 200

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ParameterError(f"damping must lie in (0, 1), got {self.damping}")
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ParameterError(f"max_iterations must be a positive integer, got {self.max_iterations}")


class CentralityVector(dict):
    """Mapping user -> PageRank probability, with convergence diagnostics."""

    def __init__(self, values=(), converged=True, iterations=0):
        super().__init__(values)
        self.converged = converged
        self.iterations = iterations


def power_iteration(src, dst, n, params=PageRankParams()):
    """PageRank of the graph on nodes ``0..n-1`` with edges ``src[i] -> dst[i]``.

    Each step is ``x' = d * A^T D^-1 x + (d * dangling_mass + 1 - d) / n``;
    zero-outdegree nodes spread their mass uniformly. Stops when no
    component moves more than ``epsilon``.

    Returns ``(x, iterations, converged)``.
    """
    if n < 1:
        raise EmptyGraphError("PageRank of an empty graph")
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    outdeg = np.bincount(src, minlength=n).astype(float)
    dangling = outdeg == 0
    weights = 1.0 / outdeg[src]
    # row = target, column = source, so M @ x pushes mass along edges
    M = sp.csr_matrix((weights, (dst, src)), shape=(n, n))
    d = params.damping
    x = np.full(n, 1.0 / n)
    converged = False
    it = 0
    while it < params.max_iterations:
        it += 1
        leak = x[dangling].sum()
        new = d * (M @ x) + (d * leak + (1.0 - d)) / n
        new /= new.sum()
        delta = np.abs(new - x).max()
        x = new
        if delta <= params.epsilon:
            converged = True
            break
    return x, it, converged


def pagerank(G: TaggedGraph, params: PageRankParams = PageRankParams()) -> CentralityVector:
    arr = G.arrays()
    x, it, ok = power_iteration(arr.src, arr.dst, len(arr.names), params)
    return CentralityVector(zip(arr.names, x.tolist()), converged=ok, iterations=it)


def subgraph_pagerank(src, dst, params=PageRankParams()):
    """PageRank of the graph spanned by an edge list over global node ids.

    Returns ``(node_ids, values, iterations, converged)`` where ``node_ids``
    are the sorted distinct endpoints. Empty edge lists give empty arrays.
    """
    if len(src) == 0:
        return np.empty(0, dtype=np.int64), np.empty(0), 0, True
    nodes, inverse = np.unique(np.concatenate([src, dst]), return_inverse=True)
    m = len(src)
    x, it, ok = power_iteration(inverse[:m], inverse[m:], len(nodes), params)
    return nodes, x, it, ok


def prune_dangling(G: TaggedGraph) -> TaggedGraph:
    """Drop, in one pass, nodes with indegree 1 and outdegree 0 plus their in-edge."""
    indeg = G.in_degree()
    outdeg = G.out_degree()
    gone = {n for n in G.nodes if indeg[n] == 1 and outdeg[n] == 0}
    if not gone:
        return G
    return TaggedGraph(
        G.nodes - gone, {e: tags for e, tags in G.edges.items() if e[1] not in gone}
    )


class Ranking:
    """Total order of users, best first; rank of ``users[i]`` is ``i + 1``.

    ``scores`` holds the value each user was ordered by (a centrality, a
    product of centralities, a rank sum...).
    """

    __slots__ = ("users", "scores", "_pos")

    def __init__(self, users: Sequence[str] = (), scores: Sequence[float] = ()):
        self.users = tuple(users)
        self.scores = tuple(scores)
        if len(self.users) != len(self.scores):
            raise ValueError("users and scores differ in length")
        self._pos = None

    @classmethod
    def from_scores(cls, names, values, ascending=False, ids=None) -> "Ranking":
        """Order ``names`` by ``values``; ties go to the smaller id.

        ``ids`` are integer keys whose order matches the order of ``names``;
        when given, sorting happens in numpy.
        """
        values = np.asarray(values, dtype=float)
        if ids is not None:
            key = values if ascending else -values
            order = np.lexsort((np.asarray(ids), key))
            return cls([names[i] for i in order], values[order].tolist())
        sign = 1.0 if ascending else -1.0
        pairs = sorted(zip(names, values.tolist()), key=lambda p: (sign * p[1], p[0]))
        return cls([p[0] for p in pairs], [p[1] for p in pairs])

    def __len__(self):
        return len(self.users)

    def __iter__(self):
        return iter(self.users)

    def __bool__(self):
        return bool(self.users)

    def __eq__(self, other):
        if not isinstance(other, Ranking):
            return NotImplemented
        return self.users == other.users and self.scores == other.scores

    def __repr__(self):
        head = ", ".join(self.users[:5])
        return f"Ranking([{head}{', ...' if len(self) > 5 else ''}], n={len(self)})"

    def items(self):
        """``(user, rank)`` pairs, rank ascending."""
        return [(u, i + 1) for i, u in enumerate(self.users)]

    def rank(self, user: str) -> int:
        if self._pos is None:
            self._pos = {u: i + 1 for i, u in enumerate(self.users)}
        return self._pos[user]

    def positions(self) -> dict:
        if self._pos is None:
            self._pos = {u: i + 1 for i, u in enumerate(self.users)}
        return self._pos

    def top(self, n: int | None) -> list[str]:
        return list(self.users if n is None else self.users[:n])

    def truncate(self, n: int | None) -> "Ranking":
        if n is None or n >= len(self):
            return self
        return Ranking(self.users[:n], self.scores[:n])


def rank_of(c: Mapping[str, float]) -> Ranking:
    """Rank by centrality descending, ties by ascending user id."""
    return Ranking.from_scores(list(c.keys()), list(c.values()))


def format_ranking(ranking: Ranking) -> list[str]:
    """``user\\trank\\tcentrality`` lines with 12 significant digits."""
    return [f"{u}\t{i + 1}\t{s:.12g}" for i, (u, s) in enumerate(zip(ranking.users, ranking.scores))]


def restrict(c: Mapping[str, float], users: Iterable[str]) -> dict:
    return {u: c[u] for u in users if u in c}
