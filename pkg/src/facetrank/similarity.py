"""Top-n ranking similarity: OSim (overlap) and KSim (Kendall-style agreement)."""

from __future__ import annotations

from typing import Sequence

import numpy as np


def osim(r1: Sequence[str], r2: Sequence[str], n: int) -> float:
    """``|top_n(r1) & top_n(r2)| / n``.

    The denominator stays ``n`` even when a list is shorter than ``n``, so
    short result lists are penalized.
    """
    if n < 1:
        raise ValueError("osim window n must be positive")
    return len(set(r1[:n]) & set(r2[:n])) / n


def _positions(r, universe_index, size):
    # elements missing from r share one tied position after its last element
    pos = np.full(size, len(r), dtype=np.int64)
    for i, u in enumerate(r):
        pos[universe_index[u]] = i
    return pos


def ksim(r1: Sequence[str], r2: Sequence[str]) -> float:
    """Fraction of ordered pairs ``(u, v)``, ``u != v``, over ``U = r1 | r2`` ordered alike.

    Each list is extended with the elements of ``U`` it lacks, as a tied
    block at its end; two elements of such a block are unordered in that
    list, and a pair agrees only if both lists order it the same way (or
    both leave it unordered).
    """
    if len(r1) == 0 or len(r2) == 0:
        raise ValueError("ksim needs non-empty lists")
    if len(set(r1)) != len(r1) or len(set(r2)) != len(r2):
        raise ValueError("ksim lists must not contain duplicates")
    universe = list(dict.fromkeys([*r1, *r2]))
    size = len(universe)
    if size == 1:
        return 1.0
    index = {u: i for i, u in enumerate(universe)}
    p1 = _positions(r1, index, size)
    p2 = _positions(r2, index, size)
    s1 = np.sign(p1[:, None] - p1[None, :])
    s2 = np.sign(p2[:, None] - p2[None, :])
    agree = int((s1 == s2).sum()) - size   # drop the diagonal
    return agree / (size * (size - 1))
