"""All-pairs facet experiment: merge algorithms scored against reference rankings.

For every pair of the ``K`` most used tags the reference rankings
(E-intersection, E-union/N-intersection) and the candidate merges are
computed, and OSim/KSim of each candidate against each reference are
averaged per top-n window. A (pair, window) with a reference shorter than
the window carries no data and is skipped, as are pairs whose reference
ranking is empty.
"""

from __future__ import annotations

import json
import math
import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations

from .centrality import PageRankParams, Ranking, prune_dangling
from .errors import InsufficientVocabularyError, ParameterError
from .facets import LABELS, MERGERS, REFERENCES, FacetRanker, algorithm_name
from .graph import TaggedGraph, TagIndex, build_index, normalize_tag
from .similarity import ksim, osim
from .store import RankStore, check_fingerprint

METRICS = ("osim", "ksim")


@dataclass(frozen=True)
class ExperimentConfig:
    top_tag_count: int = 99
    stop_tags: tuple = ()
    windows: tuple = (8, 16, 32)
    w: int | None = 500
    params: PageRankParams = PageRankParams()
    prune_dangling: bool = True
    algorithms: tuple = MERGERS
    references: tuple = REFERENCES
    grid_windows: tuple = (1, 2, 4, 8, 16, 32, 64, 128)
    threads: int = 1

    def __post_init__(self):
        if self.top_tag_count < 2:
            raise ParameterError("top_tag_count must be at least 2")
        if not self.windows or any(n < 1 for n in self.windows):
            raise ParameterError("windows must be positive")
        if any(n < 1 for n in self.grid_windows):
            raise ParameterError("grid windows must be positive")
        if self.w is not None and self.w < 1:
            raise ParameterError("w must be positive")
        object.__setattr__(self, "algorithms", tuple(algorithm_name(a) for a in self.algorithms))
        object.__setattr__(self, "references", tuple(algorithm_name(a) for a in self.references))
        object.__setattr__(self, "stop_tags", tuple(sorted({normalize_tag(t) for t in self.stop_tags})))

    def as_dict(self) -> dict:
        d = asdict(self)
        d["params"] = asdict(self.params)
        return d


def prepare_graph(G: TaggedGraph, cfg: ExperimentConfig) -> TaggedGraph:
    """Apply the one-off preprocessing (dangling pruning) the experiment runs on."""
    return prune_dangling(G) if cfg.prune_dangling else G


def top_tags(G: TaggedGraph, k: int, stop_tags=(), index: TagIndex | None = None) -> list[str]:
    """The ``k`` tags carried by most edges, ties broken lexicographically."""
    index = build_index(G) if index is None else index
    stop = {normalize_tag(t) for t in stop_tags}
    usage = [(n, t) for t, n in index.usage().items() if t not in stop]
    if len(usage) < k:
        raise InsufficientVocabularyError(f"need {k} tags, vocabulary has {len(usage)} after exclusions")
    usage.sort(key=lambda p: (-p[0], p[1]))
    return [t for _, t in usage[:k]]


def _mean(values):
    return math.fsum(values) / len(values) if values else None


@dataclass
class SimilarityTable:
    """Per algorithm and window: OSim/KSim values against one reference."""

    reference: str
    algorithms: tuple
    windows: tuple
    pair_count: int = 0
    osim: dict = field(default_factory=lambda: defaultdict(list))
    ksim: dict = field(default_factory=lambda: defaultdict(list))

    def add(self, algorithm, n, o, k):
        self.osim[(algorithm, n)].append(o)
        self.ksim[(algorithm, n)].append(k)

    def mean(self, algorithm, n):
        """``(mean OSim, mean KSim, number of pairs)``; means are None without data."""
        o = self.osim.get((algorithm, n), [])
        return _mean(o), _mean(self.ksim.get((algorithm, n), [])), len(o)


def _log2_bin(x: int) -> int:
    return int(x).bit_length() - 1


@dataclass
class SimilarityGrid:
    """Mean similarity over log2 bins of reference size (x) and top-n window (y)."""

    reference: str
    algorithm: str
    metric: str
    cells: dict = field(default_factory=lambda: defaultdict(list))

    def add(self, ref_size, n, value):
        self.cells[(_log2_bin(ref_size), _log2_bin(n))].append(value)

    def mean(self, xbin, ybin):
        return _mean(self.cells.get((xbin, ybin), []))

    def rows(self):
        """``(size_lo, size_hi, top_lo, top_hi, mean, count)`` sorted by bin."""
        out = []
        for (xb, yb) in sorted(self.cells):
            vals = self.cells[(xb, yb)]
            out.append((2 ** xb, 2 ** (xb + 1) - 1, 2 ** yb, 2 ** (yb + 1) - 1, _mean(vals), len(vals)))
        return out


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    fingerprint: str
    tags: list
    pairs: int
    tables: dict
    grids: dict
    skipped: dict
    window_skips: dict
    failures: list


def _pair_rankings(ranker, pair, algorithms):
    out = {}
    for alg in algorithms:
        out[alg] = ranker.rank(pair, alg)
    return out


def run_experiment(G: TaggedGraph, store: RankStore, cfg: ExperimentConfig = ExperimentConfig(),
                   index: TagIndex | None = None, global_centrality=None) -> ExperimentResult:
    """Score every merge algorithm against every reference over all top-tag pairs.

    ``G`` is the graph the store was built from (already pruned if the
    config asks for pruning; see ``prepare_graph``).
    """
    check_fingerprint(store, G)
    index = build_index(G) if index is None else index
    tags = top_tags(G, cfg.top_tag_count, cfg.stop_tags, index)
    pairs = list(combinations(tags, 2))
    ranker = FacetRanker(G, store, index, cfg.params, w=cfg.w, global_centrality=global_centrality)
    needed = tuple(dict.fromkeys([*cfg.references, *cfg.algorithms]))

    def work(pair):
        try:
            return pair, _pair_rankings(ranker, pair, needed), None
        except Exception as exc:   # recorded per pair, never fatal
            return pair, None, f"{type(exc).__name__}: {exc}"

    if cfg.threads > 1:
        ranker.global_centrality  # compute once before fanning out
        with ThreadPoolExecutor(cfg.threads) as pool:
            results = list(pool.map(work, pairs))
    else:
        results = [work(p) for p in pairs]

    tables = {ref: SimilarityTable(ref, cfg.algorithms, cfg.windows, len(pairs)) for ref in cfg.references}
    grids = {(ref, alg, m): SimilarityGrid(ref, alg, m)
             for ref in cfg.references for alg in cfg.algorithms for m in METRICS}
    skipped = dict.fromkeys(cfg.references, 0)
    window_skips = {ref: dict.fromkeys(cfg.windows, 0) for ref in cfg.references}
    failures = []

    for pair, rankings, err in results:
        if err is not None:
            failures.append((",".join(pair), err))
            continue
        for ref in cfg.references:
            reference: Ranking = rankings[ref]
            if not reference:
                skipped[ref] += 1
                continue
            size = len(reference)
            for n in cfg.windows:
                if size < n:
                    window_skips[ref][n] += 1
            for alg in cfg.algorithms:
                cand = rankings[alg]
                for n in cfg.windows:
                    if size >= n:
                        tables[ref].add(alg, n, *_scores(cand, reference, n))
                for n in cfg.grid_windows:
                    if size >= n:
                        o, k = _scores(cand, reference, n)
                        grids[(ref, alg, "osim")].add(size, n, o)
                        grids[(ref, alg, "ksim")].add(size, n, k)

    return ExperimentResult(cfg, store.fingerprint, tags, len(pairs), tables, grids,
                            skipped, window_skips, failures)


def _scores(cand: Ranking, reference: Ranking, n: int):
    c, r = cand.top(n), reference.top(n)
    # an empty candidate leaves every reference pair unordered: no agreement
    return osim(c, r, n), (ksim(c, r) if c else 0.0)


# --- output ------------------------------------------------------------------

def _slug(name: str) -> str:
    return LABELS.get(name, name).lower().replace("/", "-")


def _cell(v):
    return "NA" if v is None else f"{v:.2f}"


def emit_tables(table: SimilarityTable, path) -> None:
    """Write the two-decimal ``OSim|KSim`` table plus a full-precision companion.

    The companion sits next to ``path`` with suffix ``.full.tsv``.
    """
    lines = [f"# Average similarity to {LABELS.get(table.reference, table.reference)}",
             f"# pairs={table.pair_count}",
             "algorithm\t" + "\t".join(f"top {n}" for n in table.windows)]
    full = ["algorithm\twindow\tosim\tksim\tpairs"]
    if table.pair_count:
        for alg in table.algorithms:
            cells = []
            for n in table.windows:
                o, k, c = table.mean(alg, n)
                cells.append(f"{_cell(o)}|{_cell(k)}")
                full.append(f"{LABELS.get(alg, alg)}\t{n}\t{'NA' if o is None else repr(o)}\t"
                            f"{'NA' if k is None else repr(k)}\t{c}")
            lines.append(LABELS.get(alg, alg) + "\t" + "\t".join(cells))
    _write(path, lines)
    _write(_companion(path), full)


def _companion(path):
    path = os.fspath(path)
    stem = path[:-4] if path.endswith(".tsv") else path
    return stem + ".full.tsv"


def parse_table(path) -> dict:
    """Read an emitted table back: ``{label: {window: (osim, ksim)}}``."""
    with open(path, encoding="utf-8") as f:
        rows = [line.rstrip("\n") for line in f if line.strip() and not line.startswith("#")]
    if not rows:
        return {}
    windows = [int(h.split()[1]) for h in rows[0].split("\t")[1:]]
    out = {}
    for row in rows[1:]:
        label, *cells = row.split("\t")
        out[label] = {}
        for n, cell in zip(windows, cells):
            o, k = cell.split("|")
            out[label][n] = (None if o == "NA" else float(o), None if k == "NA" else float(k))
    return out


def emit_grid(grid: SimilarityGrid, path) -> None:
    lines = ["size_lo\tsize_hi\ttop_lo\ttop_hi\tmean\tcount"]
    for xlo, xhi, ylo, yhi, mean, count in grid.rows():
        lines.append(f"{xlo}\t{xhi}\t{ylo}\t{yhi}\t{mean!r}\t{count}")
    _write(path, lines)


def _write(path, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def write_report(result: ExperimentResult, out_dir, figures: bool = True) -> list[str]:
    """Tables, grids, run manifest and (optionally) grid figures into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for ref, table in result.tables.items():
        path = os.path.join(out_dir, f"table_{_slug(ref)}.tsv")
        emit_tables(table, path)
        written += [path, _companion(path)]
    for (ref, alg, metric), grid in result.grids.items():
        path = os.path.join(out_dir, f"grid_{_slug(ref)}_{_slug(alg)}_{metric}.tsv")
        emit_grid(grid, path)
        written.append(path)
    manifest = {
        "config": result.config.as_dict(),
        "graph_fingerprint": result.fingerprint,
        "tags": result.tags,
        "pairs": result.pairs,
        "skipped_empty_reference": result.skipped,
        "skipped_short_reference": {r: {str(n): c for n, c in v.items()}
                                    for r, v in result.window_skips.items()},
        "failures": result.failures,
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    written.append(path)
    if figures:
        from .plotting import plot_grids
        for ref in result.config.references:
            for metric in METRICS:
                path = os.path.join(out_dir, f"grid_{_slug(ref)}_{metric}.png")
                plot_grids([result.grids[(ref, a, metric)] for a in result.config.algorithms],
                           path, title=f"Average similarity ({metric.upper()}) to {LABELS[ref]}")
                written.append(path)
    return written
