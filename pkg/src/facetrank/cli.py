"""Command-line interface: build, index, query, eval, stats, gen.

Exit codes: 0 success, 2 usage or unreadable input, 3 empty input,
4 store/graph incompatibility, 5 corrupt or unsupported store file,
6 invalid parameters, 7 vocabulary too small, 1 anything else.
Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .errors import (
    EmptyGraphError,
    FacetRankError,
    FingerprintMismatchError,
    InsufficientVocabularyError,
    ParameterError,
    StoreError,
    StoreNotFoundError,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_EMPTY = 3
EXIT_INCOMPATIBLE = 4
EXIT_STORE = 5
EXIT_PARAMS = 6
EXIT_VOCAB = 7

THREADS_ENV = "FACETRANK_THREADS"


class CLIError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _default_threads():
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _csv(text):
    return [p for p in (s.strip() for s in text.split(",")) if p]


def _ints(text):
    try:
        return tuple(int(p) for p in _csv(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _w(text):
    if text.lower() in ("unlimited", "inf", "none"):
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'unlimited', got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("w must be positive")
    return value


def _params(args):
    from .centrality import PageRankParams
    return PageRankParams(args.damping, args.epsilon, args.max_iter)


def _add_pagerank_flags(p):
    p.add_argument("--damping", type=float, default=0.85, help="PageRank damping (default 0.85)")
    p.add_argument("--epsilon", type=float, default=1e-6, help="max-norm convergence threshold (default 1e-6)")
    p.add_argument("--max-iter", type=int, default=200, help="iteration cap (default 200)")


def _read_graph(path):
    from .fileio import read_graph
    try:
        return read_graph(path)
    except OSError as exc:
        raise CLIError(f"cannot read graph {path}: {exc.strerror or exc}") from None
    except ValueError as exc:
        raise CLIError(str(exc)) from None


def _err(msg):
    print(f"facetrank: {msg}", file=sys.stderr)


# --- commands ----------------------------------------------------------------

def cmd_build(args):
    from .fileio import read_contents, read_recommendations, write_graph
    from .graph import BuildReport, build_graph

    report = BuildReport()
    stop = _csv(args.stop_tags) if args.stop_tags else []
    try:
        contents = list(read_contents(args.contents, stop, report))
        recs = list(read_recommendations(args.recs, report))
    except OSError as exc:
        raise CLIError(f"cannot read input: {exc.filename}: {exc.strerror}") from None
    except UnicodeDecodeError as exc:
        raise CLIError(f"input is not UTF-8: {exc}") from None
    if not contents and not recs:
        raise CLIError("no valid records in input", EXIT_EMPTY)
    G = build_graph(contents, recs, report)
    write_graph(G, args.out)
    report_path = args.report or f"{args.out}.report"
    with open(report_path, "w", encoding="utf-8") as f:
        f.write("\n".join(report.as_lines()) + "\n")
    print(f"built graph: {G.num_nodes} nodes, {G.num_edges} edges, "
          f"{report.unknown_content_recs} recommendations of unknown content skipped", file=sys.stderr)
    return EXIT_OK


def cmd_index(args):
    from .centrality import prune_dangling
    from .store import build_store, save_store

    G = _read_graph(args.graph)
    if args.prune:
        G = prune_dangling(G)
    store, report = build_store(G, params=_params(args), w=args.w, threads=args.threads, pruned=args.prune)
    save_store(store, args.out)
    for line in report.as_lines():
        print(line, file=sys.stderr)
    return EXIT_OK


def _load_compatible(graph_path, store_path):
    from .centrality import prune_dangling
    from .store import check_fingerprint, load_store

    G = _read_graph(graph_path)
    store = load_store(store_path)
    if store.pruned:
        G = prune_dangling(G)
    check_fingerprint(store, G)
    return G, store


def cmd_query(args):
    from .facets import FacetRanker, FacetRankRequest, algorithm_name

    try:
        alg = algorithm_name(args.alg)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    tags = _csv(args.tags)
    if not tags:
        raise CLIError("--tags needs at least one tag")
    G, store = _load_compatible(args.graph, args.store)
    ranker = FacetRanker(G, store, params=store.params, w=args.w)
    result = ranker.answer(FacetRankRequest(tuple(tags), alg, args.top))
    if not result.ranking:
        print("no results", file=sys.stderr)
        return EXIT_OK
    out = sys.stdout
    for i, (user, score) in enumerate(zip(result.ranking.users, result.ranking.scores), 1):
        out.write(f"{i}\t{user}\t{score:.12g}\n")
    print(f"{len(result.ranking)} of {result.candidate_set_size} candidates", file=sys.stderr)
    return EXIT_OK


def cmd_eval(args):
    from .experiment import ExperimentConfig, prepare_graph, run_experiment, write_report
    from .facets import LABELS, MERGERS
    from .store import build_store, check_fingerprint, load_store

    cfg = ExperimentConfig(
        top_tag_count=args.k,
        stop_tags=tuple(_csv(args.stop_tags)) if args.stop_tags else (),
        windows=args.windows,
        w=args.w,
        params=_params(args),
        prune_dangling=not args.no_prune,
        algorithms=tuple(_csv(args.algorithms)) if args.algorithms else MERGERS,
        grid_windows=args.grid_windows,
        threads=args.threads,
    )
    G = prepare_graph(_read_graph(args.graph), cfg)
    if args.store:
        store = load_store(args.store)
        check_fingerprint(store, G)
    else:
        store, _ = build_store(G, params=cfg.params, threads=cfg.threads, pruned=cfg.prune_dangling)
    result = run_experiment(G, store, cfg)
    write_report(result, args.out_dir, figures=not args.no_figures)
    for ref, table in result.tables.items():
        print(f"# Average similarity to {LABELS[ref]} ({result.pairs} pairs, "
              f"{result.skipped[ref]} with empty reference)")
        print("algorithm\t" + "\t".join(f"top {n}" for n in cfg.windows))
        for alg in cfg.algorithms:
            cells = []
            for n in cfg.windows:
                o, k, _ = table.mean(alg, n)
                cells.append("NA|NA" if o is None else f"{o:.2f}|{k:.2f}")
            print(LABELS[alg] + "\t" + "\t".join(cells))
    if result.failures:
        _err(f"{len(result.failures)} pairs failed; see manifest.json")
    return EXIT_OK


def cmd_stats(args):
    from . import analysis

    G = _read_graph(args.graph)
    if G.num_nodes == 0:
        raise CLIError("graph is empty", EXIT_EMPTY)
    chosen = [args.in_degree, args.out_degree, args.neighbor_correlation, args.pagerank, args.tags_per_edge]
    everything = not any(chosen)
    bpd = args.bins_per_decade
    out = []

    def dist(name, d, fit):
        out.append(f"# {name} (bin_center\tdensity); zero={d.zero_count}")
        out.extend(analysis.format_distribution(d))
        if fit:
            try:
                exponent, r2 = analysis.fit_power_law(d, xmin=_mode(d) if args.fit_from_mode else None)
                out.append(f"# fit exponent={exponent:.6g} r2={r2:.6g}")
            except analysis.TooFewBinsError as exc:
                out.append(f"# fit unavailable: {exc}")

    if everything or args.in_degree:
        if args.exact:
            out.append("# in-degree (k\tcount)")
            out.extend(analysis.format_histogram(analysis.degree_histogram(G, "in")))
        else:
            dist("in-degree", analysis.degree_distribution(G, "in", bpd), args.fit)
    if everything or args.out_degree:
        if args.exact:
            out.append("# out-degree (k\tcount)")
            out.extend(analysis.format_histogram(analysis.degree_histogram(G, "out")))
        else:
            dist("out-degree", analysis.degree_distribution(G, "out", bpd), args.fit)
    if everything or args.neighbor_correlation:
        d = analysis.neighbor_indegree_correlation(G, bpd)
        out.append("# in-neighbor indegree vs indegree (bin_center\tmean)")
        out.extend(analysis.format_distribution(d))
    if everything or args.pagerank:
        dist("pagerank", analysis.pagerank_distribution(G, _params(args), bpd), args.fit)
    if everything or args.tags_per_edge:
        hist, mean = analysis.tags_per_edge_histogram(G)
        out.append("# tags per edge (k\tcount)")
        out.extend(analysis.format_histogram(hist))
        out.append("# mean=NA" if mean is None else f"# mean={mean:.12g}")
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


def _mode(d):
    return d.centers[max(range(len(d)), key=lambda i: d.density[i])] if len(d) else None


def cmd_gen(args):
    from .fileio import write_graph
    from .synth import GenParams, generate

    p = GenParams(
        node_count=args.nodes,
        mean_outdegree=args.mean_outdegree,
        indegree_exponent=args.gamma,
        tag_vocabulary_size=args.vocab,
        tags_per_edge_mean=args.tags_per_edge,
        tag_popularity_exponent=args.zipf,
        assortativity_bias=args.assortativity,
        seed=args.seed,
    )
    G = generate(p)
    write_graph(G, args.out, header=["facetrank synthetic graph", *p.header()])
    print(f"generated {G.num_nodes} nodes, {G.num_edges} edges", file=sys.stderr)
    return EXIT_OK


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="facetrank", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=_default_threads(),
                        help=f"worker threads (default: ${THREADS_ENV} or CPU count)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a tagged graph from content and recommendation files")
    p.add_argument("--contents", required=True, help="TSV: user, content_id, comma-separated tags")
    p.add_argument("--recs", required=True, help="TSV: recommender, content_id")
    p.add_argument("--out", required=True, help="graph export path")
    p.add_argument("--report", help="build report path (default: OUT.report)")
    p.add_argument("--stop-tags", help="comma-separated tags to drop")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("index", help="precompute per-tag rankings into a rank store")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True, help="rank store path")
    p.add_argument("--w", type=_w, default=None, help="keep only the top w per tag (default unlimited)")
    p.add_argument("--prune", action="store_true", help="drop indegree-1/outdegree-0 nodes first")
    _add_pagerank_flags(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", help="rank users for a multi-tag facet")
    p.add_argument("--graph", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--tags", required=True, help="comma-separated facet tags")
    p.add_argument("--alg", required=True,
                   help="e-intersection, e-union-n-intersection, single, pr-product, r-sum, tau-n-intersection")
    p.add_argument("--top", type=int, default=None, help="print only the top n")
    p.add_argument("--w", type=_w, default=500, help="tau-N-intersection cut (default 500)")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("eval", help="all-pairs facet experiment against the reference rankings")
    p.add_argument("--graph", required=True)
    p.add_argument("--store", help="prebuilt rank store (built in memory when omitted)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--k", type=int, default=99, help="number of top tags (default 99)")
    p.add_argument("--windows", type=_ints, default=(8, 16, 32), help="top-n windows (default 8,16,32)")
    p.add_argument("--grid-windows", type=_ints, default=(1, 2, 4, 8, 16, 32, 64, 128))
    p.add_argument("--w", type=_w, default=500, help="tau-N-intersection cut (default 500)")
    p.add_argument("--stop-tags", help="comma-separated tags to leave out")
    p.add_argument("--algorithms", help="comma-separated candidate algorithms (default: the four merges)")
    p.add_argument("--no-prune", action="store_true", help="skip dangling-node pruning")
    p.add_argument("--no-figures", action="store_true", help="skip PNG grid figures")
    _add_pagerank_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stats", help="degree, correlation, PageRank and tags-per-edge statistics")
    p.add_argument("--graph", required=True)
    p.add_argument("--in-degree", action="store_true")
    p.add_argument("--out-degree", action="store_true")
    p.add_argument("--neighbor-correlation", action="store_true")
    p.add_argument("--pagerank", action="store_true")
    p.add_argument("--tags-per-edge", action="store_true")
    p.add_argument("--exact", action="store_true", help="exact degree histograms instead of log bins")
    p.add_argument("--bins-per-decade", type=int, default=10)
    p.add_argument("--fit", action="store_true", help="append least-squares power-law fits")
    p.add_argument("--fit-from-mode", action="store_true", help="fit only bins at or above the mode")
    _add_pagerank_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("gen", help="generate a synthetic tagged graph")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nodes", type=int, default=1000)
    p.add_argument("--mean-outdegree", type=float, default=25.0)
    p.add_argument("--gamma", type=float, default=2.5, help="indegree exponent, in (2, 3)")
    p.add_argument("--vocab", type=int, default=1000)
    p.add_argument("--tags-per-edge", type=float, default=9.26)
    p.add_argument("--zipf", type=float, default=1.0, help="tag popularity exponent")
    p.add_argument("--assortativity", type=float, default=0.0)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        _err(str(exc))
        return exc.code
    except FingerprintMismatchError as exc:
        _err(str(exc))
        return EXIT_INCOMPATIBLE
    except StoreNotFoundError as exc:
        _err(str(exc))
        return EXIT_INPUT
    except StoreError as exc:
        _err(str(exc))
        return EXIT_STORE
    except EmptyGraphError as exc:
        _err(str(exc))
        return EXIT_EMPTY
    except InsufficientVocabularyError as exc:
        _err(str(exc))
        return EXIT_VOCAB
    except ParameterError as exc:
        _err(str(exc))
        return EXIT_PARAMS
    except FacetRankError as exc:
        _err(str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
