import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from facetrank.analysis import (
    binned_mean,
    degree_distribution,
    degree_histogram,
    fit_power_law,
    format_distribution,
    format_histogram,
    log_binned,
    neighbor_indegree_correlation,
    pagerank_distribution,
    tags_per_edge_histogram,
)
from facetrank.analysis import BinnedDistribution
from facetrank.errors import EmptyGraphError, TooFewBinsError
from facetrank.graph import TaggedGraph
from facetrank.synth import GenParams, generate


def ring(n, k=1):
    return TaggedGraph.from_edges({(f"n{i}", f"n{(i + j) % n}"): {"t"} for i in range(n) for j in range(1, k + 1)})


def test_example_indegree_histogram(example):
    assert degree_histogram(example, "in") == {0: 1, 1: 1, 2: 2}
    assert degree_histogram(example, "out") == {0: 1, 1: 1, 2: 2}


def test_example_distribution_counts_zero_apart(example):
    d = degree_distribution(example, "in")
    assert d.zero_count == 1
    assert d.counts == (1, 2)
    assert d.total() == 4


def test_regular_graph_single_bin():
    d = degree_distribution(ring(30, 3), "in")
    assert len(d) == 1
    assert d.centers[0] == pytest.approx(3.0)
    assert d.density == (1.0,)


def test_direction_and_empty(example):
    with pytest.raises(ValueError):
        degree_histogram(example, "sideways")
    with pytest.raises(EmptyGraphError):
        degree_distribution(TaggedGraph())


def test_discrete_width_counts_integers():
    # 10 bins per decade: [10, 12.59) holds the integers 10, 11, 12
    d = log_binned([10, 11, 12, 12], 10)
    assert d.counts == (4,)
    assert d.density[0] == pytest.approx(1 / 3)


@given(st.lists(st.integers(0, 5000), min_size=1, max_size=200), st.sampled_from([3, 5, 10]))
def test_binning_reconstructs_totals(values, bpd):
    d = log_binned(values, bpd)
    assert d.total() == len(values)
    assert all(x > 0 for x in d.density)
    assert list(d.centers) == sorted(set(d.centers))
    assert sum(d.counts) == sum(1 for v in values if v > 0)


def test_correlation_examples():
    assert len(neighbor_indegree_correlation(TaggedGraph(frozenset("ab"), {}))) == 0
    star = TaggedGraph.from_edges({(f"l{i}", "hub"): {"t"} for i in range(8)})
    d = neighbor_indegree_correlation(star)
    assert d.centers == pytest.approx((8.0,))
    assert d.density == (0.0,)


def test_correlation_mean_by_hand():
    # b <- a, c <- a, c <- b: indeg a0 b1 c2; c's in-neighbors have mean indegree 0.5
    G = TaggedGraph.from_edges({("a", "b"): {"t"}, ("a", "c"): {"t"}, ("b", "c"): {"t"}})
    d = neighbor_indegree_correlation(G)
    assert d.points() == [(pytest.approx(1.0), 0.0), (pytest.approx(2.0), 0.5)]


def test_binned_mean_skips_nonpositive_x():
    d = binned_mean([0, 1, 1], [5, 2, 4])
    assert d.zero_count == 1 and d.density == (3.0,)


def test_tags_per_edge(example):
    assert tags_per_edge_histogram(example) == ({1: 3, 2: 2}, 1.4)
    assert tags_per_edge_histogram(ring(5)) == ({1: 5}, 1.0)
    assert tags_per_edge_histogram(TaggedGraph()) == ({}, None)


def test_pagerank_distribution_examples():
    d = pagerank_distribution(ring(2))
    assert len(d) == 1 and d.centers[0] == pytest.approx(0.5)
    complete = TaggedGraph.from_edges({(a, b): {"t"} for a in "abcde" for b in "abcde" if a != b})
    d = pagerank_distribution(complete)
    assert len(d) == 1 and d.centers[0] == pytest.approx(0.2)


def test_fit_analytic():
    k = np.logspace(0, 3, 20)
    d = BinnedDistribution(tuple(k), tuple(k ** -2.0), tuple([5] * 20))
    exponent, r2 = fit_power_law(d)
    assert exponent == pytest.approx(2.0, abs=1e-6)
    assert r2 == pytest.approx(1.0, abs=1e-9)
    flat = BinnedDistribution(tuple(k), tuple([0.1] * 20), tuple([5] * 20))
    assert fit_power_law(flat)[0] == pytest.approx(0.0, abs=1e-9)


def test_fit_needs_three_bins():
    d = BinnedDistribution((1.0, 2.0), (0.5, 0.25), (1, 1))
    with pytest.raises(TooFewBinsError):
        fit_power_law(d)


def test_fit_window_and_min_count():
    k = np.logspace(0, 2, 10)
    y = k ** -3.0
    y[:3] = 1.0   # bent head
    d = BinnedDistribution(tuple(k), tuple(y), tuple([1, 1, 1] + [50] * 7))
    assert fit_power_law(d, xmin=k[3])[0] == pytest.approx(3.0, abs=1e-6)
    assert fit_power_law(d, min_count=2)[0] == pytest.approx(3.0, abs=1e-6)


def test_generated_graph_fits():
    G = generate(GenParams(node_count=3000, mean_outdegree=10, tag_vocabulary_size=20,
                           tags_per_edge_mean=1.0, seed=2))
    d = degree_distribution(G, "in")
    mode = max(degree_histogram(G, "in").items(), key=lambda kv: kv[1])[0]
    exponent, _ = fit_power_law(d, xmin=mode)
    assert exponent == pytest.approx(2.5, abs=0.3)
    pr_exponent, _ = fit_power_law(pagerank_distribution(G), min_count=2)
    assert pr_exponent > 1.5


def test_formatters():
    d = BinnedDistribution((1.0, 10.0), (0.5, 1 / 3), (1, 2))
    assert format_distribution(d) == ["1\t0.5", "10\t0.333333333333"]
    assert format_histogram({1: 3, 2: 2}) == ["1\t3", "2\t2"]
