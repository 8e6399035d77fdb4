import pytest

from facetrank.analysis import fit_power_law, neighbor_indegree_correlation, tags_per_edge_histogram
from facetrank.errors import ParameterError
from facetrank.graph import export_lines
from facetrank.synth import GenParams, generate

SMALL = dict(node_count=2000, mean_outdegree=10, tag_vocabulary_size=200, tags_per_edge_mean=3.0)


def small(**kw):
    return generate(GenParams(**{**SMALL, **kw}))


def test_deterministic():
    assert export_lines(small(seed=7)) == export_lines(small(seed=7))


def test_seeds_differ():
    assert export_lines(small(seed=1)) != export_lines(small(seed=2))


def test_simple_graph_shape():
    G = small(seed=3)
    assert G.num_nodes == 2000
    assert all(s != d for s, d in G.edges)
    assert all(len(t) >= 1 for t in G.edges.values())
    assert G.vocabulary() <= {f"tag{i:03d}" for i in range(200)}


def test_mean_outdegree_and_tags():
    G = small(node_count=5000, seed=4)
    assert G.num_edges / G.num_nodes == pytest.approx(10, rel=0.10)
    hist, mean = tags_per_edge_histogram(G)
    assert mean == pytest.approx(3.0, rel=0.05)
    assert max(hist) < 10 * mean


def test_zipf_popularity_is_skewed():
    G = small(seed=5)
    counts = {}
    for tags in G.edges.values():
        for t in tags:
            counts[t] = counts.get(t, 0) + 1
    assert counts["tag000"] > 10 * counts.get("tag199", 0)


@pytest.mark.parametrize("bias, sign", [(0.5, 1), (-0.5, -1)])
def test_assortativity_bias_tilts_correlation(bias, sign):
    G = small(seed=1, assortativity_bias=bias, tags_per_edge_mean=1.0)
    exponent, _ = fit_power_law(neighbor_indegree_correlation(G))
    assert sign * -exponent > 0.05


def test_rewiring_preserves_degrees():
    a = small(seed=9)
    b = small(seed=9, assortativity_bias=0.8)
    assert a.num_edges == b.num_edges
    assert set(a.edges) != set(b.edges)
    assert sorted(a.out_degree().items()) == sorted(b.out_degree().items())
    assert sorted(a.in_degree().items()) == sorted(b.in_degree().items())


@pytest.mark.parametrize("kw", [
    {"node_count": 1},
    {"mean_outdegree": 0},
    {"mean_outdegree": 5000},
    {"indegree_exponent": 3.0},
    {"indegree_exponent": 2.0},
    {"tag_vocabulary_size": 0},
    {"tags_per_edge_mean": 500},
    {"tag_popularity_exponent": -1},
    {"assortativity_bias": 1.5},
])
def test_bad_params(kw):
    with pytest.raises(ParameterError):
        GenParams(**{**SMALL, **kw})


def test_header_echoes_params():
    lines = GenParams(seed=3).header()
    assert "seed=3" in lines and "indegree_exponent=2.5" in lines
