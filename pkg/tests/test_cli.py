import os
import subprocess
import sys

import pytest

from conftest import EXAMPLE_CONTENTS, EXAMPLE_RECS
from facetrank.cli import main


@pytest.fixture
def example_files(tmp_path):
    graph = tmp_path / "g.tsv"
    store = tmp_path / "s.txt"
    assert main(["build", "--contents", EXAMPLE_CONTENTS, "--recs", EXAMPLE_RECS, "--out", str(graph)]) == 0
    assert main(["index", "--graph", str(graph), "--out", str(store)]) == 0
    return graph, store


def query(capsys, files, *extra):
    graph, store = files
    code = main(["query", "--graph", str(graph), "--store", str(store), *extra])
    out, err = capsys.readouterr()
    return code, out, err


def test_build_example(example_files):
    graph, _ = example_files
    assert len(graph.read_text().splitlines()) == 5
    report = dict(line.split("\t") for line in open(f"{graph}.report").read().splitlines())
    assert report["edges"] == "5" and report["nodes"] == "4"


def test_build_empty_and_missing(tmp_path):
    empty = tmp_path / "empty.tsv"
    empty.write_text("")
    assert main(["build", "--contents", str(empty), "--recs", str(empty), "--out", str(tmp_path / "g")]) == 3
    assert main(["build", "--contents", str(tmp_path / "nope"), "--recs", str(empty),
                 "--out", str(tmp_path / "g")]) == 2


def test_query_pr_product(capsys, example_files):
    code, out, _ = query(capsys, example_files, "--tags", "blues,jazz", "--alg", "pr-product")
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()]
    assert [r[0] for r in rows] == ["1", "2", "3"]
    assert {r[1] for r in rows} == {"A", "B", "C"}


def test_query_e_intersection_order(capsys, example_files):
    code, out, _ = query(capsys, example_files, "--tags", "jazz,blues", "--alg", "e-intersection", "--top", "2")
    assert code == 0
    assert [line.split("\t")[1] for line in out.splitlines()] == ["B", "C"]


def test_query_bad_algorithm(capsys, example_files):
    code, out, err = query(capsys, example_files, "--tags", "blues", "--alg", "nonsense")
    assert code == 2 and out == "" and "unknown algorithm" in err


def test_query_unknown_tag(capsys, example_files):
    code, out, err = query(capsys, example_files, "--tags", "tango", "--alg", "single")
    assert code == 0 and out == "" and "no results" in err


def test_query_fingerprint_mismatch(capsys, example_files, tmp_path):
    graph, store = example_files
    other = tmp_path / "other.tsv"
    other.write_text(graph.read_text() + "D\tA\trock\n")
    code, _, err = query(capsys, (other, store), "--tags", "blues", "--alg", "single")
    assert code == 4


def test_query_missing_and_corrupt_store(capsys, example_files, tmp_path):
    graph, store = example_files
    code, _, _ = query(capsys, (graph, tmp_path / "none"), "--tags", "blues", "--alg", "single")
    assert code == 2
    bad = tmp_path / "bad.txt"
    bad.write_text(store.read_text()[:-20])
    code, _, _ = query(capsys, (graph, bad), "--tags", "blues", "--alg", "single")
    assert code == 5


def test_index_options(capsys, example_files, tmp_path):
    graph, _ = example_files
    out = tmp_path / "s1.txt"
    assert main(["index", "--graph", str(graph), "--out", str(out), "--w", "1", "--prune"]) == 0
    text = out.read_text()
    assert "w=1 pruned=1" in text
    assert main(["index", "--graph", str(graph), "--out", str(out), "--damping", "1.5"]) == 6


def test_gen_is_deterministic(tmp_path):
    args = ["gen", "--seed", "7", "--nodes", "300", "--mean-outdegree", "5", "--vocab", "20",
            "--tags-per-edge", "2"]
    assert main(args + ["--out", str(tmp_path / "a.tsv")]) == 0
    assert main(args + ["--out", str(tmp_path / "b.tsv")]) == 0
    a = (tmp_path / "a.tsv").read_bytes()
    assert a == (tmp_path / "b.tsv").read_bytes()
    assert b"# seed=7" in a
    assert main(["gen", "--out", str(tmp_path / "c.tsv"), "--gamma", "3.5"]) == 6


def test_eval_k2_example(capsys, example_files, tmp_path):
    graph, store = example_files
    out_dir = tmp_path / "eval"
    code = main(["eval", "--graph", str(graph), "--store", str(store), "--out-dir", str(out_dir),
                 "--k", "2", "--windows", "1,2"])
    out, _ = capsys.readouterr()
    assert code == 0
    assert "(1 pairs," in out
    table = (out_dir / "table_e-intersection.tsv").read_text().splitlines()
    assert table[1] == "# pairs=1"
    assert len(table) == 3 + 4
    assert (out_dir / "grid_e-intersection_osim.png").exists()


def test_eval_without_store_and_vocab_error(capsys, example_files, tmp_path):
    graph, _ = example_files
    assert main(["eval", "--graph", str(graph), "--out-dir", str(tmp_path / "e"), "--k", "2",
                 "--no-figures"]) == 0
    assert not (tmp_path / "e" / "grid_e-intersection_osim.png").exists()
    assert main(["eval", "--graph", str(graph), "--out-dir", str(tmp_path / "e"), "--k", "9"]) == 7


def test_eval_rejects_store_of_other_graph(capsys, example_files, tmp_path):
    graph, store = example_files
    other = tmp_path / "other.tsv"
    other.write_text(graph.read_text() + "D\tA\trock\n")
    assert main(["eval", "--graph", str(other), "--store", str(store), "--out-dir", str(tmp_path / "e"),
                 "--k", "2"]) == 4


def test_stats_tags_per_edge(capsys, example_files):
    graph, _ = example_files
    assert main(["stats", "--graph", str(graph), "--tags-per-edge"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["# tags per edge (k\tcount)", "1\t3", "2\t2", "# mean=1.4"]


def test_stats_exact_and_all(capsys, example_files):
    graph, _ = example_files
    assert main(["stats", "--graph", str(graph), "--in-degree", "--exact"]) == 0
    assert capsys.readouterr().out.splitlines() == ["# in-degree (k\tcount)", "0\t1", "1\t1", "2\t2"]
    assert main(["stats", "--graph", str(graph), "--fit"]) == 0
    out = capsys.readouterr().out
    for section in ("# in-degree", "# out-degree", "# in-neighbor", "# pagerank", "# tags per edge"):
        assert section in out


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["query", "--tags", "x"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_module_entry_point(tmp_path):
    env = {**os.environ, "FACETRANK_THREADS": "1"}
    proc = subprocess.run([sys.executable, "-m", "facetrank", "build", "--contents", EXAMPLE_CONTENTS,
                           "--recs", EXAMPLE_RECS, "--out", str(tmp_path / "g.tsv")],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert proc.stdout == ""
    assert "4 nodes, 5 edges" in proc.stderr
