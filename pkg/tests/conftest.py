import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from facetrank.fileio import read_contents, read_recommendations  # noqa: E402
from facetrank.graph import build_graph, build_index  # noqa: E402

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
EXAMPLE_CONTENTS = os.path.join(FIXTURES, "example_contents.tsv")
EXAMPLE_RECS = os.path.join(FIXTURES, "example_recs.tsv")

EXAMPLE_EDGES = {
    ("A", "B"): frozenset({"blues", "jazz"}),
    ("A", "C"): frozenset({"blues", "jazz"}),
    ("B", "C"): frozenset({"jazz"}),
    ("B", "D"): frozenset({"blues"}),
    ("C", "D"): frozenset({"rock"}),
}


@pytest.fixture
def example():
    return build_graph(read_contents(EXAMPLE_CONTENTS), read_recommendations(EXAMPLE_RECS))


@pytest.fixture
def example_index(example):
    return build_index(example)


# --- acceptance summary ------------------------------------------------------

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or (rep.when != "call" and rep.passed):
        return
    number, title = marker.args
    entry = _acceptance.setdefault(number, {"title": title, "failed": [], "xfailed": [], "ran": 0})
    if rep.when == "call":
        entry["ran"] += 1
    if hasattr(rep, "wasxfail"):
        entry["xfailed"].append(item.name)
    elif rep.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        e = _acceptance[number]
        # a strict xfail means part of the criterion, as literally stated, does not hold
        status = "FAIL" if e["failed"] or e["xfailed"] else "PASS"
        line = f"criterion {number:2d} {status}  {e['title']}"
        if e["failed"]:
            line += f"  [failed: {', '.join(e['failed'])}]"
        if e["xfailed"]:
            line += f"  [known deviation, expected failure: {', '.join(e['xfailed'])}; all other checks pass]"
        terminalreporter.write_line(line)
