"""Line-oriented TSV readers and writers for contents, recommendations and graphs."""

from __future__ import annotations

import os
from typing import Iterable, Iterator

from .graph import (
    BuildReport,
    Recommendation,
    TaggedContent,
    TaggedGraph,
    export_lines,
    normalize_tag,
    normalize_tags,
)


def _lines(path) -> Iterator[str]:
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\r\n")
            if line and not line.startswith("#"):
                yield line


def read_contents(path, stop_tags: Iterable[str] = (), report: BuildReport | None = None):
    """Yield ``TaggedContent`` from ``user\\tcontent_id\\ttag1,tag2`` lines."""
    stop = list(stop_tags)
    for line in _lines(path):
        parts = line.split("\t")
        if len(parts) == 2:
            parts.append("")
        if len(parts) != 3 or not parts[0].strip() or not parts[1].strip():
            if report is not None:
                report.malformed_lines += 1
            continue
        user, content, tags = parts
        yield TaggedContent(user.strip(), content.strip(), normalize_tags(tags.split(","), stop))


def read_recommendations(path, report: BuildReport | None = None):
    for line in _lines(path):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            if report is not None:
                report.malformed_lines += 1
            continue
        yield Recommendation(parts[0].strip(), parts[1].strip())


def write_graph(G: TaggedGraph, path, header: Iterable[str] = ()) -> None:
    """Write the byte-stable edge export; ``header`` lines are emitted as ``# ...`` comments."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        for h in header:
            f.write(f"# {h}\n")
        for line in export_lines(G):
            f.write(line)
            f.write("\n")
    os.replace(tmp, path)


def read_graph(path) -> TaggedGraph:
    edges = {}
    for lineno, line in enumerate(_lines(path), 1):
        parts = line.split("\t")
        if len(parts) == 2:
            parts.append("")
        if len(parts) != 3:
            raise ValueError(f"{path}: malformed edge line {lineno}: {line!r}")
        src, dst, tags = parts
        edges[(src, dst)] = frozenset(normalize_tag(t) for t in tags.split(",") if t.strip())
    return TaggedGraph.from_edges(edges)
