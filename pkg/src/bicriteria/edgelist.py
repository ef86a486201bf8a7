"""Plain-text instance format.

::

    # comment
    nodes 4 edges 3 terminals 0,3
    0 1 2 1
    1 2 2 1
    2 3 2 1

Edge ids are the 0-based line order of the edge lines.  An empty or
missing terminal list means "all nodes" (a spanning-tree instance).
"""

from __future__ import annotations

from collections.abc import Iterable
from pathlib import Path

from .errors import GraphError
from .graph import BiGraph, check_terminals, ensure_valid


def loads(text: str) -> tuple[BiGraph, frozenset[int]]:
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = _parse_header(line, lineno)
            continue
        parts = line.split()
        if len(parts) != 4:
            raise GraphError(f"line {lineno}: expected 'u v c d', got {line!r}")
        try:
            rows.append(tuple(int(p) for p in parts))
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer field in {line!r}") from None
    if header is None:
        raise GraphError("missing header line 'nodes N edges M terminals ...'")
    n, m, terminals = header
    if len(rows) != m:
        raise GraphError(f"header declares {m} edges, found {len(rows)}")
    graph = ensure_valid(BiGraph.from_edges(n, rows))
    if terminals is None:
        terminals = range(n)
    return graph, check_terminals(graph, terminals)


def _parse_header(line: str, lineno: int):
    tokens = line.split()
    fields = {}
    i = 0
    while i < len(tokens):
        key = tokens[i]
        if key not in ("nodes", "edges", "terminals"):
            raise GraphError(f"line {lineno}: unknown header field {key!r}")
        val = tokens[i + 1] if i + 1 < len(tokens) else ""
        fields[key] = val
        i += 2
    try:
        n = int(fields["nodes"])
        m = int(fields["edges"])
    except (KeyError, ValueError):
        raise GraphError(f"line {lineno}: header needs integer 'nodes' and 'edges'") from None
    raw = fields.get("terminals", "")
    terminals = None
    if raw not in ("", "-", "all"):
        try:
            terminals = [int(t) for t in raw.split(",") if t]
        except ValueError:
            raise GraphError(f"line {lineno}: bad terminal list {raw!r}") from None
    return n, m, terminals


def dumps(graph: BiGraph, terminals: Iterable[int] | None = None, comments: Iterable[str] = ()) -> str:
    """Serialize; edges are written in id order so ids survive a round trip
    only when they are ``0..m-1`` (witness files record original ids in a
    comment)."""
    lines = [f"# {c}" for c in comments]
    terms = sorted(terminals) if terminals is not None else list(range(graph.node_count))
    lines.append(
        f"nodes {graph.node_count} edges {len(graph.edges)} terminals {','.join(map(str, terms))}"
    )
    for e in sorted(graph.edges, key=lambda e: e.id):
        lines.append(f"{e.u} {e.v} {e.c} {e.d}")
    return "\n".join(lines) + "\n"


def read(path) -> tuple[BiGraph, frozenset[int]]:
    return loads(Path(path).read_text())


def write(path, graph: BiGraph, terminals=None, comments=()) -> None:
    Path(path).write_text(dumps(graph, terminals, comments))
