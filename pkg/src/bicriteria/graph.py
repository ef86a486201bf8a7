"""Dual-cost multigraphs and exact tree metrics.

Every edge carries two nonnegative integer costs: ``c`` (construction)
and ``d`` (delay).  Parallel edges are allowed and are told apart by
their ``id``.  All arithmetic here is exact; nothing is floated.
"""

from __future__ import annotations

import enum
import heapq
from collections import defaultdict, deque
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

from .errors import CostOverflowError, GraphError, NotATreeError

MAX_COST = 2**63 - 1

Number = int | Fraction


class Edge(NamedTuple):
    u: int
    v: int
    c: int
    d: int
    id: int

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


@dataclass(frozen=True)
class BiGraph:
    """Undirected multigraph on nodes ``0..node_count-1``.

    Construction does not validate; call :func:`validate` (or
    :func:`ensure_valid`) on untrusted input.
    """

    node_count: int
    edges: tuple[Edge, ...]

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable) -> BiGraph:
        """Build from ``(u, v, c, d)`` tuples; ids follow input order."""
        out = []
        for i, e in enumerate(edges):
            if len(e) == 5:
                out.append(Edge(*e))
            else:
                u, v, c, d = e
                out.append(Edge(u, v, c, d, i))
        return cls(node_count, tuple(out))

    @cached_property
    def by_id(self) -> dict[int, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def adjacency(self) -> dict[int, list[Edge]]:
        adj: dict[int, list[Edge]] = {v: [] for v in range(self.node_count)}
        for e in self.edges:
            adj.setdefault(e.u, []).append(e)
            adj.setdefault(e.v, []).append(e)
        return adj

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    def edge(self, edge_id: int) -> Edge:
        try:
            return self.by_id[edge_id]
        except KeyError:
            raise GraphError(f"unknown edge id {edge_id}") from None

    def subgraph(self, edge_ids: Iterable[int]) -> BiGraph:
        """Same node set, restricted edge set (ids preserved)."""
        keep = set(edge_ids)
        return BiGraph(self.node_count, tuple(e for e in self.edges if e.id in keep))

    def is_connected(self, nodes: Iterable[int] | None = None) -> bool:
        """True when ``nodes`` (default: all) lie in one component."""
        targets = set(self.nodes if nodes is None else nodes)
        if len(targets) <= 1:
            return True
        start = next(iter(targets))
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for e in self.adjacency.get(x, ()):
                y = e.other(x)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return targets <= seen


@dataclass(frozen=True)
class CostSelector:
    """Per-edge weight ``a*c(e) + b*d(e)`` with exact rational coefficients."""

    a: Fraction = Fraction(1)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a < 0 or self.b < 0:
            raise ValueError("composite coefficients must be nonnegative")

    @classmethod
    def composite(cls, a, b) -> CostSelector:
        return cls(Fraction(a), Fraction(b))

    def weight(self, e: Edge) -> Number:
        w = self.a * e.c + self.b * e.d
        return w.numerator if w.denominator == 1 else w

    def __repr__(self) -> str:
        if self == C:
            return "C"
        if self == D:
            return "D"
        return f"CostSelector({self.a}, {self.b})"


C = CostSelector(Fraction(1), Fraction(0))
D = CostSelector(Fraction(0), Fraction(1))


class Criterion(enum.Enum):
    TOTAL_COST = "total"
    DIAMETER = "diameter"


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(graph: BiGraph) -> ValidationReport:
    report = ValidationReport()
    if not isinstance(graph.node_count, int) or graph.node_count < 1:
        report.violations.append(f"node_count must be a positive integer, got {graph.node_count!r}")
    seen_ids: set[int] = set()
    for e in graph.edges:
        if e.u == e.v:
            report.violations.append(f"self-loop on node {e.u} (edge {e.id})")
        for x in (e.u, e.v):
            if not (0 <= x < graph.node_count):
                report.violations.append(f"dangling endpoint {x} (edge {e.id})")
        for name, val in (("c", e.c), ("d", e.d)):
            if not isinstance(val, int) or isinstance(val, bool):
                report.violations.append(f"non-integer cost {name}={val!r} (edge {e.id})")
            elif val < 0:
                report.violations.append(f"negative cost {name}={val} (edge {e.id})")
            elif val > MAX_COST:
                report.violations.append(f"cost {name}={val} exceeds 64-bit range (edge {e.id})")
        if e.id in seen_ids:
            report.violations.append(f"duplicate edge id {e.id}")
        seen_ids.add(e.id)
    return report


def ensure_valid(graph: BiGraph) -> BiGraph:
    report = validate(graph)
    if not report.ok:
        raise GraphError("; ".join(report.violations))
    return graph


def check_terminals(graph: BiGraph, terminals: Iterable[int]) -> frozenset[int]:
    """Return ``terminals`` as a frozenset after checking membership."""
    k = frozenset(terminals)
    if not k:
        raise GraphError("terminal set must be nonempty")
    bad = sorted(t for t in k if not (0 <= t < graph.node_count))
    if bad:
        raise GraphError(f"terminals not in graph: {bad}")
    return k


def checked_sum(values: Iterable[Number]) -> Number:
    total = 0
    for v in values:
        total += v
    if total > MAX_COST:
        raise CostOverflowError(f"aggregate cost {total} exceeds 64-bit range")
    return total


@dataclass(frozen=True)
class TreeSolution:
    edge_ids: frozenset[int]
    total_c: int
    diameter_d: int
    node_set: frozenset[int]

    def sorted_edges(self) -> list[int]:
        return sorted(self.edge_ids)


def _tree_adjacency(graph: BiGraph, edge_ids, nodes) -> tuple[dict[int, list[Edge]], frozenset[int]]:
    ids = list(edge_ids)
    if len(set(ids)) != len(ids):
        raise NotATreeError("repeated edge id")
    edges = [graph.edge(i) for i in ids]
    node_set = set(nodes or ())
    for e in edges:
        node_set.update((e.u, e.v))
    if not node_set:
        raise NotATreeError("empty tree needs at least one node")
    if len(edges) != len(node_set) - 1:
        raise NotATreeError(
            f"{len(edges)} edges over {len(node_set)} nodes cannot form a tree"
        )
    adj: dict[int, list[Edge]] = {x: [] for x in node_set}
    for e in edges:
        adj[e.u].append(e)
        adj[e.v].append(e)
    # n-1 edges plus connectivity implies acyclic
    start = min(node_set)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for e in adj[x]:
            y = e.other(x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    if len(seen) != len(node_set):
        raise NotATreeError("edge set is disconnected or contains a cycle")
    return adj, frozenset(node_set)


def _farthest(adj: dict[int, list[Edge]], src: int, sel: CostSelector) -> tuple[int, Number]:
    best, best_dist = src, 0
    dist = {src: 0}
    stack = [src]
    while stack:
        x = stack.pop()
        for e in adj[x]:
            y = e.other(x)
            if y not in dist:
                dist[y] = dist[x] + sel.weight(e)
                if dist[y] > best_dist or (dist[y] == best_dist and y < best):
                    best, best_dist = y, dist[y]
                stack.append(y)
    return best, best_dist


def _diameter(adj, node_set, sel: CostSelector) -> Number:
    # two sweeps are exact on trees with nonnegative weights
    far, _ = _farthest(adj, min(node_set), sel)
    _, diam = _farthest(adj, far, sel)
    return diam


def tree_value(graph: BiGraph, edge_ids, criterion: Criterion, sel: CostSelector, nodes=None) -> Number:
    """Objective value of a tree under ``criterion`` measured with ``sel``."""
    adj, node_set = _tree_adjacency(graph, edge_ids, nodes)
    if criterion is Criterion.TOTAL_COST:
        return checked_sum(sel.weight(graph.edge(i)) for i in edge_ids)
    return _diameter(adj, node_set, sel)


def evaluate_tree(graph: BiGraph, edge_ids, nodes=None) -> TreeSolution:
    """Exact ``total_c`` and ``diameter_d`` of a tree given by edge ids.

    ``nodes`` may add isolated nodes; this is only legal for the
    single-node tree with no edges.
    """
    adj, node_set = _tree_adjacency(graph, edge_ids, nodes)
    total = checked_sum(graph.edge(i).c for i in edge_ids)
    diam = _diameter(adj, node_set, D)
    if diam > MAX_COST:
        raise CostOverflowError(f"diameter {diam} exceeds 64-bit range")
    return TreeSolution(frozenset(edge_ids), total, diam, node_set)


def steiner_metrics(graph: BiGraph, tree: TreeSolution, terminals) -> tuple[int, int]:
    """``(total_c, diameter_d)`` of a Steiner tree; diameter is over all tree nodes."""
    missing = sorted(set(terminals) - tree.node_set)
    if missing:
        raise GraphError(f"tree does not cover terminals {missing}")
    again = evaluate_tree(graph, tree.edge_ids, tree.node_set)
    return again.total_c, again.diameter_d


def tree_distances(graph: BiGraph, edge_ids, root: int, sel: CostSelector = D) -> dict[int, Number]:
    """Distances from ``root`` along the subgraph ``edge_ids`` (need not be a tree)."""
    adj: dict[int, list[Edge]] = defaultdict(list)
    for i in edge_ids:
        e = graph.edge(i)
        adj[e.u].append(e)
        adj[e.v].append(e)
    dist = {root: 0}
    heap = [(0, root)]
    while heap:
        dx, x = heapq.heappop(heap)
        if dx > dist[x]:
            continue
        for e in adj[x]:
            y = e.other(x)
            nd = dx + sel.weight(e)
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist
