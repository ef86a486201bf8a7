"""Exact unicriterion spanning trees: MST and minimum-diameter spanning tree."""

from __future__ import annotations

import heapq
from fractions import Fraction

from .errors import GraphError
from .graph import (
    BiGraph,
    CostSelector,
    Criterion,
    TreeSolution,
    evaluate_tree,
    tree_value,
)
from .paths import apsp


class DisjointSet:
    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent.setdefault(root, root) != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _require_connected(graph: BiGraph) -> None:
    if not graph.is_connected():
        raise GraphError("graph is disconnected; no spanning tree exists")


def mst(graph: BiGraph, sel: CostSelector) -> TreeSolution:
    """Kruskal; equal weights resolve toward the smaller edge id."""
    _require_connected(graph)
    dsu = DisjointSet(graph.nodes)
    chosen = []
    for e in sorted(graph.edges, key=lambda e: (sel.weight(e), e.id)):
        if dsu.union(e.u, e.v):
            chosen.append(e.id)
    return evaluate_tree(graph, chosen, graph.nodes)


def _spt_from_point(graph: BiGraph, sel: CostSelector, seeds: dict[int, Fraction]) -> list[int]:
    """Shortest-path forest grown from several seeded start distances."""
    dist = dict(seeds)
    parent = {}
    heap = [(d0, x) for x, d0 in sorted(seeds.items())]
    heapq.heapify(heap)
    done = set()
    while heap:
        dx, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for e in graph.adjacency[x]:
            y = e.other(x)
            if y in done:
                continue
            nd = dx + sel.weight(e)
            if y not in dist or nd < dist[y] or (nd == dist[y] and y in parent and e.id < parent[y].id):
                dist[y] = nd
                parent[y] = e
                heapq.heappush(heap, (nd, y))
    return [e.id for e in parent.values()]


def _edge_center(w, du: list, dv: list):
    """Best point on an edge of length ``w`` and its eccentricity.

    The eccentricity is the upper envelope of tents
    ``min(a + du[x], w - a + dv[x])``; its minimum sits at a crossing of an
    increasing and a decreasing line, or at an endpoint.
    """
    def ecc(a):
        return max(min(a + du[x], w - a + dv[x]) for x in range(len(du)))

    candidates = {Fraction(0), Fraction(w)}
    for x in range(len(du)):
        for y in range(len(dv)):
            a = Fraction(w + dv[y] - du[x], 2)
            if 0 <= a <= w:
                candidates.add(a)
    return min((ecc(a), a) for a in candidates)


def min_diameter_spanning_tree(graph: BiGraph, sel: CostSelector) -> TreeSolution:
    """Shortest-path tree rooted at the absolute 1-center, exact.

    Every vertex and every point on every edge is a candidate root; the
    candidate tree with the smallest actual diameter wins, ties going to
    the smaller node id, then the smaller edge id.
    """
    _require_connected(graph)
    if graph.node_count == 1:
        return evaluate_tree(graph, [], [0])
    dist = apsp(graph, sel)
    options = []
    for v in graph.nodes:
        options.append(((0, v), {v: Fraction(0)}))
    for e in sorted(graph.edges, key=lambda e: e.id):
        w = sel.weight(e)
        _, a = _edge_center(w, dist[e.u], dist[e.v])
        if 0 < a < w:
            options.append(((1, e.id), {e.u: a, e.v: w - a}))
    best_key, best_ids = None, None
    for tag, seeds in options:
        ids = _spt_from_point(graph, sel, seeds)
        if len(seeds) == 2:
            e = graph.edge(tag[1])
            # both endpoints seeded: the center edge itself joins the two halves
            ids.append(e.id)
            if len(ids) != graph.node_count - 1:
                continue
        diam = tree_value(graph, ids, Criterion.DIAMETER, sel, graph.nodes)
        key = (diam, tag)
        if best_key is None or key < best_key:
            best_key, best_ids = key, ids
    return evaluate_tree(graph, best_ids, graph.nodes)
