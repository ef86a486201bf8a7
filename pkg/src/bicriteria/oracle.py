"""Brute-force ground truth for desk-scale instances.

Enumerates every spanning tree (or every inclusion-minimal Steiner
tree), builds exact Pareto fronts, and answers budgeted optimum queries.
Nothing here is clever on purpose: it is the reference the algorithms
are checked against.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import CapExceededError
from .graph import BiGraph, Edge, TreeSolution, evaluate_tree
from .transforms import DIAMETER_D, TOTAL_C, BicriteriaSolver, Objective

MAX_NODES = 12
MAX_EDGES = 20


def _check_caps(graph: BiGraph, max_nodes: int, max_edges: int) -> None:
    if graph.node_count > max_nodes or len(graph.edges) > max_edges:
        raise CapExceededError(
            f"instance has {graph.node_count} nodes / {len(graph.edges)} edges; "
            f"oracle cap is {max_nodes} / {max_edges}"
        )


def _connected(nodes: frozenset[int], edges: list[Edge]) -> bool:
    if len(nodes) <= 1:
        return True
    adj = {x: [] for x in nodes}
    for e in edges:
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(nodes)


def spanning_trees_of(nodes, edges: list[Edge]) -> Iterator[tuple[int, ...]]:
    """Every spanning tree of the multigraph ``(nodes, edges)``, as edge-id tuples.

    Include/exclude recursion over the edge list; an edge is included
    only when it joins two components, and excluded only when the rest
    can still connect everything.
    """
    nodes = frozenset(nodes)
    need = len(nodes) - 1
    if need == 0:
        yield ()
        return
    if not _connected(nodes, edges):
        return

    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    chosen: list[int] = []

    def rec(i: int):
        if len(chosen) == need:
            yield tuple(chosen)
            return
        if i == len(edges):
            return
        e = edges[i]
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            parent[rv] = ru
            chosen.append(e.id)
            yield from rec(i + 1)
            chosen.pop()
            parent[rv] = rv
        # exclusion: the chosen forest plus the remaining edges must still span
        rest = [edges[j] for j in range(i + 1, len(edges))]
        if _connected(nodes, [edges_by_id[j] for j in chosen] + rest):
            yield from rec(i + 1)

    edges_by_id = {e.id: e for e in edges}
    yield from rec(0)


def enumerate_trees(
    graph: BiGraph,
    terminals=None,
    max_nodes: int = MAX_NODES,
    max_edges: int = MAX_EDGES,
) -> Iterator[TreeSolution]:
    """Every inclusion-minimal tree containing ``terminals`` (default: all nodes)."""
    _check_caps(graph, max_nodes, max_edges)
    terminals = frozenset(graph.nodes if terminals is None else terminals)
    steiner = sorted(set(graph.nodes) - terminals)
    for r in range(len(steiner) + 1):
        for extra in combinations(steiner, r):
            nodes = terminals | frozenset(extra)
            sub = [e for e in graph.edges if e.u in nodes and e.v in nodes]
            for ids in spanning_trees_of(nodes, sub):
                if extra and not _leaves_are_terminals(graph, ids, terminals):
                    continue
                yield evaluate_tree(graph, ids, nodes)


def _leaves_are_terminals(graph: BiGraph, ids, terminals) -> bool:
    degree: dict[int, int] = {}
    for i in ids:
        e = graph.edge(i)
        degree[e.u] = degree.get(e.u, 0) + 1
        degree[e.v] = degree.get(e.v, 0) + 1
    return all(x in terminals for x, k in degree.items() if k == 1)


def matrix_tree_count(graph: BiGraph) -> int:
    """Spanning-tree count from the reduced Laplacian determinant."""
    n = graph.node_count
    if n == 1:
        return 1
    lap = np.zeros((n, n))
    for e in graph.edges:
        lap[e.u, e.u] += 1
        lap[e.v, e.v] += 1
        lap[e.u, e.v] -= 1
        lap[e.v, e.u] -= 1
    return round(float(np.linalg.det(lap[1:, 1:])))


@dataclass(frozen=True)
class ParetoPoint:
    first: object
    second: object
    edge_ids: frozenset[int]
    node_set: frozenset[int]

    def tree(self, graph: BiGraph) -> TreeSolution:
        return evaluate_tree(graph, self.edge_ids, self.node_set)


@dataclass(frozen=True)
class ParetoFront:
    """Nondominated ``(first, second)`` values, sorted by ``first``.

    With the default objectives ``first`` is the d-diameter and
    ``second`` the total c-cost.
    """

    points: tuple[ParetoPoint, ...]
    first: Objective = DIAMETER_D
    second: Objective = TOTAL_C

    def pairs(self) -> list[tuple]:
        return [(p.first, p.second) for p in self.points]


def pareto_front(
    graph: BiGraph,
    terminals=None,
    first: Objective = DIAMETER_D,
    second: Objective = TOTAL_C,
    **caps,
) -> ParetoFront:
    rows = []
    for tree in enumerate_trees(graph, terminals, **caps):
        rows.append((first.value(graph, tree), second.value(graph, tree), sorted(tree.edge_ids), tree))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    points = []
    for f, s, _, tree in rows:
        if points and s >= points[-1].second:
            continue
        points.append(ParetoPoint(f, s, tree.edge_ids, tree.node_set))
    return ParetoFront(tuple(points), first, second)


def opt_given_budget(front: ParetoFront, budget_on: Objective, value) -> ParetoPoint | None:
    """Best point whose ``budget_on`` value is at most ``value``; None if none qualifies."""
    if budget_on == front.first:
        ok = [p for p in front.points if p.first <= value]
        return min(ok, key=lambda p: (p.second, p.first)) if ok else None
    if budget_on == front.second:
        ok = [p for p in front.points if p.second <= value]
        return min(ok, key=lambda p: (p.first, p.second)) if ok else None
    raise ValueError(f"{budget_on} is not an axis of this front")


def min_over_trees(graph: BiGraph, terminals, key, **caps):
    """``(value, tree)`` minimizing ``key(tree)`` over all enumerated trees."""
    best = None
    for tree in enumerate_trees(graph, terminals, **caps):
        val = key(tree)
        if best is None or (val, sorted(tree.edge_ids)) < (best[0], sorted(best[1].edge_ids)):
            best = (val, tree)
    return best


def exact_solver(budgeted: Objective = DIAMETER_D, minimized: Objective = TOTAL_C, **caps) -> BicriteriaSolver:
    """An (1, 1) bicriteria solver backed by the Pareto front (fronts are cached per instance)."""
    cache: dict = {}

    def solve(graph, terminals, budget):
        key = (graph, frozenset(terminals))
        if key not in cache:
            cache[key] = pareto_front(graph, terminals, budgeted, minimized, **caps)
        point = opt_given_budget(cache[key], budgeted, budget)
        return None if point is None else point.tree(graph)

    return BicriteriaSolver(solve, Fraction(1), Fraction(1), budgeted, minimized, name="exact")
