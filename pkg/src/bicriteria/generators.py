"""Instance generators: hardness gadgets and seeded random graphs."""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import GraphError
from .graph import BiGraph
from .spdp import SPParseTree, flatten, leaf, parallel, series


@dataclass(frozen=True)
class PartitionGadget:
    graph: BiGraph
    tree: SPParseTree
    half: Fraction


def partition_gadget(values: Sequence[int]) -> PartitionGadget:
    """Chain of parallel edge pairs encoding an equal-sum split of ``values``.

    Between nodes ``i`` and ``i+1`` sit edge ``2i`` with ``(c, d) = (t_i, 0)``
    and edge ``2i+1`` with ``(c, d) = (0, t_i)``.  A spanning tree of
    d-diameter <= H and c-cost <= H exists exactly when the values split
    evenly, H being half the total.
    """
    if not values:
        raise ValueError("PARTITION instance must be nonempty")
    if any(t < 1 for t in values):
        raise ValueError("PARTITION values must be positive integers")
    parts = []
    for i, t in enumerate(values):
        parts.append(parallel(leaf(i, i + 1, t, 0, 2 * i), leaf(i, i + 1, 0, t, 2 * i + 1)))
    tree = parts[0]
    for p in parts[1:]:
        tree = series(tree, p)
    return PartitionGadget(flatten(tree), tree, Fraction(sum(values), 2))


@dataclass(frozen=True)
class SetCoverGadget:
    graph: BiGraph
    terminals: frozenset[int]
    element_nodes: dict
    set_nodes: tuple[int, ...]
    enforcer: int
    path_nodes: tuple[int, int]


def setcover_gadget(universe: Sequence, sets: Sequence[Sequence], costs: Sequence[int]) -> SetCoverGadget:
    """Steiner instance whose diameter-4 trees are set covers of equal c-cost.

    Nodes: one per element, one per set, an enforcer, and a two-edge path
    hanging off the enforcer.  Set nodes join the enforcer at
    ``(c, d) = (cost, 1)``; elements join their sets at ``(0, 1)``; the path
    edges are ``(0, 1)``.  Terminals are the elements, the enforcer and
    the path nodes.  Pairs the construction prices at infinity are left
    out.
    """
    if not universe or not sets:
        raise ValueError("set cover instance must be nonempty")
    if len(costs) != len(sets):
        raise ValueError("one cost per set")
    covered = set().union(*map(set, sets))
    stray = [x for x in universe if x not in covered]
    if stray:
        raise GraphError(f"elements {stray} lie in no set: no diameter-4 Steiner tree exists")
    elem = {x: i for i, x in enumerate(universe)}
    k, m = len(universe), len(sets)
    set_nodes = tuple(range(k, k + m))
    enforcer = k + m
    p1, p2 = enforcer + 1, enforcer + 2
    edges = []
    for j, cost in enumerate(costs):
        edges.append((enforcer, set_nodes[j], cost, 1))
    for j, members in enumerate(sets):
        for x in members:
            edges.append((elem[x], set_nodes[j], 0, 1))
    edges.append((enforcer, p1, 0, 1))
    edges.append((p1, p2, 0, 1))
    graph = BiGraph.from_edges(p2 + 1, edges)
    terminals = frozenset(elem.values()) | {enforcer, p1, p2}
    return SetCoverGadget(graph, terminals, elem, set_nodes, enforcer, (p1, p2))


def random_graph(n: int, m: int, c_range=(0, 20), d_range=(0, 20), seed: int = 0) -> BiGraph:
    """Connected random multigraph, reproducible per seed.

    A random tree (each node attaches to an earlier one) plus ``m - n + 1``
    extra edges between distinct random endpoints; parallel edges may occur.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if m < n - 1:
        raise ValueError(f"m={m} edges cannot connect n={n} nodes")
    if n == 1 and m > 0:
        raise ValueError("a single node admits no edges (self-loops are forbidden)")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    pairs = []
    for i in range(1, n):
        pairs.append((order[rng.randrange(i)], order[i]))
    for _ in range(m - n + 1):
        u, v = rng.sample(range(n), 2)
        pairs.append((u, v))
    rng.shuffle(pairs)
    edges = [(u, v, rng.randint(*c_range), rng.randint(*d_range)) for u, v in pairs]
    return BiGraph.from_edges(n, edges)


def random_terminals(n: int, k: int, seed: int = 0) -> frozenset[int]:
    rng = random.Random(seed)
    return frozenset(rng.sample(range(n), k))


def random_sp_tree(edge_count: int, c_range=(0, 5), d_range=(0, 5), seed: int = 0) -> SPParseTree:
    """Random two-terminal series-parallel parse tree with ``edge_count`` leaves."""
    if edge_count < 1:
        raise ValueError("need at least one edge")
    rng = random.Random(seed)
    counter = {"node": 2, "edge": 0}

    def build(k: int, s: int, t: int):
        if k == 1:
            eid = counter["edge"]
            counter["edge"] += 1
            return leaf(s, t, rng.randint(*c_range), rng.randint(*d_range), eid)
        split = rng.randint(1, k - 1)
        if rng.random() < 0.5:
            mid = counter["node"]
            counter["node"] += 1
            return series(build(split, s, mid), build(k - split, mid, t))
        return parallel(build(split, s, t), build(k - split, s, t))

    return build(edge_count, 0, 1)


def sp_shapes(edge_count: int):
    """Every binary series/parallel shape with ``edge_count`` leaves.

    Shapes are nested tuples ``("E",)``, ``("S", a, b)``, ``("P", a, b)``.
    """
    if edge_count == 1:
        yield ("E",)
        return
    for split in range(1, edge_count):
        for a in sp_shapes(split):
            for b in sp_shapes(edge_count - split):
                yield ("S", a, b)
                yield ("P", a, b)


def realize_shape(shape, costs) -> SPParseTree:
    """Instantiate a shape with ``costs[i] = (c, d)`` for the i-th leaf."""
    counter = {"node": 2, "edge": 0}

    def build(x, s, t):
        if x[0] == "E":
            eid = counter["edge"]
            counter["edge"] += 1
            c, d = costs[eid]
            return leaf(s, t, c, d, eid)
        if x[0] == "S":
            mid = counter["node"]
            counter["node"] += 1
            return series(build(x[1], s, mid), build(x[2], mid, t))
        return parallel(build(x[1], s, t), build(x[2], s, t))

    return build(shape, 0, 1)
