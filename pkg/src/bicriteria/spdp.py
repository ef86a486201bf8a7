"""Series-parallel dynamic program for diameter-bounded spanning trees.

A two-terminal series-parallel graph is given by its parse tree.  For
each parse node we keep, per terminal partition, the nondominated
vectors describing spanning forests of that subgraph:

* together (one tree holds both terminals):
  ``(cost, diameter, ecc_s, ecc_t, dist_st)``
* separate (one tree per terminal):
  ``(cost, diameter, ecc_s, ecc_t)``

Every forest component must contain a terminal, since the subgraph meets
the rest of the graph only there.  Any path between vertices of two
composed parts runs through a shared terminal, so the cross distances at
a composition are sums of terminal eccentricities and the diameter is
tracked exactly.  All composition rules are monotone in every
coordinate, which makes dominance pruning safe.

The same table answers both directions: minimum cost under a diameter
cap, and minimum diameter under a cost cap (optionally with rounded
costs, which is what the approximation scheme feeds it).
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import GraphError, InfeasibleError
from .graph import BiGraph, Edge, TreeSolution, evaluate_tree

# ---------------------------------------------------------------------------
# parse trees


@dataclass(frozen=True)
class Leaf:
    edge: Edge

    @property
    def s(self) -> int:
        return self.edge.u

    @property
    def t(self) -> int:
        return self.edge.v

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset((self.edge.u, self.edge.v))


@dataclass(frozen=True)
class Series:
    left: SPParseTree
    right: SPParseTree
    s: int
    t: int
    nodes: frozenset[int] = field(repr=False)


@dataclass(frozen=True)
class Parallel:
    left: SPParseTree
    right: SPParseTree
    s: int
    t: int
    nodes: frozenset[int] = field(repr=False)


SPParseTree = Leaf | Series | Parallel


def leaf(u: int, v: int, c: int, d: int, edge_id: int) -> Leaf:
    if u == v:
        raise GraphError(f"self-loop at node {u}")
    if c < 0 or d < 0:
        raise GraphError("edge costs must be nonnegative")
    return Leaf(Edge(u, v, c, d, edge_id))


def series(left: SPParseTree, right: SPParseTree) -> Series:
    """Join at the one terminal the two parts share."""
    shared = {left.s, left.t} & {right.s, right.t}
    if len(shared) != 1:
        raise GraphError(f"series parts must share exactly one terminal, got {sorted(shared)}")
    (m,) = shared
    if left.nodes & right.nodes != {m}:
        raise GraphError("series parts overlap beyond their join terminal")
    s = left.s if left.t == m else left.t
    t = right.t if right.s == m else right.s
    return Series(left, right, s, t, left.nodes | right.nodes)


def parallel(left: SPParseTree, right: SPParseTree) -> Parallel:
    if {left.s, left.t} != {right.s, right.t}:
        raise GraphError("parallel parts must have the same terminal pair")
    if left.nodes & right.nodes != {left.s, left.t}:
        raise GraphError("parallel parts overlap beyond their terminals")
    return Parallel(left, right, left.s, left.t, left.nodes | right.nodes)


def leaves(tree: SPParseTree) -> list[Leaf]:
    out = []
    stack = [tree]
    while stack:
        x = stack.pop()
        if isinstance(x, Leaf):
            out.append(x)
        else:
            stack.append(x.right)
            stack.append(x.left)
    return out


def flatten(tree: SPParseTree) -> BiGraph:
    """The multigraph a parse tree denotes; nodes must be exactly ``0..N-1``."""
    n = max(tree.nodes) + 1
    if tree.nodes != frozenset(range(n)):
        missing = sorted(set(range(n)) - tree.nodes)
        raise GraphError(f"node labels must be contiguous from 0; missing {missing}")
    edges = sorted((lf.edge for lf in leaves(tree)), key=lambda e: e.id)
    ids = [e.id for e in edges]
    if len(set(ids)) != len(ids):
        raise GraphError("duplicate edge ids in parse tree")
    return BiGraph(n, tuple(edges))


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z]+)|(?P<sym>[(),=])|(?P<num>-?\d+))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise GraphError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group("name"):
            out.append(("name", m.group("name")))
        elif m.group("sym"):
            out.append(("sym", m.group("sym")))
        else:
            out.append(("num", int(m.group("num"))))
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_sp(text: str) -> SPParseTree:
    """Parse ``S(...)``, ``P(...)``, ``E(u,v,c,d)`` expressions.

    ``edge(u,v,c=1,d=1)`` is accepted as a synonym for ``E``.  ``S`` and
    ``P`` take two or more arguments and fold left.  Edge ids are assigned
    in reading order.
    """
    tokens = _tokenize(text)
    pos = 0
    next_id = 0

    def expect(kind, val=None):
        nonlocal pos
        if pos >= len(tokens):
            raise GraphError("unexpected end of parse-tree description")
        k, v = tokens[pos]
        if k != kind or (val is not None and v != val):
            raise GraphError(f"expected {val or kind}, got {v!r}")
        pos += 1
        return v

    def number():
        nonlocal pos
        if pos + 1 < len(tokens) and tokens[pos][0] == "name" and tokens[pos + 1] == ("sym", "="):
            pos += 2
        return expect("num")

    def node():
        nonlocal next_id
        name = expect("name")
        expect("sym", "(")
        if name in ("E", "edge"):
            u = number()
            expect("sym", ",")
            v = number()
            expect("sym", ",")
            c = number()
            expect("sym", ",")
            d = number()
            expect("sym", ")")
            out = leaf(u, v, c, d, next_id)
            next_id += 1
            return out
        if name not in ("S", "P"):
            raise GraphError(f"unknown composition {name!r}")
        parts = [node()]
        while tokens[pos] == ("sym", ","):
            expect("sym", ",")
            parts.append(node())
        expect("sym", ")")
        if len(parts) < 2:
            raise GraphError(f"{name}(...) needs at least two parts")
        combine = series if name == "S" else parallel
        out = parts[0]
        for p in parts[1:]:
            out = combine(out, p)
        return out

    tree = node()
    if pos != len(tokens):
        raise GraphError("trailing input after parse tree")
    return tree


def to_text(tree: SPParseTree) -> str:
    if isinstance(tree, Leaf):
        e = tree.edge
        return f"E({e.u},{e.v},{e.c},{e.d})"
    tag = "S" if isinstance(tree, Series) else "P"
    return f"{tag}({to_text(tree.left)},{to_text(tree.right)})"


# ---------------------------------------------------------------------------
# the table

# together entry: (cost, diam, ecc_s, ecc_t, dist_st, witness)
# separate entry: (cost, diam, ecc_s, ecc_t, witness)
# witness: None | edge id | (witness, witness)


def _dominates(a, b, dims: int) -> bool:
    return all(a[i] <= b[i] for i in range(dims))


def _prune(entries, dims: int):
    entries.sort(key=lambda e: e[:dims])
    kept = []
    for e in entries:
        if not any(_dominates(k, e, dims) for k in kept):
            kept.append(e)
    return kept


def _flip_together(entries):
    return [(c, dm, et, es, st, w) for (c, dm, es, et, st, w) in entries]


def _flip_separate(entries):
    return [(c, dm, et, es, w) for (c, dm, es, et, w) in entries]


@dataclass
class DPTable:
    """Nondominated forest vectors of one parse node, oriented ``(s, t)``."""

    s: int
    t: int
    together: list
    separate: list

    def oriented(self, s: int, t: int) -> DPTable:
        if (s, t) == (self.s, self.t):
            return self
        if (s, t) != (self.t, self.s):
            raise GraphError(f"cannot orient table ({self.s},{self.t}) as ({s},{t})")
        return DPTable(s, t, _flip_together(self.together), _flip_separate(self.separate))

    def lookup(self, ecc_s, ecc_t, dist_st=None, diameter=None):
        """Cheapest forest within the given bounds; ``math.inf`` if none.

        With ``dist_st`` set this reads the together partition, otherwise
        the separate one.  ``diameter=None`` leaves the diameter unbounded.
        """
        dmax = math.inf if diameter is None else diameter
        if dist_st is None:
            vals = [e[0] for e in self.separate if e[1] <= dmax and e[2] <= ecc_s and e[3] <= ecc_t]
        else:
            vals = [
                e[0]
                for e in self.together
                if e[1] <= dmax and e[2] <= ecc_s and e[3] <= ecc_t and e[4] <= dist_st
            ]
        return min(vals, default=math.inf)


@dataclass(frozen=True)
class _Limits:
    costs: dict | None
    c_cap: int | None
    d_cap: int | None

    def ok(self, cost, diam) -> bool:
        return (self.c_cap is None or cost <= self.c_cap) and (self.d_cap is None or diam <= self.d_cap)


def _leaf_table(lf: Leaf, lim: _Limits) -> DPTable:
    e = lf.edge
    cost = e.c if lim.costs is None else lim.costs[e.id]
    together = [(cost, e.d, e.d, e.d, e.d, e.id)] if lim.ok(cost, e.d) else []
    return DPTable(e.u, e.v, together, [(0, 0, 0, 0, None)])


def _series_table(node: Series, a: DPTable, b: DPTable, lim: _Limits) -> DPTable:
    m = ({a.s, a.t} & {b.s, b.t}).pop()
    a = a.oriented(node.s, m)
    b = b.oriented(m, node.t)
    tog, sep = [], []
    for c1, d1, s1, t1, st1, w1 in a.together:
        for c2, d2, s2, t2, st2, w2 in b.together:
            diam = max(d1, d2, t1 + s2)
            if lim.ok(c1 + c2, diam):
                tog.append((c1 + c2, diam, max(s1, st1 + s2), max(t2, st2 + t1), st1 + st2, (w1, w2)))
        for c2, d2, s2, t2, w2 in b.separate:
            diam = max(d1, d2, t1 + s2)
            if lim.ok(c1 + c2, diam):
                sep.append((c1 + c2, diam, max(s1, st1 + s2), t2, (w1, w2)))
    for c1, d1, s1, t1, w1 in a.separate:
        for c2, d2, s2, t2, st2, w2 in b.together:
            diam = max(d1, d2, t1 + s2)
            if lim.ok(c1 + c2, diam):
                sep.append((c1 + c2, diam, s1, max(t2, st2 + t1), (w1, w2)))
    # separate + separate strands the join terminal's tree: never part of a spanning tree
    return DPTable(node.s, node.t, _prune(tog, 5), _prune(sep, 4))


def _parallel_table(node: Parallel, a: DPTable, b: DPTable, lim: _Limits) -> DPTable:
    a = a.oriented(node.s, node.t)
    b = b.oriented(node.s, node.t)
    tog, sep = [], []

    def join(tree_side, split_side, w):
        c1, d1, s1, t1, st1, _ = tree_side
        c2, d2, s2, t2, _ = split_side
        diam = max(d1, d2, s1 + s2, t1 + t2, s2 + st1 + t2)
        if lim.ok(c1 + c2, diam):
            tog.append((c1 + c2, diam, max(s1, s2, st1 + t2), max(t1, t2, st1 + s2), st1, w))

    for x in a.together:
        for y in b.separate:
            join(x, y, (x[5], y[4]))
    for x in b.together:
        for y in a.separate:
            join(x, y, (y[4], x[5]))
    for c1, d1, s1, t1, w1 in a.separate:
        for c2, d2, s2, t2, w2 in b.separate:
            diam = max(d1, d2, s1 + s2, t1 + t2)
            if lim.ok(c1 + c2, diam):
                sep.append((c1 + c2, diam, max(s1, s2), max(t1, t2), (w1, w2)))
    # together + together would close a cycle through both terminals
    return DPTable(node.s, node.t, _prune(tog, 5), _prune(sep, 4))


def build_table(tree: SPParseTree, costs=None, c_cap=None, d_cap=None) -> DPTable:
    """Bottom-up table for ``tree``.

    ``costs`` optionally replaces each edge's c-cost (keyed by edge id);
    ``c_cap`` / ``d_cap`` drop forests whose cost / diameter exceed them.
    """
    lim = _Limits(costs, c_cap, d_cap)
    done: dict[int, DPTable] = {}
    stack = [(tree, False)]
    while stack:
        x, expanded = stack.pop()
        if isinstance(x, Leaf):
            done[id(x)] = _leaf_table(x, lim)
        elif expanded:
            a, b = done.pop(id(x.left)), done.pop(id(x.right))
            build = _series_table if isinstance(x, Series) else _parallel_table
            done[id(x)] = build(x, a, b, lim)
        else:
            stack.append((x, True))
            stack.append((x.right, False))
            stack.append((x.left, False))
    return done[id(tree)]


def witness_edges(w) -> list[int]:
    out = []
    stack = [w]
    while stack:
        x = stack.pop()
        if x is None:
            continue
        if isinstance(x, tuple):
            stack.extend(x)
        else:
            out.append(x)
    return sorted(out)


# ---------------------------------------------------------------------------
# exact solvers


def _spanning(graph: BiGraph, entry) -> TreeSolution:
    return evaluate_tree(graph, witness_edges(entry[5]), graph.nodes)


def dp_min_cost_given_diameter(tree: SPParseTree, D: int) -> TreeSolution:
    """Cheapest spanning tree with d-diameter at most ``D``."""
    if D < 0:
        raise ValueError("D must be nonnegative")
    graph = flatten(tree)
    table = build_table(tree, d_cap=D)
    if not table.together:
        raise InfeasibleError(f"no spanning tree of d-diameter <= {D}")
    best = min(table.together, key=lambda e: (e[0], e[1], witness_edges(e[5])))
    return _spanning(graph, best)


def dp_min_diameter_given_cost(tree: SPParseTree, C: int, costs=None) -> TreeSolution:
    """Smallest-diameter spanning tree with (optionally rounded) c-cost at most ``C``."""
    if C < 0:
        raise ValueError("C must be nonnegative")
    graph = flatten(tree)
    table = build_table(tree, costs=costs, c_cap=C)
    if not table.together:
        raise InfeasibleError(f"no spanning tree of c-cost <= {C}")
    best = min(table.together, key=lambda e: (e[1], e[0], witness_edges(e[5])))
    return _spanning(graph, best)


# ---------------------------------------------------------------------------
# approximation scheme


class Verdict(enum.Enum):
    LOW = "LOW"
    HIGH = "HIGH"


def _unit_fraction(eps) -> Fraction:
    eps = Fraction(eps)
    if eps <= 0 or (1 / eps).denominator != 1:
        raise ValueError("eps must be 1/k for a positive integer k")
    return eps


def rounded_costs(graph: BiGraph, lam: Fraction, eps: Fraction) -> dict[int, int]:
    """Each c-cost scaled down by ``lam * eps / (n - 1)`` and floored."""
    scale = Fraction(lam) * eps / (graph.node_count - 1)
    return {e.id: math.floor(e.c / scale) for e in graph.edges}


def budget_sweep(table: DPTable, budget: int):
    """What the min-diameter solver returns at each budget ``0..budget``.

    Yields ``(C, entry)`` with ``entry`` the together state of smallest
    diameter among those with cost at most ``C`` (None before any fits).
    """
    ordered = sorted(table.together, key=lambda e: (e[0], e[1], witness_edges(e[5])))
    best = None
    i = 0
    for C in range(budget + 1):
        while i < len(ordered) and ordered[i][0] <= C:
            if best is None or (ordered[i][1], ordered[i][0]) < (best[1], best[0]):
                best = ordered[i]
            i += 1
        yield C, best


def test_procedure(tree: SPParseTree, D: int, lam, eps) -> Verdict:
    """LOW when some rounded budget in ``[0, (n-1)/eps]`` admits a D-bounded tree.

    Guaranteed LOW when the optimum is at most ``lam``, and HIGH when it
    exceeds ``lam * (1 + eps)``; in between either answer may come back.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    eps = _unit_fraction(eps)
    graph = flatten(tree)
    budget = int((graph.node_count - 1) / eps)
    table = build_table(tree, costs=rounded_costs(graph, lam, eps), c_cap=budget)
    for _, entry in budget_sweep(table, budget):
        if entry is not None and entry[1] <= D:
            return Verdict.LOW
    return Verdict.HIGH


test_procedure.__test__ = False  # keep pytest from collecting it


@dataclass
class FPASResult:
    tree: TreeSolution
    lower: Fraction
    upper: Fraction
    tests: int


def fpas_dcst(tree: SPParseTree, D: int, eps) -> FPASResult:
    """Spanning tree with d-diameter <= D and c-cost <= (1 + eps) * optimum.

    Brackets the optimum by approximate bisection with
    :func:`test_procedure` until ``upper < 2 * lower``, then sweeps the
    rounded budgets ``[0, 2(n-1)/eps]`` at scale ``lower`` and keeps the
    cheapest D-bounded tree by true c-cost.  The bisection runs its tests
    at accuracy ``min(eps, 1/4)`` so the upper bound always shrinks.
    """
    eps = _unit_fraction(eps)
    if D < 0:
        raise ValueError("D must be nonnegative")
    graph = flatten(tree)
    try:
        free = dp_min_diameter_given_cost(tree, 0)
        if free.diameter_d <= D:
            return FPASResult(free, Fraction(0), Fraction(0), 0)
    except InfeasibleError:
        pass

    search_eps = min(eps, Fraction(1, 4))
    lower, upper = Fraction(1), Fraction(sum(e.c for e in graph.edges))
    tests = 0
    while upper >= 2 * lower:
        lam = (lower + upper) / 2
        tests += 1
        if test_procedure(tree, D, lam, search_eps) is Verdict.HIGH:
            lower = lam
        else:
            upper = lam * (1 + search_eps)

    budget = int(2 * (graph.node_count - 1) / eps)
    table = build_table(tree, costs=rounded_costs(graph, lower, eps), c_cap=budget)
    best = None
    for _, entry in budget_sweep(table, budget):
        if entry is None or entry[1] > D:
            continue
        cand = _spanning(graph, entry)
        if best is None or (cand.total_c, cand.diameter_d, cand.sorted_edges()) < (
            best.total_c,
            best.diameter_d,
            best.sorted_edges(),
        ):
            best = cand
    if best is None:
        raise InfeasibleError(f"no spanning tree of d-diameter <= {D}")
    return FPASResult(best, lower, upper, tests)
