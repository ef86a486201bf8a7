"""Cluster-merging approximation for diameter-bounded minimum-cost Steiner trees.

Each terminal starts as its own cluster.  Every phase connects cluster
centers pairwise by cheap D-bounded paths chosen through a minimum-weight
matching, halving the cluster count.  After ceil(log2 |K|) phases the
single remaining cluster is replaced by its shortest-path tree (d-cost)
from its center.  With exact paths and exact matching the result has
d-diameter at most 2 ceil(log2 |K|) D and c-cost at most
(1 + eps) ceil(log2 |K|) times the cheapest D-bounded Steiner tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InfeasibleError
from .graph import BiGraph, TreeSolution, check_terminals, evaluate_tree, tree_distances
from .graph import D as D_COST
from .matching import EXACT_THRESHOLD, MatchingResult, min_weight_matching
from .paths import (
    INF,
    PathResult,
    dijkstra,
    restricted_shortest_path_exact,
    restricted_shortest_path_fptas,
)
from .transforms import DIAMETER_D, TOTAL_C, BicriteriaSolver

EXACT_PATH_LIMIT = 10**4


@dataclass(frozen=True)
class Cluster:
    nodes: frozenset[int]
    edge_ids: frozenset[int]
    center: int


@dataclass(frozen=True)
class PhaseState:
    index: int
    clusters: tuple[Cluster, ...]


@dataclass(frozen=True)
class AuxiliaryGraph:
    centers: tuple[int, ...]
    weights: tuple[tuple, ...]
    paths: dict


@dataclass
class DCSTResult:
    tree: TreeSolution
    phases: list[PhaseState] = field(default_factory=list)
    matching_weights: list = field(default_factory=list)
    exact_matching: bool = True
    path_mode: str = "exact"

    @property
    def phase_count(self) -> int:
        return len(self.phases) - 1

    def guarantee(self, eps) -> tuple[Fraction, Fraction]:
        """Promised (diameter factor on D, cost factor on OPT_c).

        A greedy matching doubles the cost factor.
        """
        rounds = self.phase_count
        cost = (1 + Fraction(eps)) * rounds
        if not self.exact_matching:
            cost *= 2
        return Fraction(2 * rounds), cost


def phase_bound(k: int) -> int:
    """ceil(log2 k) for k >= 1."""
    return (k - 1).bit_length()


def _default_mode(D: int) -> str:
    return "exact" if D <= EXACT_PATH_LIMIT else "fptas"


def _path(graph, s, t, D, eps, path_mode) -> PathResult:
    if path_mode == "exact":
        return restricted_shortest_path_exact(graph, s, t, D)
    if path_mode == "fptas":
        return restricted_shortest_path_fptas(graph, s, t, D, eps)
    raise ValueError(f"unknown path mode {path_mode!r}")


def build_auxiliary_graph(graph: BiGraph, clusters, D: int, eps, path_mode: str = "exact") -> AuxiliaryGraph:
    """Complete graph on cluster centers weighted by D-bounded path c-costs.

    Pairs without a D-bounded path get ``math.inf`` and no witness.
    """
    if len(clusters) < 2:
        raise ValueError("auxiliary graph needs at least two clusters")
    centers = tuple(cl.center for cl in clusters)
    k = len(centers)
    weights = [[INF] * k for _ in range(k)]
    paths = {}
    for i in range(k):
        weights[i][i] = 0
        for j in range(i + 1, k):
            try:
                p = _path(graph, centers[i], centers[j], D, eps, path_mode)
            except InfeasibleError:
                continue
            weights[i][j] = weights[j][i] = p.cost_c
            paths[i, j] = p
    return AuxiliaryGraph(centers, tuple(tuple(r) for r in weights), paths)


def merge_phase(state: PhaseState, matching: MatchingResult, paths: dict) -> PhaseState:
    """Merge matched cluster pairs along their witness paths.

    The merged center is the smaller of the two centers; an unmatched
    cluster carries over unchanged.  Output clusters are ordered by center.
    """
    clusters = state.clusters
    matched = set()
    merged = []
    for i, j in matching.pairs:
        a, b = clusters[i], clusters[j]
        p = paths[min(i, j), max(i, j)]
        merged.append(
            Cluster(
                a.nodes | b.nodes | frozenset(p.nodes),
                a.edge_ids | b.edge_ids | frozenset(p.edge_ids),
                min(a.center, b.center),
            )
        )
        matched.update((i, j))
    merged.extend(cl for idx, cl in enumerate(clusters) if idx not in matched)
    merged.sort(key=lambda cl: cl.center)
    return PhaseState(state.index + 1, tuple(merged))


def cluster_radius(graph: BiGraph, cluster: Cluster) -> int:
    """Largest d-distance from the center to a cluster node, inside the cluster."""
    dist = tree_distances(graph, cluster.edge_ids, cluster.center)
    missing = cluster.nodes - dist.keys()
    if missing:
        raise AssertionError(f"cluster nodes {sorted(missing)} unreachable from center")
    return max(dist[x] for x in cluster.nodes)


def _shortest_path_tree(graph: BiGraph, cluster: Cluster) -> list[int]:
    sub = graph.subgraph(cluster.edge_ids)
    _, parent = dijkstra(sub, cluster.center, D_COST)
    return sorted(e.id for e in parent.values())


def dcst(
    graph: BiGraph,
    terminals,
    D: int,
    eps=Fraction(1, 2),
    path_mode: str | None = None,
    exact_threshold: int = EXACT_THRESHOLD,
) -> DCSTResult:
    """Diameter-constrained Steiner tree by pairwise cluster merging.

    Raises :class:`InfeasibleError` when a phase cannot pair up all
    clusters with D-bounded paths; ``certificate`` lists the center pairs
    that had none.
    """
    if D < 0:
        raise ValueError("diameter bound D must be nonnegative")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    terminals = check_terminals(graph, terminals)
    path_mode = path_mode or _default_mode(D)

    state = PhaseState(0, tuple(Cluster(frozenset([t]), frozenset(), t) for t in sorted(terminals)))
    result = DCSTResult(tree=None, phases=[state], path_mode=path_mode)
    while len(state.clusters) > 1:
        aux = build_auxiliary_graph(graph, state.clusters, D, eps, path_mode)
        matching = min_weight_matching(aux.weights, exact_threshold)
        k = len(state.clusters)
        if len(matching.pairs) < k // 2:
            missing = [
                (aux.centers[i], aux.centers[j])
                for i in range(k)
                for j in range(i + 1, k)
                if aux.weights[i][j] == INF
            ]
            raise InfeasibleError(
                f"phase {state.index + 1}: centers cannot be paired by {D}-bounded paths",
                certificate=missing,
            )
        result.exact_matching &= matching.is_exact
        result.matching_weights.append(matching.total_weight)
        state = merge_phase(state, matching, aux.paths)
        result.phases.append(state)

    final = state.clusters[0]
    result.tree = evaluate_tree(graph, _shortest_path_tree(graph, final), [final.center])
    return result


def dcst_solver(eps=Fraction(1, 2), terminal_count: int = 2, path_mode: str | None = None) -> BicriteriaSolver:
    """DCST packaged for the black-box transforms: budget on d-diameter, minimize c-cost."""
    rounds = max(1, phase_bound(terminal_count))
    eps = Fraction(eps)

    def solve(graph, terminals, budget):
        if budget < 0:
            return None
        return dcst(graph, terminals, budget, eps, path_mode).tree

    return BicriteriaSolver(
        solve,
        alpha=Fraction(2 * rounds),
        beta=(1 + eps) * rounds,
        budgeted=DIAMETER_D,
        minimized=TOTAL_C,
        name="dcst",
    )
