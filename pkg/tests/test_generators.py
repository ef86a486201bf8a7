import itertools
import random
from fractions import Fraction

import pytest
from _support import has_equal_split

from bicriteria import edgelist
from bicriteria.errors import GraphError
from bicriteria.generators import (
    partition_gadget,
    random_graph,
    random_sp_tree,
    setcover_gadget,
)
from bicriteria.oracle import opt_given_budget, pareto_front
from bicriteria.spdp import dp_min_cost_given_diameter
from bicriteria.transforms import DIAMETER_D

# the illustration instance: 7 elements, 4 sets
ILLUSTRATION_SETS = [["t1", "t2", "t3"], ["t3", "t4", "t5"], ["t5"], ["t6", "t7"]]
ILLUSTRATION_UNIVERSE = [f"t{i}" for i in range(1, 8)]


def min_cover(universe, sets, costs):
    best = None
    for r in range(1, len(sets) + 1):
        for pick in itertools.combinations(range(len(sets)), r):
            if set(universe) <= set().union(*(set(sets[j]) for j in pick)):
                cost = sum(costs[j] for j in pick)
                best = cost if best is None else min(best, cost)
    return best


# ---------------------------------------------------------------- PARTITION gadget


def test_partition_123_shape():
    gad = partition_gadget([1, 2, 3])
    assert (gad.graph.node_count, len(gad.graph.edges), gad.half) == (4, 6, 3)
    assert [(e.c, e.d) for e in gad.graph.edges] == [(1, 0), (0, 1), (2, 0), (0, 2), (3, 0), (0, 3)]


def test_partition_22_feasible():
    gad = partition_gadget([2, 2])
    assert gad.half == 2
    assert dp_min_cost_given_diameter(gad.tree, 2).total_c <= 2


def test_partition_single_value_half_is_rational():
    gad = partition_gadget([1])
    assert gad.half == Fraction(1, 2)
    assert len(gad.graph.edges) == 2


def test_partition_errors():
    with pytest.raises(ValueError):
        partition_gadget([])
    with pytest.raises(ValueError):
        partition_gadget([1, 0])


def test_partition_equivalence_up_to_twelve_values():
    rng = random.Random(12)
    for _ in range(60):
        values = [rng.randint(1, 9) for _ in range(rng.randint(1, 12))]
        gad = partition_gadget(values)
        feasible = gad.half.denominator == 1 and dp_min_cost_given_diameter(gad.tree, int(gad.half)).total_c <= gad.half
        assert feasible == has_equal_split(values)


# ---------------------------------------------------------------- set-cover gadget


def test_setcover_illustration_layout():
    gad = setcover_gadget(ILLUSTRATION_UNIVERSE, ILLUSTRATION_SETS, [1, 1, 1, 1])
    g = gad.graph
    assert g.node_count == 7 + 4 + 3
    assert len(g.edges) == 4 + 9 + 2
    assert gad.terminals == frozenset(range(7)) | {gad.enforcer, *gad.path_nodes}
    set_edges = [e for e in g.edges if gad.enforcer in (e.u, e.v) and e.other(gad.enforcer) in gad.set_nodes]
    assert all(e.d == 1 for e in set_edges)
    assert all((e.c, e.d) == (0, 1) for e in g.edges if e not in set_edges)


@pytest.mark.parametrize("costs", [[1, 1, 1, 1], [3, 4, 1, 2], [5, 1, 1, 9]])
def test_setcover_illustration_trees_are_covers(costs):
    gad = setcover_gadget(ILLUSTRATION_UNIVERSE, ILLUSTRATION_SETS, costs)
    front = pareto_front(gad.graph, gad.terminals, max_nodes=14)
    point = opt_given_budget(front, DIAMETER_D, 4)
    assert point.second == min_cover(ILLUSTRATION_UNIVERSE, ILLUSTRATION_SETS, costs)


def test_setcover_single_set():
    gad = setcover_gadget(["a", "b", "c"], [["a", "b", "c"]], [5])
    front = pareto_front(gad.graph, gad.terminals)
    assert opt_given_budget(front, DIAMETER_D, 4).second == 5


def test_setcover_random_covers():
    rng = random.Random(3)
    for _ in range(15):
        universe = list(range(rng.randint(1, 4)))
        sets = [rng.sample(universe, rng.randint(1, len(universe))) for _ in range(rng.randint(1, 4))]
        sets.append([universe[-1]])
        if not set(universe) <= set().union(*map(set, sets)):
            sets.append(universe)
        costs = [rng.randint(0, 9) for _ in sets]
        gad = setcover_gadget(universe, sets, costs)
        front = pareto_front(gad.graph, gad.terminals, max_edges=30)
        assert opt_given_budget(front, DIAMETER_D, 4).second == min_cover(universe, sets, costs)


def test_setcover_uncovered_element():
    with pytest.raises(GraphError):
        setcover_gadget(["a", "b"], [["a"]], [1])


# ---------------------------------------------------------------- random graphs


def test_random_graph_deterministic_bytes():
    a = edgelist.dumps(random_graph(6, 10, seed=1))
    b = edgelist.dumps(random_graph(6, 10, seed=1))
    assert a == b
    assert a != edgelist.dumps(random_graph(6, 10, seed=2))


def test_random_tree_when_m_is_n_minus_1():
    g = random_graph(9, 8, seed=4)
    assert g.is_connected() and len(g.edges) == 8


def test_random_graph_zero_costs_and_connectivity():
    for seed in range(20):
        g = random_graph(7, 12, (0, 0), (0, 0), seed)
        assert g.is_connected()
        assert all(e.c == 0 and e.d == 0 for e in g.edges)


def test_random_graph_errors():
    with pytest.raises(ValueError):
        random_graph(5, 3)
    with pytest.raises(ValueError):
        random_graph(0, 0)
    with pytest.raises(ValueError):
        random_graph(1, 1)


def test_random_sp_tree_deterministic():
    assert random_sp_tree(7, seed=9) == random_sp_tree(7, seed=9)
