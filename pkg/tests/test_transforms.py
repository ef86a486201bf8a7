import itertools
import logging
import math
import random
from fractions import Fraction

import pytest
from _support import random_instances

from bicriteria.dcst import dcst_solver
from bicriteria.errors import InfeasibleError
from bicriteria.generators import random_graph
from bicriteria.graph import BiGraph, C, Criterion
from bicriteria.oracle import (
    exact_solver,
    min_over_trees,
    opt_given_budget,
    pareto_front,
)
from bicriteria.transforms import (
    DIAMETER_C,
    DIAMETER_D,
    TOTAL_C,
    TOTAL_D,
    BicriteriaSolver,
    SearchTrace,
    UnicriterionSolver,
    bicriteria_equivalence,
    composite_ratio,
    convert_sum,
    parametric_search,
)
from bicriteria.trees import min_diameter_spanning_tree, mst

MST = UnicriterionSolver(lambda g, k, sel: mst(g, sel), Fraction(1), Criterion.TOTAL_COST, "mst")
MDST = UnicriterionSolver(
    lambda g, k, sel: min_diameter_spanning_tree(g, sel), Fraction(1), Criterion.DIAMETER, "mdst"
)
GAMMAS = (Fraction(1, 2), Fraction(1), Fraction(2))


def six_node_graph():
    return random_graph(6, 10, (0, 20), (0, 20), seed=11)


# ---------------------------------------------------------------- equivalence


def test_equivalence_exact_solver_at_min_diameter():
    g = six_node_graph()
    solver = exact_solver(budgeted=TOTAL_C, minimized=DIAMETER_D)
    front = pareto_front(g, None)
    D = front.points[0].first
    tree = bicriteria_equivalence(solver, g, g.nodes, D)
    assert tree.diameter_d <= D
    assert tree.total_c == opt_given_budget(front, DIAMETER_D, D).second


def test_equivalence_slack_budget_gives_unconstrained_optimum():
    g = six_node_graph()
    solver = exact_solver(budgeted=TOTAL_C, minimized=DIAMETER_D)
    tree = bicriteria_equivalence(solver, g, g.nodes, 10**6)
    assert tree.total_c == mst(g, C).total_c


def test_equivalence_impossible_budget():
    g = six_node_graph()
    solver = exact_solver(budgeted=TOTAL_C, minimized=DIAMETER_D)
    D = pareto_front(g, None).points[0].first
    with pytest.raises(InfeasibleError, match="NO SOLUTION"):
        bicriteria_equivalence(solver, g, g.nodes, D - 1)


def test_equivalence_call_count():
    for _, g, terms in random_instances(15, (3, 8), 6, (0, 20), (0, 20)):
        solver = exact_solver(budgeted=TOTAL_C, minimized=DIAMETER_D)
        D = pareto_front(g, None).points[-1].first
        trace = SearchTrace()
        bicriteria_equivalence(solver, g, terms, D, trace)
        hi = sum(e.c for e in g.edges)
        assert len(set(trace.calls)) <= math.ceil(math.log2(hi + 2)) + 1
        assert not trace.fallback


def test_equivalence_meets_swapped_bounds_against_oracle():
    for seed, g, terms in random_instances(30, (3, 10), 6, (0, 20), (0, 20), k_max=5, max_edges=16):
        front = pareto_front(g, terms)
        rng = random.Random(seed)
        for solver in (exact_solver(), dcst_solver(Fraction(1, 2), len(terms))):
            costs = [p.second for p in front.points]
            C_ = rng.randint(min(costs), max(costs))
            tree = bicriteria_equivalence(solver, g, terms, C_)
            opt_diam = opt_given_budget(front, TOTAL_C, C_).first
            assert tree.total_c <= solver.beta * C_
            assert tree.diameter_d <= solver.alpha * opt_diam


def test_equivalence_falls_back_on_non_monotone_solver(caplog):
    g = BiGraph.from_edges(2, [(0, 1, 3, 3)])
    tree = exact_solver().solve(g, frozenset({0, 1}), 100)

    def jittery(graph, terminals, budget):
        # succeeds only at budget 2, below the upper end 3
        return tree if budget == 2 else None

    solver = BicriteriaSolver(jittery, Fraction(1), Fraction(1), DIAMETER_D, TOTAL_C, "jitter")
    trace = SearchTrace()
    with caplog.at_level(logging.WARNING):
        got = bicriteria_equivalence(solver, g, {0, 1}, 3, trace)
    assert got == tree and trace.fallback
    assert "non-monotone solver" in caplog.text


# ---------------------------------------------------------------- convert


def test_convert_exact_solver_eps_one():
    g = random_graph(5, 8, (0, 20), (0, 20), seed=2)
    best = min_over_trees(g, None, lambda t: t.total_c + t.diameter_d)[0]
    tree = convert_sum(exact_solver(), g, g.nodes, 1)
    assert tree.total_c + tree.diameter_d <= 2 * best


def test_convert_when_c_equals_d():
    rng = random.Random(5)
    edges = []
    for u in range(6):
        for v in range(u + 1, 6):
            if rng.random() < 0.6 or v == u + 1:
                w = rng.randint(1, 15)
                edges.append((u, v, w, w))
    g = BiGraph.from_edges(6, edges)
    eps = Fraction(1, 2)
    best = min_over_trees(g, None, lambda t: t.total_c + t.diameter_d)[0]
    tree = convert_sum(exact_solver(), g, g.nodes, eps)
    assert tree.total_c + tree.diameter_d <= (1 + eps) * best


def test_convert_on_a_tree_returns_it():
    g = BiGraph.from_edges(4, [(0, 1, 5, 1), (1, 2, 0, 7), (1, 3, 2, 2)])
    for eps in (Fraction(1, 10), Fraction(1), Fraction(3)):
        assert convert_sum(exact_solver(), g, g.nodes, eps).edge_ids == frozenset({0, 1, 2})


def test_convert_bound_against_oracle():
    for seed, g, terms in random_instances(25, (3, 8), 6, (0, 20), (0, 20), k_max=4):
        best = min_over_trees(g, terms, lambda t: t.total_c + t.diameter_d)[0]
        for eps in (Fraction(1, 2), Fraction(1)):
            for solver in (exact_solver(), dcst_solver(eps, len(terms))):
                tree = convert_sum(solver, g, terms, eps)
                assert tree.total_c + tree.diameter_d <= (1 + eps) * max(solver.alpha, solver.beta) * best


def test_convert_tests_budget_zero():
    g = BiGraph.from_edges(3, [(0, 1, 9, 0), (1, 2, 9, 0), (0, 2, 1, 5)])
    trace = SearchTrace()
    convert_sum(exact_solver(), g, g.nodes, 1, trace)
    assert trace.calls[0] == 0 and 1 in trace.calls


# ---------------------------------------------------------------- parametric search


def test_parametric_mst_c_equals_d():
    rng = random.Random(8)
    edges = [(u, v, w, w) for u, v in [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)] for w in [rng.randint(1, 9)]]
    g = BiGraph.from_edges(4, edges)
    C_ = mst(g, C).total_c
    opt_d = opt_given_budget(pareto_front(g, None, TOTAL_C, TOTAL_D), TOTAL_C, C_).second
    tree = parametric_search(MST, g, g.nodes, C_, 1)
    assert TOTAL_C.value(g, tree) <= 2 * C_
    assert TOTAL_D.value(g, tree) <= 2 * opt_d


def test_parametric_on_a_tree_returns_it():
    g = BiGraph.from_edges(4, [(0, 1, 5, 1), (1, 2, 1, 7), (1, 3, 2, 2)])
    for gamma in GAMMAS:
        assert parametric_search(MST, g, g.nodes, 8, gamma).edge_ids == frozenset({0, 1, 2})


@pytest.mark.parametrize("gamma", GAMMAS)
def test_parametric_diameter_diagonal(gamma):
    for seed, g, _ in random_instances(20, (2, 8), 6, (0, 20), (1, 20), max_edges=14):
        front = pareto_front(g, None, DIAMETER_C, DIAMETER_D)
        rng = random.Random(seed)
        C_ = max(1, rng.randint(front.points[0].first, front.points[-1].first))
        opt_d = opt_given_budget(front, DIAMETER_C, C_).second
        tree = parametric_search(MDST, g, g.nodes, C_, gamma)
        assert DIAMETER_C.value(g, tree) <= (1 + gamma) * C_
        assert DIAMETER_D.value(g, tree) <= (1 + 1 / gamma) * opt_d


def test_composite_ratio_nonincreasing():
    for seed, g, _ in random_instances(10, (2, 8), 6, (0, 20), (0, 20)):
        C_ = max(1, sum(e.c for e in g.edges) // 3)
        for solver in (MST, MDST):
            grid = [Fraction(k, 4) for k in range(1, 200, 13)]
            ratios = [composite_ratio(solver, g, g.nodes, C_, x)[1] for x in grid]
            assert all(a >= b for a, b in itertools.pairwise(ratios))


def test_parametric_call_count():
    for seed, g, _ in random_instances(15, (2, 8), 6, (0, 20), (1, 20)):
        for gamma in GAMMAS:
            trace = SearchTrace()
            parametric_search(MST, g, g.nodes, max(1, mst(g, C).total_c), gamma, trace)
            d_hi = max(1, sum(e.d for e in g.edges))
            top = math.ceil(max(gamma, 1 / gamma) * d_hi * gamma.numerator)
            assert len(set(trace.calls)) <= math.ceil(math.log2(top)) + 1


def test_parametric_zero_opt_d_known_limitation():
    # A d-free tree within budget makes OPT_d = 0; the ratio test already passes at the
    # smallest weight, where the solver may return a tree with positive d-cost.
    g = BiGraph.from_edges(2, [(0, 1, 0, 1), (0, 1, 10, 0)])
    tree = parametric_search(MST, g, g.nodes, 10, 1)
    assert TOTAL_C.value(g, tree) <= 2 * 10
    assert TOTAL_D.value(g, tree) == 1  # exceeds (1 + 1/gamma) * 0


def test_parametric_rejects_bad_parameters():
    g = BiGraph.from_edges(2, [(0, 1, 1, 1)])
    with pytest.raises(ValueError):
        parametric_search(MST, g, g.nodes, 5, 0)
    with pytest.raises(ValueError):
        parametric_search(MST, g, g.nodes, 0, 1)
