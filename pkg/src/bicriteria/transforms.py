"""Black-box bicriteria transforms.

* :func:`bicriteria_equivalence` turns an (alpha, beta) solver for
  "budget A, minimize B" into a (beta, alpha) solver for "budget B,
  minimize A" by bisecting on the A budget.
* :func:`convert_sum` minimizes A + B by sweeping geometric budgets.
* :func:`parametric_search` builds a ((1+g)rho, (1+1/g)rho) solver for
  two same-type objectives from a single-cost rho-approximation by
  bisecting on the weight of a composite cost.

Budgets and thresholds are compared in exact rational arithmetic.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InfeasibleError
from .graph import (
    BiGraph,
    C,
    CostSelector,
    Criterion,
    D,
    Number,
    TreeSolution,
    tree_value,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Objective:
    """A criterion measured under one edge-cost selector."""

    criterion: Criterion
    sel: CostSelector

    def value(self, graph: BiGraph, tree: TreeSolution) -> Number:
        return tree_value(graph, tree.edge_ids, self.criterion, self.sel, tree.node_set)

    def __str__(self) -> str:
        return f"{self.criterion.value}[{self.sel!r}]"


DIAMETER_D = Objective(Criterion.DIAMETER, D)
DIAMETER_C = Objective(Criterion.DIAMETER, C)
TOTAL_C = Objective(Criterion.TOTAL_COST, C)
TOTAL_D = Objective(Criterion.TOTAL_COST, D)


@dataclass(frozen=True)
class BicriteriaSolver:
    """``solve(graph, terminals, budget)`` bounds ``budgeted`` and minimizes ``minimized``.

    Promise: the returned tree has budgeted value at most ``alpha * budget``
    and minimized value at most ``beta`` times the best among trees whose
    budgeted value is at most ``budget``.  ``solve`` returns None (or raises
    :class:`InfeasibleError`) when it finds nothing.
    """

    solve: Callable[[BiGraph, frozenset, int], TreeSolution | None]
    alpha: Fraction
    beta: Fraction
    budgeted: Objective
    minimized: Objective
    name: str = "solver"


@dataclass(frozen=True)
class UnicriterionSolver:
    """``solve(graph, terminals, sel)`` rho-approximately minimizes ``criterion`` under ``sel``."""

    solve: Callable[[BiGraph, frozenset, CostSelector], TreeSolution]
    rho: Fraction
    criterion: Criterion
    name: str = "solver"


@dataclass
class SearchTrace:
    """Budgets probed by a transform, for call-count and monotonicity checks."""

    calls: list = field(default_factory=list)
    fallback: bool = False


def _call(solver, graph, terminals, budget, trace):
    trace.calls.append(budget)
    try:
        return solver.solve(graph, terminals, budget)
    except InfeasibleError:
        return None


def _bisect(good: Callable[[int], bool], lo: int, hi: int) -> int:
    """Smallest-gap search: ``good(lo)`` assumed False, ``good(hi)`` True.

    Returns ``x`` with ``good(x)`` False and ``good(x+1)`` True.  Only the
    endpoint invariant is used, so a non-monotone ``good`` still yields a
    valid adjacent pair.
    """
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if good(mid):
            hi = mid
        else:
            lo = mid
    return lo


def _upper_bound(graph: BiGraph, sel: CostSelector) -> int:
    """Sum of all edge weights under ``sel``: bounds any tree's total or diameter."""
    return math.ceil(sum(sel.weight(e) for e in graph.edges))


def _powers_fallback(good, hi: int, trace: SearchTrace) -> int | None:
    trace.fallback = True
    x = 1
    while x < hi:
        if good(x):
            return x
        x *= 2
    return None


def bicriteria_equivalence(
    solver: BicriteriaSolver,
    graph: BiGraph,
    terminals,
    bound: int,
    trace: SearchTrace | None = None,
) -> TreeSolution:
    """Bound ``solver.minimized`` by ``beta * bound``, keep ``solver.budgeted`` near optimal.

    Finds an A-budget ``x`` where the solver's B-value exceeds
    ``beta * bound`` at ``x`` but not at ``x + 1`` and returns the tree
    at ``x + 1``.  Budget -1 is treated as failing without a call.
    """
    trace = trace if trace is not None else SearchTrace()
    terminals = frozenset(terminals)
    limit = solver.beta * bound
    cache: dict[int, TreeSolution | None] = {}

    def result(x: int):
        if x not in cache:
            cache[x] = _call(solver, graph, terminals, x, trace)
        return cache[x]

    def good(x: int) -> bool:
        if x < 0:
            return False
        tree = result(x)
        return tree is not None and solver.minimized.value(graph, tree) <= limit

    hi = _upper_bound(graph, solver.budgeted.sel)
    if not good(hi):
        found = _powers_fallback(good, hi, trace)
        if found is None:
            raise InfeasibleError("NO SOLUTION")
        log.warning("non-monotone solver: budget %d passes but the upper bound %d fails", found, hi)
        hi = found
    x = _bisect(good, -1, hi)
    return result(x + 1)


def convert_sum(
    solver: BicriteriaSolver,
    graph: BiGraph,
    terminals,
    eps,
    trace: SearchTrace | None = None,
) -> TreeSolution:
    """Approximately minimize budgeted + minimized values.

    Budgets are 0 and ``floor((1+eps)**j)`` for ``j = 0..R`` with ``R`` the
    first exponent reaching the upper bound; the tree with the smallest
    sum is returned (ties: smaller budget).
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    trace = trace if trace is not None else SearchTrace()
    terminals = frozenset(terminals)
    hi = max(1, _upper_bound(graph, solver.budgeted.sel))
    budgets = [0]
    m = Fraction(1)
    while True:
        b = math.floor(m)
        if b != budgets[-1]:
            budgets.append(b)
        if m >= hi:
            break
        m *= 1 + eps
    best, best_key = None, None
    for b in budgets:
        tree = _call(solver, graph, terminals, b, trace)
        if tree is None:
            continue
        total = solver.budgeted.value(graph, tree) + solver.minimized.value(graph, tree)
        if best_key is None or total < best_key:
            best, best_key = tree, total
    if best is None:
        raise InfeasibleError("solver found nothing at any budget")
    return best


def composite_ratio(solver: UnicriterionSolver, graph, terminals, budget_c: int, x: Fraction):
    """``(tree, h(x) / x)`` where ``h(x)`` is the solver's cost under ``(x/C) c + d``."""
    sel = CostSelector.composite(Fraction(x) / budget_c, 1)
    tree = solver.solve(graph, terminals, sel)
    h = tree_value(graph, tree.edge_ids, solver.criterion, sel, tree.node_set)
    return tree, Fraction(h) / x


def parametric_search(
    solver: UnicriterionSolver,
    graph: BiGraph,
    terminals,
    budget_c: int,
    gamma,
    trace: SearchTrace | None = None,
) -> TreeSolution:
    """Same-type bicriteria from a single-cost solver.

    Bisects the composite weight ``x`` over multiples of ``1/p`` (``p`` the
    numerator of ``gamma``) up to ``max(gamma, 1/gamma) * D_hi``, looking
    for ``h(x)/x > (1+gamma) rho`` and ``h(x+step)/(x+step) <= (1+gamma) rho``.
    The tree at ``x + step`` has c-value at most ``(1+gamma) rho C`` and
    d-value at most ``(1 + 1/gamma) rho`` times the best C-bounded d-value.
    """
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if budget_c <= 0:
        raise ValueError("budget C must be positive")
    trace = trace if trace is not None else SearchTrace()
    terminals = frozenset(terminals)
    threshold = (1 + gamma) * solver.rho
    step = Fraction(1, gamma.numerator)
    d_hi = max(1, _upper_bound(graph, D))
    top = math.ceil(max(gamma, 1 / gamma) * d_hi / step)
    cache: dict[int, tuple] = {}

    def probe(k: int):
        if k not in cache:
            trace.calls.append(k * step)
            cache[k] = composite_ratio(solver, graph, terminals, budget_c, k * step)
        return cache[k]

    def good(k: int) -> bool:
        # x = 0 carries no c-weight; treat it as failing without a call
        return k > 0 and probe(k)[1] <= threshold

    if not good(top):
        found = _powers_fallback(good, top, trace)
        if found is None:
            raise InfeasibleError("NO SOLUTION")
        log.warning("non-monotone solver: ratio test passes at %s but fails at the top", found * step)
        top = found
    k = _bisect(good, 0, top)
    return probe(k + 1)[0]
