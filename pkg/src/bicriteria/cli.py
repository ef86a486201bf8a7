"""Command-line entry point.

Exit codes: 0 success, 1 internal or usage error, 2 infeasible instance,
3 oracle cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import edgelist
from .dcst import dcst, dcst_solver
from .errors import CapExceededError, GraphError, InfeasibleError
from .generators import (
    partition_gadget,
    random_graph,
    random_terminals,
    setcover_gadget,
)
from .graph import BiGraph, Criterion, TreeSolution, evaluate_tree
from .oracle import min_over_trees, opt_given_budget, pareto_front
from .paths import restricted_shortest_path_exact, restricted_shortest_path_fptas
from .spdp import (
    dp_min_cost_given_diameter,
    dp_min_diameter_given_cost,
    flatten,
    fpas_dcst,
    parse_sp,
    to_text,
)
from .transforms import (
    DIAMETER_C,
    DIAMETER_D,
    TOTAL_C,
    TOTAL_D,
    UnicriterionSolver,
    bicriteria_equivalence,
    convert_sum,
    parametric_search,
)
from .trees import min_diameter_spanning_tree, mst

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_CAP = 0, 1, 2, 3


@dataclass
class RunReport:
    instance: str
    algorithm: str
    params: dict
    total_c: int
    diameter_d: int
    edge_ids: list
    opt: dict = field(default_factory=dict)
    promised: dict = field(default_factory=dict)
    achieved: dict = field(default_factory=dict)
    wall_time: float | None = None


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    return x


def _ratio(num, den):
    if den == 0:
        return None if num else Fraction(1)
    return Fraction(num) / den


# ---------------------------------------------------------------------------
# algorithms: each returns (tree, graph, params, opt, promised, achieved)


def _run_dcst(args, graph, terminals):
    D_ = _need(args.D, "--D")
    res = dcst(graph, terminals, D_, args.eps, args.path_mode)
    tree = res.tree
    diam_factor, cost_factor = res.guarantee(args.eps)
    promised = {"diameter_max": diam_factor * D_, "cost_factor": cost_factor}
    opt, achieved = {}, {"phases": res.phase_count}
    if args.check:
        front = _front(graph, terminals)
        if front is not None:
            point = opt_given_budget(front, DIAMETER_D, D_)
            if point is not None:
                opt["opt_c"] = point.second
                achieved["cost_ratio"] = _ratio(tree.total_c, point.second)
    return tree, {"D": D_, "eps": args.eps, "path_mode": res.path_mode}, opt, promised, achieved


def _run_parametric(args, graph, terminals):
    C_ = _need(args.C, "--C")
    if args.solver == "mst":
        solver = UnicriterionSolver(lambda g, k, sel: mst(g, sel), Fraction(1), Criterion.TOTAL_COST, "mst")
        first, second = TOTAL_C, TOTAL_D
    else:
        solver = UnicriterionSolver(
            lambda g, k, sel: min_diameter_spanning_tree(g, sel), Fraction(1), Criterion.DIAMETER, "mdst"
        )
        first, second = DIAMETER_C, DIAMETER_D
    tree = parametric_search(solver, graph, graph.nodes, C_, args.gamma)
    c_val, d_val = first.value(graph, tree), second.value(graph, tree)
    promised = {"c_max": (1 + args.gamma) * C_, "d_factor": 1 + 1 / args.gamma}
    achieved = {"c_value": c_val, "d_value": d_val}
    opt = {}
    if args.check:
        front = _front(graph, None, first, second)
        if front is not None:
            point = opt_given_budget(front, first, C_)
            if point is not None:
                opt["opt_d"] = point.second
                achieved["d_ratio"] = _ratio(d_val, point.second)
    return tree, {"C": C_, "gamma": args.gamma, "solver": args.solver}, opt, promised, achieved


def _run_equivalence(args, graph, terminals):
    C_ = _need(args.C, "--C")
    solver = dcst_solver(args.eps, len(terminals), args.path_mode)
    tree = bicriteria_equivalence(solver, graph, terminals, C_)
    promised = {"c_max": solver.beta * C_, "diameter_factor": solver.alpha}
    opt, achieved = {}, {}
    if args.check:
        front = _front(graph, terminals)
        if front is not None:
            point = opt_given_budget(front, TOTAL_C, C_)
            if point is not None:
                opt["opt_diameter"] = point.first
                achieved["diameter_ratio"] = _ratio(tree.diameter_d, point.first)
    return tree, {"C": C_, "eps": args.eps}, opt, promised, achieved


def _run_convert(args, graph, terminals):
    solver = dcst_solver(args.eps, len(terminals), args.path_mode)
    tree = convert_sum(solver, graph, terminals, args.eps)
    total = tree.total_c + tree.diameter_d
    promised = {"sum_factor": (1 + args.eps) * max(solver.alpha, solver.beta)}
    opt, achieved = {}, {"sum": total}
    if args.check:
        try:
            best = min_over_trees(graph, terminals, lambda t: t.total_c + t.diameter_d)
        except CapExceededError:
            best = None
        if best is not None:
            opt["opt_sum"] = best[0]
            achieved["sum_ratio"] = _ratio(total, best[0])
    return tree, {"eps": args.eps}, opt, promised, achieved


def _run_rsp(args, graph, terminals):
    D_ = _need(args.D, "--D")
    s, t = _need(args.source, "--source"), _need(args.target, "--target")
    mode = args.path_mode or "exact"
    if mode == "exact":
        path = restricted_shortest_path_exact(graph, s, t, D_)
    else:
        path = restricted_shortest_path_fptas(graph, s, t, D_, args.eps)
    tree = evaluate_tree(graph, path.edge_ids, [s])
    opt, achieved = {}, {"length_d": path.length_d}
    if args.check and mode != "exact":
        exact = restricted_shortest_path_exact(graph, s, t, D_)
        opt["opt_c"] = exact.cost_c
        achieved["cost_ratio"] = _ratio(path.cost_c, exact.cost_c)
    params = {"D": D_, "source": s, "target": t, "path_mode": mode}
    if mode == "fptas":
        params["eps"] = args.eps
    return tree, params, opt, {"length_max": D_}, achieved


def _run_spdp_exact(args, sp):
    graph = flatten(sp)
    if args.C is not None:
        tree = dp_min_diameter_given_cost(sp, args.C)
        params = {"C": args.C}
        budget_axis, value = TOTAL_C, args.C
    else:
        D_ = _need(args.D, "--D")
        tree = dp_min_cost_given_diameter(sp, D_)
        params = {"D": D_}
        budget_axis, value = DIAMETER_D, D_
    opt, achieved = {}, {}
    if args.check:
        front = _front(graph, None)
        if front is not None:
            point = opt_given_budget(front, budget_axis, value)
            opt["opt"] = point.second if budget_axis == DIAMETER_D else point.first
            achieved["matches_oracle"] = opt["opt"] == (
                tree.total_c if budget_axis == DIAMETER_D else tree.diameter_d
            )
    return tree, graph, params, opt, {"factor": 1}, achieved


def _run_spdp_fpas(args, sp):
    D_ = _need(args.D, "--D")
    graph = flatten(sp)
    res = fpas_dcst(sp, D_, args.eps)
    tree = res.tree
    opt, achieved = {}, {"lower": res.lower, "upper": res.upper, "tests": res.tests}
    if args.check:
        exact = dp_min_cost_given_diameter(sp, D_)
        opt["opt_c"] = exact.total_c
        achieved["cost_ratio"] = _ratio(tree.total_c, exact.total_c)
    promised = {"diameter_max": D_, "cost_factor": 1 + args.eps}
    return tree, graph, {"D": D_, "eps": args.eps}, opt, promised, achieved


def _front(graph, terminals, first=DIAMETER_D, second=TOTAL_C):
    try:
        return pareto_front(graph, terminals, first, second)
    except CapExceededError:
        return None


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this command")
    return value


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output


def _emit(report: RunReport, fmt: str, out) -> None:
    data = _jsonable(asdict(report))
    if report.wall_time is None:
        data.pop("wall_time")
    if fmt == "json":
        out.write(json.dumps(data, sort_keys=True) + "\n")
        return
    flat = {}
    for k, v in data.items():
        if isinstance(v, dict):
            for kk, vv in sorted(v.items()):
                flat[f"{k}.{kk}"] = vv
        elif isinstance(v, list):
            flat[k] = " ".join(map(str, v))
        else:
            flat[k] = v
    w = csv.writer(out, lineterminator="\n")
    w.writerow(list(flat))
    w.writerow(list(flat.values()))


def _write_witness(path, graph: BiGraph, tree: TreeSolution, terminals) -> None:
    ids = tree.sorted_edges()
    sub = BiGraph.from_edges(graph.node_count, [tuple(graph.edge(i))[:4] for i in ids])
    edgelist.write(
        path,
        sub,
        terminals=sorted(tree.node_set & set(terminals)) if terminals is not None else sorted(tree.node_set),
        comments=[f"witness edge ids: {' '.join(map(str, ids))}",
                  f"total_c {tree.total_c} diameter_d {tree.diameter_d}"],
    )


def _emit_front(front, fmt, out) -> None:
    if fmt == "json":
        rows = [
            {"diameter_d": p.first, "total_c": p.second, "edge_ids": sorted(p.edge_ids)} for p in front.points
        ]
        out.write(json.dumps(rows, sort_keys=True) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["diameter_d", "total_c", "edge_ids"])
    for p in front.points:
        w.writerow([p.first, p.second, " ".join(map(str, sorted(p.edge_ids)))])


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


SOLVE_COMMANDS = {
    "dcst": _run_dcst,
    "parametric": _run_parametric,
    "equivalence": _run_equivalence,
    "convert": _run_convert,
    "rsp": _run_rsp,
}
SP_COMMANDS = {"spdp-exact": _run_spdp_exact, "spdp-fpas": _run_spdp_fpas}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bicriteria", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("instance", help="instance file (edge list, or parse tree for spdp-*)")
        sp.add_argument("--D", type=int, help="diameter / delay bound")
        sp.add_argument("--C", type=int, help="c-cost budget")
        sp.add_argument("--eps", type=_frac, default=Fraction(1, 2))
        sp.add_argument("--gamma", type=_frac, default=Fraction(1))
        sp.add_argument("--seed", type=int, default=0, help="accepted for uniform invocation; solvers are deterministic")
        sp.add_argument("--check", action="store_true", help="compare against the brute-force oracle")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--path-mode", choices=("exact", "fptas"), default=None)
        sp.add_argument("--witness", type=Path, help="write the solution edges here")
        sp.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")

    for name in SOLVE_COMMANDS:
        sp = sub.add_parser(name)
        common(sp)
        if name == "parametric":
            sp.add_argument("--solver", choices=("mst", "mdst"), default="mst")
        if name == "rsp":
            sp.add_argument("--source", type=int)
            sp.add_argument("--target", type=int)
    for name in SP_COMMANDS:
        common(sub.add_parser(name))

    sp = sub.add_parser("oracle", help="print the exact Pareto front")
    sp.add_argument("instance")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("gen-partition", help="PARTITION gadget as a parse tree")
    sp.add_argument("--values", required=True, help="comma-separated positive integers")
    sp.add_argument("--edge-list", action="store_true", help="emit the edge list instead of the parse tree")

    sp = sub.add_parser("gen-setcover", help="set-cover Steiner gadget as an edge list")
    sp.add_argument("--sets", required=True, help="';'-separated sets of ','-separated elements")
    sp.add_argument("--costs", required=True, help="comma-separated set costs")

    sp = sub.add_parser("gen-random", help="seeded random connected multigraph")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--c-range", default="0,20")
    sp.add_argument("--d-range", default="0,20")
    sp.add_argument("--terminals", type=int, default=None, help="number of random terminals (default: all)")
    sp.add_argument("--seed", type=int, default=0)
    return p


def _pair(text: str) -> tuple[int, int]:
    lo, hi = (int(x) for x in text.split(","))
    return lo, hi


def _generate(args, out) -> None:
    if args.command == "gen-partition":
        values = [int(x) for x in args.values.split(",") if x]
        gad = partition_gadget(values)
        if args.edge_list:
            out.write(edgelist.dumps(gad.graph, comments=[f"H = {gad.half}"]))
        else:
            out.write(f"# H = {gad.half}\n{to_text(gad.tree)}\n")
    elif args.command == "gen-setcover":
        sets = [[x.strip() for x in s.split(",") if x.strip()] for s in args.sets.split(";")]
        costs = [int(x) for x in args.costs.split(",")]
        universe = sorted(set().union(*map(set, sets)))
        gad = setcover_gadget(universe, sets, costs)
        out.write(edgelist.dumps(gad.graph, gad.terminals, comments=["set-cover gadget, diameter bound 4"]))
    else:
        graph = random_graph(args.n, args.m, _pair(args.c_range), _pair(args.d_range), args.seed)
        terms = None if args.terminals is None else random_terminals(args.n, args.terminals, args.seed)
        out.write(edgelist.dumps(graph, terms, comments=[f"random n={args.n} m={args.m} seed={args.seed}"]))


def _read_sp(path: Path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.lstrip().startswith("#")]
    return parse_sp("\n".join(lines))


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command.startswith("gen-"):
            _generate(args, out)
            return EXIT_OK
        if args.command == "oracle":
            graph, terminals = edgelist.read(args.instance)
            _emit_front(pareto_front(graph, terminals), args.format, out)
            return EXIT_OK
        start = time.perf_counter()
        if args.command in SP_COMMANDS:
            sp = _read_sp(Path(args.instance))
            tree, graph, params, opt, promised, achieved = SP_COMMANDS[args.command](args, sp)
            terminals = None
        else:
            graph, terminals = edgelist.read(args.instance)
            tree, params, opt, promised, achieved = SOLVE_COMMANDS[args.command](args, graph, terminals)
        elapsed = time.perf_counter() - start
        # the witness must re-evaluate to the reported metrics
        again = evaluate_tree(graph, tree.edge_ids, tree.node_set)
        assert (again.total_c, again.diameter_d) == (tree.total_c, tree.diameter_d)
        report = RunReport(
            instance=str(args.instance),
            algorithm=args.command,
            params=params,
            total_c=tree.total_c,
            diameter_d=tree.diameter_d,
            edge_ids=tree.sorted_edges(),
            opt=opt,
            promised=promised,
            achieved=achieved,
            wall_time=round(elapsed, 6) if args.timing else None,
        )
        _emit(report, args.format, out)
        if args.witness:
            _write_witness(args.witness, graph, tree, terminals)
        return EXIT_OK
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001 - last-resort exit code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
