import csv
import io
import json
import subprocess
import sys

import pytest

from bicriteria import edgelist
from bicriteria.cli import run
from bicriteria.dcst import phase_bound
from bicriteria.graph import evaluate_tree

TRIANGLE = "# every spanning tree is Pareto-optimal\nnodes 3 edges 3 terminals 0,1,2\n0 1 1 3\n1 2 2 2\n0 2 3 1\n"
SIX = """nodes 6 edges 9 terminals 0,2,3,5
0 1 2 1
1 2 3 1
2 3 1 1
3 4 4 1
4 5 2 1
5 0 6 1
1 4 1 1
0 3 9 2
2 5 5 2
"""


def call(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    (tmp_path / "tri.txt").write_text(TRIANGLE)
    (tmp_path / "six.txt").write_text(SIX)
    code, text = call("gen-partition", "--values", "1,2,3")
    assert code == 0
    (tmp_path / "part.sp").write_text(text)
    return tmp_path


def reevaluate(path):
    graph, terms = edgelist.read(path)
    return evaluate_tree(graph, [e.id for e in graph.edges], terms)


def test_oracle_triangle_front(files):
    code, text = call("oracle", files / "tri.txt")
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0
    assert rows[0] == ["diameter_d", "total_c", "edge_ids"]
    assert [tuple(map(int, r[:2])) for r in rows[1:]] == [(3, 5), (4, 4), (5, 3)]


def test_spdp_exact_on_partition_gadget(files):
    code, text = call("spdp-exact", files / "part.sp", "--D", 3, "--check")
    report = json.loads(text)
    assert code == 0
    assert report["total_c"] == 3 and report["diameter_d"] <= 3
    assert report["achieved"]["matches_oracle"] is True


def test_dcst_report_meets_bound(files):
    code, text = call("dcst", files / "six.txt", "--D", 3, "--eps", 1, "--check", "--witness", files / "w.txt")
    report = json.loads(text)
    assert code == 0
    assert report["diameter_d"] <= 2 * phase_bound(4) * 3
    assert report["promised"]["diameter_max"] == 2 * phase_bound(4) * 3
    again = reevaluate(files / "w.txt")
    assert (again.total_c, again.diameter_d) == (report["total_c"], report["diameter_d"])


@pytest.mark.parametrize(
    "argv",
    [
        ("dcst", "six.txt", "--D", "4"),
        ("dcst", "six.txt", "--D", "4", "--path-mode", "fptas", "--eps", "1/10"),
        ("equivalence", "six.txt", "--C", "12", "--check"),
        ("convert", "six.txt", "--eps", "1", "--check"),
        ("parametric", "six.txt", "--C", "10", "--gamma", "1/2", "--check"),
        ("parametric", "six.txt", "--C", "10", "--gamma", "2", "--solver", "mdst"),
        ("rsp", "six.txt", "--source", "0", "--target", "3", "--D", "3", "--check", "--path-mode", "fptas"),
        ("spdp-exact", "part.sp", "--C", "3"),
        ("spdp-fpas", "part.sp", "--D", "3", "--eps", "1/4", "--check"),
    ],
)
def test_witness_reproduces_report(files, argv):
    name, inst, *rest = argv
    witness = files / "witness.txt"
    code, text = call(name, files / inst, *rest, "--witness", witness)
    assert code == 0
    report = json.loads(text)
    again = reevaluate(witness)
    assert (again.total_c, again.diameter_d) == (report["total_c"], report["diameter_d"])
    header = witness.read_text().splitlines()[0]
    assert header == "# witness edge ids: " + " ".join(map(str, report["edge_ids"]))


def test_csv_report(files):
    code, text = call("spdp-fpas", files / "part.sp", "--D", 3, "--eps", 1, "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and len(rows) == 1
    assert int(rows[0]["diameter_d"]) <= 3 and int(rows[0]["total_c"]) <= 6


def test_same_flags_give_identical_bytes(files):
    for argv in (
        ("dcst", files / "six.txt", "--D", 4, "--check", "--seed", 7),
        ("convert", files / "six.txt", "--format", "csv"),
        ("gen-random", "--n", 8, "--m", 13, "--seed", 5, "--terminals", 4),
        ("gen-setcover", "--sets", "a,b;b,c;c", "--costs", "2,3,1"),
    ):
        assert call(*argv) == call(*argv)


def test_timing_is_opt_in(files):
    _, plain = call("dcst", files / "six.txt", "--D", 4)
    _, timed = call("dcst", files / "six.txt", "--D", 4, "--timing")
    assert "wall_time" not in json.loads(plain)
    assert json.loads(timed)["wall_time"] >= 0


def test_generators_round_trip(files):
    code, text = call("gen-random", "--n", 7, "--m", 11, "--seed", 2, "--terminals", 3)
    graph, terms = edgelist.loads(text)
    assert code == 0 and graph.node_count == 7 and len(graph.edges) == 11 and len(terms) == 3
    code, text = call("gen-partition", "--values", "2,2", "--edge-list")
    graph, _ = edgelist.loads(text)
    assert code == 0 and len(graph.edges) == 4
    code, text = call("gen-setcover", "--sets", "a,b;b", "--costs", "4,1")
    graph, terms = edgelist.loads(text)
    assert code == 0 and len(terms) == 2 + 3


def _subprocess(*argv):
    return subprocess.run([sys.executable, "-m", "bicriteria", *map(str, argv)], capture_output=True, text=True, check=False)


def test_exit_codes(files):
    big = files / "big.txt"
    big.write_text(call("gen-random", "--n", 20, "--m", 40)[1])
    assert _subprocess("oracle", files / "tri.txt").returncode == 0
    assert _subprocess("dcst", files / "six.txt", "--D", 0).returncode == 2
    (files / "edge.sp").write_text("E(0,1,1,5)\n")
    assert _subprocess("spdp-exact", files / "edge.sp", "--D", 4).returncode == 2
    assert _subprocess("oracle", big).returncode == 3
    assert _subprocess("dcst", files / "missing.txt", "--D", 1).returncode == 1
    assert _subprocess("dcst", files / "six.txt").returncode == 1  # --D missing
    assert _subprocess("nonsense").returncode == 1
    bad = files / "bad.txt"
    bad.write_text("nodes 2 edges 1 terminals 0,1\n0 0 1 1\n")
    assert _subprocess("dcst", bad, "--D", 1).returncode == 1


def test_check_skips_oracle_beyond_caps(files):
    big = files / "big.txt"
    big.write_text(call("gen-random", "--n", 14, "--m", 22, "--d-range", "1,3", "--terminals", 3)[1])
    code, text = call("dcst", big, "--D", 30, "--check")
    assert code == 0 and json.loads(text)["opt"] == {}
