import json
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from pyStreamTable.cli import main, parse_order
from pyStreamTable.errors import InvalidOrder
from pyStreamTable.greedy import greedy_layout
from pyStreamTable.io import table_to_csv
from pyStreamTable.models import emit_lp_model, layout_assignment
from pyStreamTable.reductions import SAMPLE_TRIPLES, hampath_to_table, sample_cubic_graph
from pyStreamTable.table import RowHeights, validate_table

SAMPLE_EDGES = "a b\nb c\nc d\nd e\ne f\na d\na e\nb f\nc f\n"


@pytest.fixture
def table_file(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text(",A,B\nr1,3,1\nr2,1,1\n")
    return str(path)


@pytest.fixture
def triples_file(tmp_path):
    path = tmp_path / "triples.json"
    path.write_text(json.dumps([list(t) for t in SAMPLE_TRIPLES]))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_layout_command(capsys, table_file):
    code, out = run(capsys, "layout", table_file, "--heights", "uniform:1")
    assert code == 0
    document = json.loads(out.out)
    assert document["metrics"]["splits"] == 0
    assert document["metrics"]["excess"] == "2/1"


def test_improve_command(capsys, table_file):
    code, out = run(capsys, "improve", table_file)
    assert code == 0
    document = json.loads(out.out)
    assert document["heights"] == ["1/1", "1/2"]
    assert document["metrics"]["excess"] == "0/1"
    assert document["iterations"] >= 1


def test_betweenness_pipeline(capsys, tmp_path, triples_file):
    code, out = run(capsys, "gen", "betweenness", triples_file, "--w", "15")
    assert code == 0
    assert "threshold: 125/4" in out.err
    table_path = tmp_path / "triples.csv"
    table_path.write_text(out.out)
    code, out = run(capsys, "layout", str(table_path), "--order", "3,1,4,2,5")
    assert code == 0
    document = json.loads(out.out)
    assert Fraction(document["metrics"]["excess"]) <= Fraction(125, 4)


def test_verify_command(capsys, triples_file):
    code, out = run(capsys, "verify", "betweenness", triples_file, "--order", "3,1,4,2,5")
    assert code == 0
    document = json.loads(out.out)
    assert document["certificate"] is True
    assert document["within_threshold"] is True
    assert document["metric"] == "125/1"
    assert document["threshold"] == "125/1"


def test_verify_hampath(capsys, tmp_path):
    graph_path = tmp_path / "g.txt"
    graph_path.write_text(SAMPLE_EDGES)
    code, out = run(capsys, "verify", "hampath", str(graph_path), "--order", "a,c,b,d,e,f")
    assert code == 0
    document = json.loads(out.out)
    assert document["certificate"] is False
    assert document["threshold"] == 20


def test_search_command(capsys, tmp_path):
    path = tmp_path / "g.csv"
    path.write_text(table_to_csv(hampath_to_table(sample_cubic_graph()).table))
    code, out = run(capsys, "search", str(path), "--objective", "min-splits", "--delta", "1", "--method", "brute")
    assert code == 0
    document = json.loads(out.out)
    assert document["score"] == 20
    assert document["optimal"] is True


def test_anneal_needs_a_seed(capsys, table_file):
    code, out = run(capsys, "search", table_file, "--method", "anneal")
    assert code == 2
    assert "--seed" in out.err
    code, out = run(capsys, "search", table_file, "--method", "anneal", "--seed", "4", "--steps", "50")
    assert code == 0


def test_random_generation_needs_a_seed(capsys):
    assert run(capsys, "gen", "hampath", "--random", "8")[0] == 2
    code, out = run(capsys, "gen", "hampath", "--random", "8", "--seed", "2")
    assert code == 0
    assert len(out.out.splitlines()) == 9


def test_domain_errors_exit_with_one(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(",A,B\nr1,0,1\n")
    code, out = run(capsys, "layout", str(path))
    assert code == 1
    assert out.err.startswith("error:")
    assert run(capsys, "layout", str(tmp_path / "missing.csv"))[0] == 1


def test_usage_errors_exit_with_two(capsys, table_file):
    assert run(capsys, "layout", table_file, "--heights", "stretched:1")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_emit_and_import(capsys, tmp_path, table_file):
    code, out = run(capsys, "emit-model", "lp", table_file)
    assert code == 0
    assert "subject to" in out.out
    assert "C0_" not in out.out
    assert "C0_1_1" in run(capsys, "emit-model", "lp", table_file, "--separate")[1].out
    table = validate_table([[3, 1], [1, 1]], ["r1", "r2"], ["A", "B"])
    layout = greedy_layout(table, RowHeights.uniform(2))
    values = layout_assignment(layout, emit_lp_model(table, RowHeights.uniform(2)))
    solution = tmp_path / "solution.txt"
    solution.write_text("".join(f"{k} {v.numerator}/{v.denominator}\n" for k, v in values.items()))
    code, out = run(capsys, "import-solution", "lp", table_file, str(solution))
    assert code == 0
    document = json.loads(out.out)
    assert document["solution"]["exact"] is True
    assert document["solution"]["objective"] == "2/1"


def test_emit_gp_needs_bounds(capsys, table_file):
    assert run(capsys, "emit-model", "gp", table_file, "--total-height", "2")[0] == 2
    code, out = run(capsys, "emit-model", "gp", table_file, "--total-height", "2", "--width", "4")
    assert code == 0
    assert json.loads(out.out)["constraints"]


def test_render_command(capsys, tmp_path, table_file):
    code, out = run(capsys, "layout", table_file)
    layout_path = tmp_path / "layout.json"
    layout_path.write_text(out.out)
    svg_path = tmp_path / "t.svg"
    code, _ = run(capsys, "render", str(layout_path), "--smooth", "none", "--out", str(svg_path))
    assert code == 0
    root = ET.fromstring(svg_path.read_bytes())
    assert root.tag.endswith("svg")


def test_parse_order():
    labels = ("a", "b", "c")
    assert parse_order("c,a,b", labels) == (2, 0, 1)
    assert parse_order("3,1,2", labels) == (2, 0, 1)
    with pytest.raises(InvalidOrder):
        parse_order("a,a,b", labels)


def test_render_rejects_large_smoothing(capsys, tmp_path, table_file):
    _, out = run(capsys, "layout", table_file)
    layout_path = tmp_path / "layout.json"
    layout_path.write_text(out.out)
    code, out = run(capsys, "render", str(layout_path), "--smooth", "1")
    assert code == 2
    assert "--smooth" in out.err


def test_render_rejects_float_coordinates(capsys, tmp_path, table_file):
    _, out = run(capsys, "layout", table_file)
    document = json.loads(out.out)
    document["heights"] = [1.0, 1.0]
    layout_path = tmp_path / "layout.json"
    layout_path.write_text(json.dumps(document))
    code, out = run(capsys, "render", str(layout_path))
    assert code == 1
    assert out.err.startswith("error:")
    assert "Traceback" not in out.err
