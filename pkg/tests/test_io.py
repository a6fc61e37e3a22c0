import json
from fractions import Fraction

import pytest

from pyStreamTable.errors import NonPositiveWeight, ParseError, TooFewColumns
from pyStreamTable.greedy import greedy_layout
from pyStreamTable.io import layout_from_json, layout_to_json, parse_table_csv, table_to_csv, write_text_atomic
from pyStreamTable.table import RowHeights
from tests.conftest import random_heights, random_table


def test_parse_simple_table():
    table = parse_table_csv(",A,B\nr1,2,1\nr2,1,2\n")
    assert table.weights == ((2, 1), (1, 2))
    assert table.col_labels == ("A", "B")
    assert table.row_labels == ("r1", "r2")


def test_parse_rationals_and_decimals():
    table = parse_table_csv("row,A,B\nr1,1/30,15\nr2,0.25,1e1\n")
    assert table.weights[0] == (Fraction(1, 30), 15)
    assert table.weights[1] == (Fraction(1, 4), 10)


def test_parse_errors():
    with pytest.raises(TooFewColumns):
        parse_table_csv(",A\nr1,1\n")
    with pytest.raises(NonPositiveWeight):
        parse_table_csv(",A,B\nr1,0,1\n")
    with pytest.raises(ParseError) as error:
        parse_table_csv(",A,B\nr1,1,x\n")
    assert (error.value.line, error.value.col) == (2, 3)
    with pytest.raises(ParseError):
        parse_table_csv(",A,B\nr1,1\n")
    with pytest.raises(ParseError):
        parse_table_csv("name,A,B\nr1,1,2\n")
    with pytest.raises(ParseError):
        parse_table_csv("")


def test_csv_round_trip(rng):
    for _ in range(20):
        table = random_table(rng, int(rng.integers(1, 5)), int(rng.integers(2, 5)))
        text = table_to_csv(table)
        again = parse_table_csv(text)
        assert again == table
        assert table_to_csv(again) == text


def test_csv_writes_rationals():
    table = parse_table_csv(",A,B\nr1,0.5,3\n")
    assert table_to_csv(table) == ",A,B\nr1,1/2,3/1\n"


def test_layout_json(gap_table):
    layout = greedy_layout(gap_table, RowHeights(("1", "1/2")), order=[1, 0])
    document = json.loads(layout_to_json(layout))
    assert document["heights"] == ["1/1", "1/2"]
    assert document["order"] == [1, 0]
    assert document["metrics"] == {"excess": "0/1", "splits": 0}
    assert len(document["cells"]) == 4


def test_layout_json_round_trip(rng):
    for _ in range(20):
        rows, cols = int(rng.integers(1, 5)), int(rng.integers(2, 5))
        layout = greedy_layout(random_table(rng, rows, cols), random_heights(rng, rows))
        text = layout_to_json(layout)
        again = layout_from_json(text)
        assert again.rects == layout.rects
        assert layout_to_json(again) == text


def test_layout_json_errors():
    with pytest.raises(ParseError):
        layout_from_json("{")
    with pytest.raises(ParseError):
        layout_from_json('{"rows": 1}')


def test_layout_json_numbers(gap_table):
    layout = greedy_layout(gap_table, RowHeights.uniform(2))
    document = json.loads(layout_to_json(layout))
    document["heights"] = [1, 1]
    assert layout_from_json(json.dumps(document)).rects == layout.rects
    document["heights"] = [1.0, 1.0]
    with pytest.raises(ParseError):
        layout_from_json(json.dumps(document))


def test_atomic_write(tmp_path):
    target = tmp_path / "out.txt"
    write_text_atomic(str(target), "first")
    write_text_atomic(str(target), "second")
    assert target.read_text() == "second"
    assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]
