from fractions import Fraction

import pytest

from pyStreamTable.errors import LabelCountMismatch, NonPositiveParameter
from pyStreamTable.greedy import greedy_layout
from pyStreamTable.heights import HeightPolicy, initial_heights, local_improve, shrink_candidate
from pyStreamTable.layout import Layout, empty_rectangles, excess_area, split_count
from pyStreamTable.table import RowHeights, validate_table
from tests.conftest import random_heights, random_table


def test_uniform_policy():
    table = validate_table([[1, 1]] * 3)
    assert list(initial_heights(table, HeightPolicy.uniform(1))) == [1, 1, 1]


@pytest.mark.parametrize("rows, total, expected", [
    ([["1/2", "1/2"], [1, 1], [1, 2]], 6, [1, 2, 3]),
    ([[2, 1], ["1/2", "1/2"]], 1, [Fraction(3, 4), Fraction(1, 4)]),
])
def test_proportional_policy(rows, total, expected):
    table = validate_table(rows)
    heights = initial_heights(table, HeightPolicy.proportional(total))
    assert list(heights) == expected
    assert heights.total() == total


def test_policy_parsing():
    assert HeightPolicy.parse("uniform:1/2") == HeightPolicy.uniform(Fraction(1, 2))
    assert HeightPolicy.parse("proportional:6").value == 6
    assert HeightPolicy.parse("explicit:1,1/2").explicit == (1, Fraction(1, 2))
    with pytest.raises(ValueError):
        HeightPolicy.parse("stretched:2")


def test_policy_errors(tight_table):
    with pytest.raises(NonPositiveParameter):
        initial_heights(tight_table, HeightPolicy.uniform(0))
    with pytest.raises(LabelCountMismatch):
        initial_heights(tight_table, HeightPolicy.from_list([1]))


def test_shrink_closes_single_gap(gap_table):
    layout = greedy_layout(gap_table, RowHeights.uniform(2))
    candidate = shrink_candidate(layout, empty_rectangles(layout)[0])
    assert candidate.new_height == Fraction(1, 2)
    assert (candidate.left_area, candidate.right_area) == (1, 1)


def test_shrink_blocked_by_neighbour():
    table = validate_table([[1, 1, 3], [2, 1, 1]])
    layout = greedy_layout(table, RowHeights.uniform(2))
    gap = empty_rectangles(layout)[0]
    assert (gap.row, gap.gap_after_col) == (1, 1)
    candidate = shrink_candidate(layout, gap)
    assert candidate.new_height is None
    assert candidate.lower_bound == 1


@pytest.fixture
def two_gap_layout():
    table = validate_table([[2, 1, 1, 1], [1, 1, 1, 1]])
    lefts = [[Fraction(x) for x in row] for row in ([0, 2, 3, 4], [0, "3/2", 3, 4])]
    return Layout.from_lefts(table, RowHeights.uniform(2), lefts)


def _gap(layout, row, col):
    return next(g for g in empty_rectangles(layout) if (g.row, g.gap_after_col) == (row, col))


def test_earlier_gap_adds_its_own_hyperbola(two_gap_layout):
    candidate = shrink_candidate(two_gap_layout, _gap(two_gap_layout, 1, 1))
    assert len(candidate.hyperbolas) == 5
    assert [h.kind for h in candidate.hyperbolas if h.side == "left"] == ["cell", "gap", "cell"]
    assert candidate.lower_bound == Fraction(2, 3)
    assert candidate.new_height == Fraction(9, 10)
    assert (candidate.left_area, candidate.right_area) == (Fraction(5, 2), 2)


def test_later_gap_bounds_the_interval(two_gap_layout):
    candidate = shrink_candidate(two_gap_layout, _gap(two_gap_layout, 1, 0))
    assert [h.kind for h in candidate.hyperbolas if h.side == "right"] == ["cell", "cell", "gap", "cell"]
    assert candidate.lower_bound == Fraction(5, 6)
    assert candidate.new_height == Fraction(9, 10)


def test_local_improve_reaches_zero_excess(gap_table):
    heights, layout, log = local_improve(gap_table, RowHeights.uniform(2))
    assert list(heights) == [1, Fraction(1, 2)]
    assert excess_area(layout) == 0
    assert sum(step.accepted for step in log) <= 2


def test_gap_free_input_is_unchanged(tight_table):
    start = RowHeights.uniform(2)
    result = local_improve(tight_table, start)
    assert result.heights == start
    assert result.iterations == 0
    assert result.log == []


def test_excess_never_grows(rng):
    for _ in range(200):
        rows, cols = int(rng.integers(1, 5)), int(rng.integers(2, 5))
        table = random_table(rng, rows, cols)
        heights = random_heights(rng, rows)
        start = excess_area(greedy_layout(table, heights))
        result = local_improve(table, heights, max_iters=20)
        accepted = [step for step in result.log if step.accepted]
        trail = [start] + [step.excess_after for step in accepted]
        assert all(b < a for a, b in zip(trail, trail[1:]))
        assert excess_area(result.layout) == trail[-1]
        assert split_count(result.layout) == 0
