import itertools
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np
import pytest

from pyStreamTable.reductions import SAMPLE_TRIPLES, BetweennessInstance, betweenness_to_table, hampath_to_table, sample_cubic_graph
from pyStreamTable.table import RowHeights, Table, validate_table

HEIGHT_CHOICES = (Fraction(1, 2), Fraction(1), Fraction(2))


def random_table(rng: np.random.Generator, rows: int, cols: int, low: int = 1, high: int = 4) -> Table:
    return validate_table(rng.integers(low, high + 1, size=(rows, cols)).tolist())


def random_heights(rng: np.random.Generator, rows: int) -> RowHeights:
    return RowHeights(tuple(HEIGHT_CHOICES[int(k)] for k in rng.integers(len(HEIGHT_CHOICES), size=rows)))


def _resolve(kinds: Sequence[str], bounds: Sequence[Fraction], widths: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Lefts of one stream where every rectangle is a root or hangs off a neighbour."""
    r = len(kinds)
    lefts: List[Optional[Fraction]] = [None] * r
    for k in range(r):
        if kinds[k] == "root":
            lefts[k] = bounds[k]
    changed = True
    while changed:
        changed = False
        for k in range(r):
            if lefts[k] is not None:
                continue
            parent = k - 1 if kinds[k] == "above" else k + 1
            if 0 <= parent < r and lefts[parent] is not None:
                lefts[k] = lefts[parent] - widths[k]
                changed = True
    if any(x is None for x in lefts):
        return None
    if any(x < b for x, b in zip(lefts, bounds)):
        return None
    for k in range(r - 1):
        if max(lefts[k], lefts[k + 1]) > min(lefts[k] + widths[k], lefts[k + 1] + widths[k + 1]):
            return None
    return lefts


def _pareto(chains: List[tuple]) -> List[tuple]:
    return [c for c in chains if not any(o != c and all(x <= y for x, y in zip(o, c)) for o in chains)]


def min_excess_oracle(table: Table, heights: RowHeights, order: Sequence[int]) -> Fraction:
    """
    Smallest excess area of a split-free layout, found by enumerating for every stream
    which rectangles are roots and which hang off the rectangle above or below, keeping
    only Pareto-minimal right boundaries between streams.
    """
    order = list(order)
    r = len(order)
    width = [[table.weight(i, j) / heights[i] for i in order] for j in range(table.cols)]
    frontier = [tuple(width[0])]
    for j in range(1, table.cols - 1):
        candidates = set()
        for bounds in frontier:
            for kinds in itertools.product(("root", "above", "below"), repeat=r):
                lefts = _resolve(kinds, bounds, width[j])
                if lefts is not None:
                    candidates.add(tuple(x + w for x, w in zip(lefts, width[j])))
        frontier = _pareto(sorted(candidates))
    right_edge = min(max(b + w for b, w in zip(bounds, width[-1])) for bounds in frontier)
    return right_edge * heights.total() - table.total_weight()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def triples_instance():
    return BetweennessInstance.from_triples(SAMPLE_TRIPLES)


@pytest.fixture
def triples_reduction(triples_instance):
    return betweenness_to_table(triples_instance, 15)


@pytest.fixture
def hampath_reduction():
    return hampath_to_table(sample_cubic_graph())


@pytest.fixture
def gap_table():
    return validate_table([[3, 1], [1, 1]])


@pytest.fixture
def tight_table():
    return validate_table([[2, 1], [1, 2]])
