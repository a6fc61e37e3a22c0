"""
Description: This module defines StreamTable layouts and their aesthetic metrics.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from pyStreamTable.errors import LayoutInvariantError
from pyStreamTable.table import RowHeights, RowOrder, Table

logger = logging.getLogger(__name__)

# one x-coordinate per drawn row
BoundaryChain = List[Fraction]


@dataclass(frozen=True)
class CellRect:
    """
    Represents the rectangle of one table cell inside its row band.

    Attributes:
        row (int): Table row index i.
        col (int): Table column index j.
        left (Fraction): x-coordinate of the left side.
        right (Fraction): x-coordinate of the right side.
        height (Fraction): Height of the row band.
    """
    row: int
    col: int
    left: Fraction
    right: Fraction
    height: Fraction

    _keys = ('row', 'col', 'left', 'right')

    @property
    def width(self) -> Fraction:
        return self.right - self.left

    @property
    def area(self) -> Fraction:
        return self.width * self.height

    def touches(self, other: 'CellRect') -> bool:
        """
        Closed-interval contact: sharing a single x-coordinate counts as adjacent.
        """
        return max(self.left, other.left) <= min(self.right, other.right)

    def shifted(self, dx: Fraction) -> 'CellRect':
        return CellRect(self.row, self.col, self.left + dx, self.right + dx, self.height)

    def keys(self) -> Tuple[str, ...]:
        return self._keys

    def __getitem__(self, key: str):
        return getattr(self, key)

    def items(self):
        return zip(self._keys, (self[k] for k in self._keys))


@dataclass(frozen=True)
class EmptyRect:
    """
    A horizontal gap inside a row band.

    ``gap_after_col`` is j for the gap between cells j and j+1, -1 for a gap at the left
    boundary and ``cols - 1`` for a gap at the right boundary.
    """
    row: int
    gap_after_col: int
    left: Fraction
    right: Fraction
    height: Fraction

    @property
    def width(self) -> Fraction:
        return self.right - self.left

    @property
    def area(self) -> Fraction:
        return self.width * self.height


class Layout:
    """
    A StreamTable drawing: one CellRect per cell, rows stacked in ``order``.

    Rectangles are indexed by table row, ``rects[i][j]``; y-coordinates are never stored,
    they follow from the drawn order and the heights.
    """

    def __init__(
            self,
            table: Table,
            heights: RowHeights,
            rects: Sequence[Sequence[CellRect]],
            order: Optional[Sequence[int]] = None,
            allow_oversize: bool = False
    ) -> None:
        self.table = table
        self.heights = heights
        self.order = RowOrder(order if order is not None else range(table.rows), table.rows)
        self.rects: Tuple[Tuple[CellRect, ...], ...] = tuple(tuple(row) for row in rects)
        self.allow_oversize = allow_oversize
        self._validate()

    @classmethod
    def from_lefts(
            cls,
            table: Table,
            heights: RowHeights,
            lefts: Sequence[Sequence[Fraction]],
            order: Optional[Sequence[int]] = None
    ) -> 'Layout':
        """
        Build a layout from left x-coordinates only; every right side is ``left + w/h``.
        """
        rects = [
            [
                CellRect(i, j, lefts[i][j], lefts[i][j] + table.weight(i, j) / heights[i], heights[i])
                for j in range(table.cols)
            ]
            for i in range(table.rows)
        ]
        return cls(table, heights, rects, order)

    def _validate(self) -> None:
        table = self.table
        if len(self.heights) != table.rows:
            raise LayoutInvariantError(f"{len(self.heights)} heights for {table.rows} rows")
        if len(self.rects) != table.rows or any(len(row) != table.cols for row in self.rects):
            raise LayoutInvariantError("A layout needs exactly one rectangle per cell")
        for i, row in enumerate(self.rects):
            for j, rect in enumerate(row):
                if (rect.row, rect.col) != (i, j) or rect.height != self.heights[i]:
                    raise LayoutInvariantError(f"Rectangle for cell ({i}, {j}) is misplaced: {rect}")
                if rect.right <= rect.left:
                    raise LayoutInvariantError(f"Cell ({i}, {j}) has non-positive width")
                weight = table.weight(i, j)
                if rect.area != weight and not (self.allow_oversize and rect.area > weight):
                    raise LayoutInvariantError(f"Cell ({i}, {j}) has area {rect.area}, weight {weight}")
                if j and rect.left < row[j - 1].right:
                    raise LayoutInvariantError(f"Cells ({i}, {j - 1}) and ({i}, {j}) overlap")
        firsts = {self.rects[i][0].left for i in range(table.rows)}
        lasts = {self.rects[i][-1].right for i in range(table.rows)}
        if len(firsts) != 1 or len(lasts) != 1:
            raise LayoutInvariantError("The outer streams are not aligned (property P1)")

    # -- derived geometry -------------------------------------------------

    @property
    def rows(self) -> int:
        return self.table.rows

    @property
    def cols(self) -> int:
        return self.table.cols

    def cells(self) -> Iterator[CellRect]:
        for row in self.rects:
            yield from row

    @property
    def x_min(self) -> Fraction:
        return self.rects[0][0].left

    @property
    def x_max(self) -> Fraction:
        return self.rects[0][-1].right

    @property
    def width(self) -> Fraction:
        return self.x_max - self.x_min

    @property
    def height(self) -> Fraction:
        return self.heights.total()

    def bounding_area(self) -> Fraction:
        return self.width * self.height

    def y_top(self, row: int) -> Fraction:
        """The y-coordinate of the top of ``row``'s band, growing downwards."""
        top = Fraction(0)
        for drawn in self.order:
            if drawn == row:
                return top
            top += self.heights[drawn]
        raise IndexError(row)

    def band(self, row: int) -> Tuple[Fraction, Fraction]:
        top = self.y_top(row)
        return top, top + self.heights[row]

    def drawn_pairs(self) -> Iterator[Tuple[int, int]]:
        """Consecutive (upper, lower) table rows in drawn order."""
        return zip(self.order, self.order[1:])

    def left_chain(self, j: int) -> BoundaryChain:
        """The chain A(R, j) in drawn order."""
        return [self.rects[i][j].left for i in self.order]

    def right_chain(self, j: int) -> BoundaryChain:
        """The chain B(R, j) in drawn order."""
        return [self.rects[i][j].right for i in self.order]

    def oversized_cells(self) -> List[CellRect]:
        return [rect for rect in self.cells() if rect.area > self.table.weight(rect.row, rect.col)]

    def scaled(self, delta: Fraction) -> 'Layout':
        """Heights times delta, x-coordinates divided by delta."""
        delta = Fraction(delta)
        heights = self.heights.scaled(delta)
        rects = [
            [CellRect(r.row, r.col, r.left / delta, r.right / delta, heights[r.row]) for r in row]
            for row in self.rects
        ]
        return Layout(self.table, heights, rects, self.order, self.allow_oversize)

    def translated(self, dx: Fraction) -> 'Layout':
        rects = [[r.shifted(Fraction(dx)) for r in row] for row in self.rects]
        return Layout(self.table, self.heights, rects, self.order, self.allow_oversize)


def excess_area(layout: Layout) -> Fraction:
    """
    Area of the bounding box minus the sum of the weights.

    The value is computed twice, by subtraction and by summing every empty rectangle,
    and the two must agree exactly.
    """
    by_box = layout.bounding_area() - layout.table.total_weight()
    if layout.allow_oversize:
        return by_box
    by_gaps = sum((gap.area for gap in _gaps(layout)), Fraction(0))
    if by_box != by_gaps:
        raise LayoutInvariantError(f"Excess area by bounding box {by_box} != by gaps {by_gaps}")
    return by_box


def split_pairs(layout: Layout) -> List[Tuple[int, int, int]]:
    """
    Every split as (upper row, lower row, column), scanning drawn-consecutive rows.
    """
    result = []
    for upper, lower in layout.drawn_pairs():
        for j in range(layout.cols):
            if not layout.rects[upper][j].touches(layout.rects[lower][j]):
                result.append((upper, lower, j))
    return result


def split_count(layout: Layout) -> int:
    return len(split_pairs(layout))


def _gaps(layout: Layout) -> Iterator[EmptyRect]:
    x_min, x_max = layout.x_min, layout.x_max
    for i, row in enumerate(layout.rects):
        h = layout.heights[i]
        if row[0].left > x_min:
            yield EmptyRect(i, -1, x_min, row[0].left, h)
        for j in range(layout.cols - 1):
            if row[j + 1].left > row[j].right:
                yield EmptyRect(i, j, row[j].right, row[j + 1].left, h)
        if row[-1].right < x_max:
            yield EmptyRect(i, layout.cols - 1, row[-1].right, x_max, h)


def empty_rectangles(layout: Layout) -> List[EmptyRect]:
    """
    All non-degenerate gaps, largest area first, ties by (row, gap_after_col).
    """
    return sorted(_gaps(layout), key=lambda e: (-e.area, e.row, e.gap_after_col))
