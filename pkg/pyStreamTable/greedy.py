"""
Description: This module implements the greedy O(rc) StreamTable layout for fixed row heights
             and a fixed row order. The result has no split and minimum excess area.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from pyStreamTable.errors import LayoutInvariantError
from pyStreamTable.layout import BoundaryChain, Layout, split_pairs
from pyStreamTable.table import RowHeights, RowOrder, Table

logger = logging.getLogger(__name__)

class Provenance(str, Enum):
    ROOT = "Root"
    PARENT_ABOVE = "ParentAbove"
    PARENT_BELOW = "ParentBelow"


@dataclass(frozen=True)
class StreamPlacement:
    """
    The rectangles of one stream, listed in drawn order.

    Attributes:
        col (int): The table column drawn by this stream.
        lefts (tuple): Chosen left x-coordinate for each drawn row.
        widths (tuple): Width w/h of each drawn row's rectangle.
        provenance (tuple): Whether each rectangle is a root or hangs from a neighbour.
    """
    col: int
    lefts: Tuple[Fraction, ...]
    widths: Tuple[Fraction, ...]
    provenance: Tuple[Provenance, ...]

    @property
    def rights(self) -> Tuple[Fraction, ...]:
        return tuple(a + w for a, w in zip(self.lefts, self.widths))

    def roots(self) -> List[int]:
        return [k for k, p in enumerate(self.provenance) if p is Provenance.ROOT]

    def is_connected(self) -> bool:
        rights = self.rights
        return all(
            max(self.lefts[k], self.lefts[k + 1]) <= min(rights[k], rights[k + 1])
            for k in range(len(self.lefts) - 1)
        )


def _drawn(table: Table, order: Optional[Sequence[int]]) -> RowOrder:
    return RowOrder(order if order is not None else range(table.rows), table.rows)


def stream_widths(col: int, table: Table, heights: RowHeights, order: Optional[Sequence[int]] = None) -> List[Fraction]:
    """Widths ``w_ij / h_i`` of column ``col`` in drawn order."""
    return [table.weight(i, col) / heights[i] for i in _drawn(table, order)]


def _provenance(lefts: Sequence[Fraction], widths: Sequence[Fraction], prev_right: Sequence[Fraction]) -> Tuple[Provenance, ...]:
    result = []
    for k, left in enumerate(lefts):
        if left == prev_right[k]:
            result.append(Provenance.ROOT)
        elif k > 0 and left + widths[k] == lefts[k - 1]:
            result.append(Provenance.PARENT_ABOVE)
        elif k + 1 < len(lefts) and left + widths[k] == lefts[k + 1]:
            result.append(Provenance.PARENT_BELOW)
        else:
            raise LayoutInvariantError(f"Rectangle {k} is neither a root nor attached to a parent")
    return tuple(result)


def _place_first(widths: Sequence, origin) -> StreamPlacement:
    return StreamPlacement(0, (origin,) * len(widths), tuple(widths), (Provenance.ROOT,) * len(widths))


def layout_first_column(table: Table, heights: RowHeights, order: Optional[Sequence[int]] = None) -> StreamPlacement:
    """
    Step 1: left-align the rectangles of the first column at x = 0.
    """
    return _place_first(stream_widths(0, table, heights, order), Fraction(0))


def build_top_pass(prev_right: BoundaryChain, widths: Sequence[Fraction]) -> BoundaryChain:
    """
    Place the stream top-to-bottom, each rectangle as far left as possible while still
    touching the rectangle above it and never crossing the previous stream.

    Args:
        prev_right (Sequence[Fraction]): Right boundary of the previous stream, per drawn row.
        widths (Sequence[Fraction]): Width of this stream's rectangle, per drawn row.

    Returns:
        BoundaryChain: Candidate left x-coordinates R_t.
    """
    lefts: BoundaryChain = []
    for k, (bound, width) in enumerate(zip(prev_right, widths)):
        if k == 0:
            lefts.append(bound)
        else:
            # touching the rectangle above means right side >= its left side
            lefts.append(max(bound, lefts[k - 1] - width))
    return lefts


def build_bottom_pass(prev_right: BoundaryChain, widths: Sequence[Fraction]) -> BoundaryChain:
    """Mirror of :func:`build_top_pass`, built bottom-to-top (R_b)."""
    return build_top_pass(prev_right[::-1], widths[::-1])[::-1]


def _merge(prev_right: Sequence[Fraction], widths: Sequence[Fraction]) -> List[Fraction]:
    top = build_top_pass(prev_right, widths)
    bottom = build_bottom_pass(prev_right, widths)
    return [max(t, b) for t, b in zip(top, bottom)]


def _place_middle(prev_right: Sequence, widths: Sequence, col: int) -> StreamPlacement:
    lefts = _merge(prev_right, widths)
    return StreamPlacement(col, tuple(lefts), tuple(widths), _provenance(lefts, widths, prev_right))


def _place_last(prev_right: Sequence, widths: Sequence, col: int) -> StreamPlacement:
    lefts = _merge(prev_right, widths)
    right_edge = max(a + w for a, w in zip(lefts, widths))
    lower_bound = max(p + w for p, w in zip(prev_right, widths))
    if right_edge != lower_bound:
        raise LayoutInvariantError(f"Right edge {right_edge} exceeds the feasible minimum {lower_bound}")
    aligned = tuple(right_edge - w for w in widths)
    # every right side sits on W; rows still resting on the previous stream are the roots
    provenance = tuple(
        Provenance.ROOT if left == prev_right[k] else Provenance.PARENT_ABOVE if k else Provenance.PARENT_BELOW
        for k, left in enumerate(aligned)
    )
    return StreamPlacement(col, aligned, tuple(widths), provenance)


def layout_middle_stream(
        prev_right: BoundaryChain,
        col: int,
        table: Table,
        heights: RowHeights,
        order: Optional[Sequence[int]] = None
) -> StreamPlacement:
    """
    Step 2: the connected placement of stream ``col`` with the smallest sum of left sides.

    For each row the merged stream takes the larger left side of the two greedy passes.
    """
    placement = _place_middle(prev_right, stream_widths(col, table, heights, order), col)
    logger.debug("stream %d: roots at drawn rows %s", col, placement.roots())
    return placement


def layout_last_column(
        prev_right: BoundaryChain,
        table: Table,
        heights: RowHeights,
        order: Optional[Sequence[int]] = None
) -> StreamPlacement:
    """
    Step 3: run Step 2 on the last column, then push every rectangle right until all
    right sides meet at the smallest common x-coordinate W.
    """
    col = table.cols - 1
    return _place_last(prev_right, stream_widths(col, table, heights, order), col)


def scaled_widths(table: Table, heights: RowHeights, order: Optional[Sequence[int]] = None) -> Tuple[int, List[List[int]]]:
    """
    A common denominator D and every width ``w_ij / h_i`` times D as an integer, per
    column in drawn order.
    """
    drawn = _drawn(table, order)
    weight_scale = math.lcm(*(w.denominator for row in table.weights for w in row))
    height_scale = math.lcm(*(h.numerator for h in heights))
    factors = [h.denominator * (height_scale // h.numerator) for h in heights]
    columns = [
        [table.weights[i][j].numerator * (weight_scale // table.weights[i][j].denominator) * factors[i] for i in drawn]
        for j in range(table.cols)
    ]
    return weight_scale * height_scale, columns


def greedy_layout(table: Table, heights: RowHeights, order: Optional[Sequence[int]] = None) -> Layout:
    """
    Compute the no-split, minimum excess area StreamTable for fixed heights and row order.

    Both passes run on integer widths scaled by a common denominator; the chains are
    turned back into fractions once at the end.

    Args:
        table (Table): The weighted table.
        heights (RowHeights): One height per table row.
        order (Optional[Sequence[int]]): Table rows in drawn order, top first. Defaults to
                                         the table's own order.

    Returns:
        Layout: A layout satisfying P1 and P2 with zero splits.

    Raises:
        LayoutInvariantError: If the result unexpectedly contains a split.
    """
    drawn = _drawn(table, order)
    scale, widths = scaled_widths(table, heights, drawn)
    placements = [_place_first(widths[0], 0)]
    for col in range(1, table.cols - 1):
        placements.append(_place_middle(placements[-1].rights, widths[col], col))
    placements.append(_place_last(placements[-1].rights, widths[-1], table.cols - 1))
    logger.debug("greedy layout %dx%d on denominator %d", table.rows, table.cols, scale)

    lefts = [[Fraction(0)] * table.cols for _ in range(table.rows)]
    for placement in placements:
        for k, row in enumerate(drawn):
            lefts[row][placement.col] = Fraction(placement.lefts[k], scale)
    layout = Layout.from_lefts(table, heights, lefts, drawn)
    splits = split_pairs(layout)
    if splits:
        raise LayoutInvariantError(f"Greedy layout produced splits {splits}")
    return layout
