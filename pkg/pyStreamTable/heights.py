"""
Description: This module chooses row heights: initial policies and the local improvement
             heuristic that removes empty rectangles by shrinking single rows.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from pyStreamTable.errors import LabelCountMismatch, NonPositiveParameter
from pyStreamTable.greedy import greedy_layout
from pyStreamTable.layout import EmptyRect, Layout, empty_rectangles, excess_area
from pyStreamTable.settings import DEFAULT_MAX_ITERS
from pyStreamTable.table import RowHeights, Table, to_fraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeightPolicy:
    """
    How to pick initial row heights.

    Attributes:
        kind (str): One of ``UNIFORM``, ``PROPORTIONAL`` or ``EXPLICIT``.
        value (Optional[Fraction]): The uniform height delta, or the total height H.
        explicit (tuple): The heights of an explicit policy.
    """
    kind: str
    value: Optional[Fraction] = None
    explicit: Tuple[Fraction, ...] = ()

    UNIFORM = "uniform"
    PROPORTIONAL = "proportional"
    EXPLICIT = "explicit"

    @classmethod
    def uniform(cls, delta=1) -> 'HeightPolicy':
        return cls(cls.UNIFORM, to_fraction(delta))

    @classmethod
    def proportional(cls, total) -> 'HeightPolicy':
        return cls(cls.PROPORTIONAL, to_fraction(total))

    @classmethod
    def from_list(cls, heights: Sequence) -> 'HeightPolicy':
        return cls(cls.EXPLICIT, None, tuple(to_fraction(h) for h in heights))

    @classmethod
    def parse(cls, text: str) -> 'HeightPolicy':
        """
        Parse ``uniform:1``, ``proportional:6`` or ``explicit:1,1/2,2``.
        """
        kind, _, argument = text.partition(":")
        kind = kind.strip().lower()
        if kind == cls.UNIFORM:
            return cls.uniform(argument or 1)
        if kind == cls.PROPORTIONAL:
            return cls.proportional(argument)
        if kind == cls.EXPLICIT:
            return cls.from_list(argument.split(","))
        raise ValueError(f"Unknown height policy '{text}'")


def initial_heights(table: Table, policy: HeightPolicy) -> RowHeights:
    """
    Compute starting row heights from a policy.

    ``PROPORTIONAL`` makes every height proportional to its row sum with total exactly H.

    Raises:
        NonPositiveParameter: If delta, H or an explicit height is not positive.
        LabelCountMismatch: If an explicit list does not have one height per row.
    """
    if policy.kind == HeightPolicy.EXPLICIT:
        if len(policy.explicit) != table.rows:
            raise LabelCountMismatch("height", table.rows, len(policy.explicit))
        for i, h in enumerate(policy.explicit):
            if h <= 0:
                raise NonPositiveParameter(f"h[{i}]", h)
        return RowHeights(policy.explicit)
    if policy.value is None or policy.value <= 0:
        raise NonPositiveParameter("delta" if policy.kind == HeightPolicy.UNIFORM else "H", policy.value)
    if policy.kind == HeightPolicy.UNIFORM:
        return RowHeights.uniform(table.rows, policy.value)
    if policy.kind == HeightPolicy.PROPORTIONAL:
        sums = table.row_sums()
        total = sum(sums, Fraction(0))
        return RowHeights(tuple(policy.value * s / total for s in sums))
    raise ValueError(f"Unknown height policy kind '{policy.kind}'")


@dataclass(frozen=True)
class Hyperbola:
    """
    Height f(l) = area / l of a run of row ``i`` anchored at one side of the layout.

    ``side`` is "left" for runs measured from the left boundary and "right" for runs
    measured from the right boundary. ``kind`` is "cell" for a run ending at a cell and
    "gap" for a run ending at the far side of an empty rectangle; ``col`` is the stream
    whose rectangle the run ends next to. The run is valid while its width stays within
    [ell_min, ell_max]; ``ell_max`` is None when no neighbouring row constrains it.
    """
    side: str
    kind: str
    col: int
    area: Fraction
    ell_min: Fraction
    ell_max: Optional[Fraction]

    def min_height(self) -> Fraction:
        """Smallest row height at which the run is still valid."""
        if self.ell_max is None:
            return Fraction(0)
        return self.area / self.ell_max

    def meets(self, other: 'Hyperbola', width: Fraction) -> Fraction:
        """Height at which this run and an opposing one together span ``width``."""
        return (self.area + other.area) / width


@dataclass(frozen=True)
class ShrinkCandidate:
    target: EmptyRect
    hyperbolas: Tuple[Hyperbola, ...]
    current_height: Fraction
    new_height: Optional[Fraction]
    lower_bound: Fraction
    left_area: Fraction = Fraction(0)
    right_area: Fraction = Fraction(0)


def _bound(values) -> Optional[Fraction]:
    return min(values, default=None)


def shrink_candidate(layout: Layout, target: EmptyRect) -> ShrinkCandidate:
    """
    Decide whether ``target`` can be closed by shrinking the height of its row.

    Left of the gap, every prefix of the row ending at a cell (and every prefix ending
    at the far side of an earlier gap) keeps its area while the row shrinks, so its width
    follows a hyperbola. Rows above and below do not move: a prefix may only grow while
    the next stream still touches them. Suffixes right of the gap mirror this. The new
    height is the first, i.e. highest, intersection of a left and a right hyperbola that
    lies in the interval where every hyperbola is valid.
    """
    i, j = target.row, target.gap_after_col
    current = layout.heights[i]
    if j < 0 or j >= layout.cols - 1:
        return ShrinkCandidate(target, (), current, None, current)

    x0, x1 = layout.x_min, layout.x_max
    position = layout.order.position()[i]
    neighbours = [layout.order[p] for p in (position - 1, position + 1) if 0 <= p < layout.rows]
    row = layout.rects[i]

    left: List[Hyperbola] = []
    for k in range(j + 1):
        ell_max = _bound(layout.rects[n][k + 1].right - x0 for n in neighbours)
        left.append(Hyperbola("left", "cell", k, current * (row[k].right - x0), row[k].right - x0, ell_max))
        if k < j and row[k + 1].left > row[k].right:
            ell = row[k + 1].left - x0
            left.append(Hyperbola("left", "gap", k + 1, current * ell, ell, ell_max))
    right: List[Hyperbola] = []
    for k in range(j + 1, layout.cols):
        ell_max = _bound(x1 - layout.rects[n][k - 1].left for n in neighbours)
        right.append(Hyperbola("right", "cell", k, current * (x1 - row[k].left), x1 - row[k].left, ell_max))
        if k > j + 1 and row[k].left > row[k - 1].right:
            ell = x1 - row[k - 1].right
            right.append(Hyperbola("right", "gap", k - 1, current * ell, ell, ell_max))

    hyperbolas = tuple(left + right)
    lower = max(h.min_height() for h in hyperbolas)
    meetings = [(a.meets(b, x1 - x0), a, b) for a in left for b in right]
    inside = [m for m in meetings if lower <= m[0] < current]
    if not inside:
        logger.debug("gap (%d, %d): no intersection in [%s, %s)", i, j, lower, current)
        return ShrinkCandidate(target, hyperbolas, current, None, lower)
    new_height, a, b = max(inside, key=lambda m: m[0])
    logger.debug("gap (%d, %d): new height %s, valid from %s", i, j, new_height, lower)
    return ShrinkCandidate(target, hyperbolas, current, new_height, lower, a.area, b.area)


@dataclass(frozen=True)
class ImprovementStep:
    iteration: int
    row: int
    gap_after_col: int
    old_height: Fraction
    new_height: Fraction
    excess_before: Fraction
    excess_after: Fraction
    accepted: bool


@dataclass
class ImprovementResult:
    heights: RowHeights
    layout: Layout
    log: List[ImprovementStep] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return sum(1 for step in self.log if step.accepted)

    def __iter__(self):
        return iter((self.heights, self.layout, self.log))


def local_improve(
        table: Table,
        heights: RowHeights,
        max_iters: int = DEFAULT_MAX_ITERS,
        order: Optional[Sequence[int]] = None
) -> ImprovementResult:
    """
    Shrink rows one at a time while that strictly lowers the total excess area.

    Every iteration walks the empty rectangles largest first, applies the first feasible
    new height, re-runs the greedy layout and keeps the change only when the excess
    strictly decreased.

    Args:
        table (Table): The weighted table.
        heights (RowHeights): Starting heights.
        max_iters (int): Upper bound on accepted improvements.
        order (Optional[Sequence[int]]): Drawn row order.

    Returns:
        ImprovementResult: Final heights, layout and the log of every evaluated step;
                           unpacks as ``(heights, layout, log)``.
    """
    if max_iters < 0:
        raise NonPositiveParameter("max_iters", max_iters)
    layout = greedy_layout(table, heights, order)
    excess = excess_area(layout)
    result = ImprovementResult(heights, layout)

    for iteration in range(max_iters):
        improved = False
        for gap in empty_rectangles(result.layout):
            candidate = shrink_candidate(result.layout, gap)
            if candidate.new_height is None:
                continue
            trial_heights = result.heights.with_height(gap.row, candidate.new_height)
            trial = greedy_layout(table, trial_heights, order)
            trial_excess = excess_area(trial)
            accepted = trial_excess < excess
            result.log.append(ImprovementStep(
                iteration, gap.row, gap.gap_after_col, candidate.current_height,
                candidate.new_height, excess, trial_excess, accepted
            ))
            if accepted:
                logger.info("row %d: height %s -> %s, excess %s -> %s",
                            gap.row, candidate.current_height, candidate.new_height, excess, trial_excess)
                result.heights, result.layout, excess = trial_heights, trial, trial_excess
                improved = True
                break
        if not improved:
            break
    return result
