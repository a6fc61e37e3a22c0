"""
Description: This module defines the exact data model of a weighted table.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from pyStreamTable.errors import (
    InvalidOrder, LabelCountMismatch, NonPositiveParameter, NonPositiveWeight, RaggedTable, TooFewColumns
)

Weight = Fraction
RawNumber = Union[int, str, Fraction, Rational]


def to_fraction(value: RawNumber) -> Fraction:
    """
    Convert an integer, a rational, or a decimal / "p/q" string to an exact Fraction.

    Floats are refused: they are only ever produced at render time.
    """
    if isinstance(value, float):
        raise TypeError(f"Refusing float '{value}', pass a string or a Fraction to keep it exact")
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


class RowOrder(tuple):
    """
    A permutation of the rows ``0 .. r-1`` as drawn top-to-bottom.
    """

    def __new__(cls, perm: Iterable[int], size: Optional[int] = None) -> 'RowOrder':
        perm = tuple(int(i) for i in perm)
        size = len(perm) if size is None else size
        if len(perm) != size or sorted(perm) != list(range(size)):
            raise InvalidOrder(perm, size)
        return super().__new__(cls, perm)

    @classmethod
    def identity(cls, size: int) -> 'RowOrder':
        return cls(range(size))

    def reversed(self) -> 'RowOrder':
        return RowOrder(reversed(self))

    def position(self) -> List[int]:
        """Inverse permutation: ``position()[row]`` is the drawn index of ``row``."""
        result = [0] * len(self)
        for k, row in enumerate(self):
            result[row] = k
        return result


@dataclass(frozen=True)
class Table:
    """
    An r x c grid of positive rational weights with row and column labels.

    Attributes:
        weights (tuple): ``weights[i][j]`` is the weight of the cell in row i, column j.
        row_labels (tuple): One label per row.
        col_labels (tuple): One label per column.
    """
    weights: Tuple[Tuple[Fraction, ...], ...]
    row_labels: Tuple[str, ...]
    col_labels: Tuple[str, ...]

    def __post_init__(self):
        if not self.weights:
            raise LabelCountMismatch("row", 1, 0)
        cols = len(self.weights[0])
        if cols < 2:
            raise TooFewColumns(cols)
        for i, row in enumerate(self.weights):
            if len(row) != cols:
                raise RaggedTable(i, cols, len(row))
            for j, weight in enumerate(row):
                if not weight > 0:
                    raise NonPositiveWeight(i, j, weight)
        if len(self.row_labels) != len(self.weights):
            raise LabelCountMismatch("row", len(self.weights), len(self.row_labels))
        if len(self.col_labels) != cols:
            raise LabelCountMismatch("column", cols, len(self.col_labels))

    @property
    def rows(self) -> int:
        return len(self.weights)

    @property
    def cols(self) -> int:
        return len(self.weights[0])

    def weight(self, i: int, j: int) -> Fraction:
        return self.weights[i][j]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(row[j] for row in self.weights)

    def row_sums(self) -> Tuple[Fraction, ...]:
        return tuple(sum(row, Fraction(0)) for row in self.weights)

    def total_weight(self) -> Fraction:
        return sum(self.row_sums(), Fraction(0))

    def permuted(self, order: Sequence[int]) -> 'Table':
        """
        Return a new table whose i-th row is row ``order[i]`` of this one.
        """
        order = RowOrder(order, self.rows)
        return Table(
            tuple(self.weights[i] for i in order),
            tuple(self.row_labels[i] for i in order),
            self.col_labels,
        )

    def row_index(self, label: str) -> int:
        return self.row_labels.index(label)


def validate_table(
    raw: Sequence[Sequence[RawNumber]],
    row_labels: Optional[Sequence[str]] = None,
    col_labels: Optional[Sequence[str]] = None
) -> Table:
    """
    Build a Table from a raw grid of rationals, checking every invariant.

    Args:
        raw (Sequence[Sequence]): Row-major grid of weights (ints, Fractions or "p/q" strings).
        row_labels (Optional[Sequence[str]]): Defaults to "r1", "r2", ...
        col_labels (Optional[Sequence[str]]): Defaults to "c1", "c2", ...

    Returns:
        Table: The validated table.

    Raises:
        TooFewColumns: If the grid has fewer than 2 columns.
        NonPositiveWeight: For the first weight that is not strictly positive.
        LabelCountMismatch: If a label list has the wrong length.
    """
    grid = [list(row) for row in raw]
    if not grid:
        raise LabelCountMismatch("row", 1, 0)
    cols = len(grid[0])
    weights = tuple(tuple(to_fraction(value) for value in row) for row in grid)

    _row_labels = tuple(row_labels) if row_labels is not None else tuple(f"r{i + 1}" for i in range(len(grid)))
    _col_labels = tuple(col_labels) if col_labels is not None else tuple(f"c{j + 1}" for j in range(cols))
    return Table(weights, tuple(str(x) for x in _row_labels), tuple(str(x) for x in _col_labels))


@dataclass(frozen=True)
class RowHeights:
    """
    One strictly positive height per table row, indexed by table row (not by drawn position).
    """
    heights: Tuple[Fraction, ...]

    def __post_init__(self):
        converted = tuple(to_fraction(h) for h in self.heights)
        for i, h in enumerate(converted):
            if h <= 0:
                raise NonPositiveParameter(f"h[{i}]", h)
        object.__setattr__(self, "heights", converted)

    @classmethod
    def uniform(cls, rows: int, delta: RawNumber = 1) -> 'RowHeights':
        return cls(tuple([to_fraction(delta)] * rows))

    def __len__(self) -> int:
        return len(self.heights)

    def __getitem__(self, i: int) -> Fraction:
        return self.heights[i]

    def __iter__(self):
        return iter(self.heights)

    def total(self) -> Fraction:
        return sum(self.heights, Fraction(0))

    def with_height(self, i: int, value: Fraction) -> 'RowHeights':
        heights = list(self.heights)
        heights[i] = value
        return RowHeights(tuple(heights))

    def scaled(self, delta: Fraction) -> 'RowHeights':
        return RowHeights(tuple(h * delta for h in self.heights))
