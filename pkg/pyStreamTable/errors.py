"""
Description: This module defines the exceptions raised by the StreamTable toolkit.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

from fractions import Fraction
from typing import Optional


class StreamTableError(ValueError):
    """Base class of every domain error raised by the package."""


class NonPositiveWeight(StreamTableError):
    def __init__(self, row: int, col: int, value: Optional[Fraction] = None) -> None:
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"Cell ({row}, {col}) requires a positive weight but received '{value}'")


class TooFewColumns(StreamTableError):
    def __init__(self, cols: int) -> None:
        self.cols = cols
        super().__init__(f"A StreamTable needs at least 2 columns, got {cols}")


class LabelCountMismatch(StreamTableError):
    def __init__(self, kind: str, expected: int, received: int) -> None:
        self.kind = kind
        self.expected = expected
        self.received = received
        super().__init__(f"Expected {expected} {kind} labels but received {received}")


class RaggedTable(StreamTableError):
    def __init__(self, row: int, expected: int, received: int) -> None:
        self.row = row
        super().__init__(f"Row {row} has {received} cells, expected {expected}")


class NonPositiveParameter(StreamTableError):
    def __init__(self, name: str, value) -> None:
        self.name = name
        self.value = value
        super().__init__(f"Parameter '{name}' must be positive, got '{value}'")


class InvalidParameter(StreamTableError):
    def __init__(self, name: str, value, reason: str) -> None:
        self.name = name
        self.value = value
        super().__init__(f"Parameter '{name}' {reason}, got '{value}'")


class InvalidOrder(StreamTableError):
    def __init__(self, order, size: int) -> None:
        self.order = tuple(order)
        super().__init__(f"{list(order)} is not a permutation of {size} rows")


class LayoutInvariantError(StreamTableError):
    """An internal geometric invariant broke; this indicates a bug, never bad input."""


class UnequalRowSums(StreamTableError):
    def __init__(self, sums) -> None:
        self.sums = tuple(sums)
        super().__init__(
            "A packed layout needs equal row sums, got " + ", ".join(str(s) for s in self.sums)
        )


class TooManyRows(StreamTableError):
    def __init__(self, rows: int, cap: int) -> None:
        self.rows = rows
        self.cap = cap
        super().__init__(f"Exhaustive search is capped at {cap} rows, the table has {rows}")


class InvalidTriples(StreamTableError):
    pass


class WTooSmall(StreamTableError):
    def __init__(self, w: Fraction, minimum: Fraction) -> None:
        self.w = w
        self.minimum = minimum
        super().__init__(f"The cell weight w must be at least {minimum}, got {w}")


class NotCubic(StreamTableError):
    def __init__(self, vertex=None, degree: Optional[int] = None, reason: Optional[str] = None) -> None:
        self.vertex = vertex
        self.degree = degree
        super().__init__(reason or f"Vertex '{vertex}' has degree {degree}, a cubic graph needs 3")


class CertificateInvalid(StreamTableError):
    pass


class ParseError(StreamTableError):
    def __init__(self, line: int, col: int, reason: str) -> None:
        self.line = line
        self.col = col
        self.reason = reason
        super().__init__(f"line {line}, column {col}: {reason}")


class ConstraintViolated(StreamTableError):
    def __init__(self, name: str, slack: Fraction) -> None:
        self.name = name
        self.slack = slack
        super().__init__(f"Constraint '{name}' is violated (slack {slack})")


class MissingVariable(StreamTableError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"The assignment does not cover variable '{name}'")
