"""
Description: This module reads and writes tables as CSV and layouts as JSON, keeping every
             number exact as a "p/q" string.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

import csv
import io
import json
import logging
import os
import sys
import tempfile
from fractions import Fraction
from typing import Any, Dict, List

from pyStreamTable.errors import ParseError, TooFewColumns
from pyStreamTable.layout import CellRect, Layout, excess_area, split_count
from pyStreamTable.table import RowHeights, Table, validate_table

logger = logging.getLogger(__name__)


def format_fraction(value: Fraction) -> str:
    """Always "p/q", also for integers ("3/1")."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_number(text: str, line: int = 0, col: int = 0) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(line, col, f"expected a decimal or p/q string, got {type(text).__name__} '{text}'")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(line, col, f"'{text}' is not a decimal or p/q number") from None


def parse_table_csv(text: str) -> Table:
    """
    Read a table from CSV text.

    The first record holds the column labels after a blank (or "row") first cell; every
    following record is a row label and one weight per column. Blank lines are skipped.

    Raises:
        ParseError: On a malformed record or number, with 1-based line and column.
        TooFewColumns: If fewer than 2 columns are declared.
        NonPositiveWeight: For a weight <= 0.
    """
    records = [(n, rec) for n, rec in enumerate(csv.reader(io.StringIO(text)), start=1) if any(f.strip() for f in rec)]
    if not records:
        raise ParseError(1, 1, "empty input")
    header_line, header = records[0]
    if header[0].strip() not in ("", "row"):
        raise ParseError(header_line, 1, f"header must start with a blank or 'row' cell, got '{header[0]}'")
    col_labels = [label.strip() for label in header[1:]]
    if len(col_labels) < 2:
        raise TooFewColumns(len(col_labels))

    row_labels, grid = [], []
    for line, record in records[1:]:
        if len(record) != len(col_labels) + 1:
            raise ParseError(line, len(record), f"expected {len(col_labels) + 1} fields, got {len(record)}")
        row_labels.append(record[0].strip())
        grid.append([parse_number(field, line, k) for k, field in enumerate(record[1:], start=2)])
    if not grid:
        raise ParseError(header_line + 1, 1, "no data rows")
    return validate_table(grid, row_labels, col_labels)


def table_to_csv(table: Table) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([""] + list(table.col_labels))
    for label, row in zip(table.row_labels, table.weights):
        writer.writerow([label] + [format_fraction(w) for w in row])
    return buffer.getvalue()


def layout_to_dict(layout: Layout) -> Dict[str, Any]:
    table = layout.table
    return {
        "rows": layout.rows,
        "cols": layout.cols,
        "heights": [format_fraction(h) for h in layout.heights],
        "order": list(layout.order),
        "cells": [
            {"row": rect.row, "col": rect.col, "left": format_fraction(rect.left), "right": format_fraction(rect.right)}
            for rect in layout.cells()
        ],
        "metrics": {"excess": format_fraction(excess_area(layout)), "splits": split_count(layout)},
        "table": {
            "row_labels": list(table.row_labels),
            "col_labels": list(table.col_labels),
            "weights": [[format_fraction(w) for w in row] for row in table.weights],
        },
        "allow_oversize": layout.allow_oversize,
    }


def layout_to_json(layout: Layout) -> str:
    return json.dumps(layout_to_dict(layout), indent=2)


def layout_from_json(text: str) -> Layout:
    """
    Rebuild a layout, re-running every layout validation.

    Raises:
        ParseError: If a required key is missing or a number is malformed.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise ParseError(error.lineno, error.colno, error.msg) from None
    try:
        source = data["table"]
        table = validate_table(source["weights"], source["row_labels"], source["col_labels"])
        heights = RowHeights(tuple(parse_number(h) for h in data["heights"]))
        rects: List[List[CellRect]] = [[None] * table.cols for _ in range(table.rows)]
        for cell in data["cells"]:
            i, j = int(cell["row"]), int(cell["col"])
            rects[i][j] = CellRect(i, j, parse_number(cell["left"]), parse_number(cell["right"]), heights[i])
        if any(rect is None for row in rects for rect in row):
            raise ParseError(0, 0, "layout JSON does not list every cell")
        return Layout(table, heights, rects, data["order"], bool(data.get("allow_oversize", False)))
    except (KeyError, IndexError, TypeError, AttributeError) as error:
        raise ParseError(0, 0, f"malformed layout JSON: {error!r}") from None


def read_text(path: str) -> str:
    """Read a whole file, "-" meaning standard input."""
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as file:
        return file.read()


def write_text_atomic(path: str, text: str) -> None:
    """Write to a temporary file next to ``path`` and rename it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    handle, temp_path = tempfile.mkstemp(dir=directory, prefix=".pystreamtable-")
    try:
        with os.fdopen(handle, "w", encoding="utf-8") as file:
            file.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise
    logger.info("wrote %s", path)
