"""
Description: This module renders StreamTable layouts as SVG, one filled path per stream,
             with optional rounded stream corners.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

import logging
import xml.etree.ElementTree as ET
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pyStreamTable.errors import LayoutInvariantError
from pyStreamTable.layout import Layout, excess_area
from pyStreamTable.properties import RenderOptions
from pyStreamTable.xml_utils import sub_element, svg_to_string

logger = logging.getLogger(__name__)

Number = Union[Fraction, float]
Point = Tuple[Number, Number]
Polygon = List[Point]

LABEL_MARGIN = 48.0
BACKGROUND = "#f2f2f2"


def stream_polygons(layout: Layout, col: int) -> List[Polygon]:
    """
    Exact outlines of stream ``col``, one rectilinear polygon per run of drawn rows whose
    rectangles touch. Vertices go down the right side and back up the left side.
    """
    lefts, rights = layout.left_chain(col), layout.right_chain(col)
    runs: List[List[int]] = []
    for k in range(len(lefts)):
        if not k or max(lefts[k - 1], lefts[k]) > min(rights[k - 1], rights[k]):
            runs.append([])
        runs[-1].append(k)

    polygons = []
    for run in runs:
        right_side, left_side = [], []
        for k in run:
            top, bottom = layout.band(layout.order[k])
            right_side.extend([(rights[k], top), (rights[k], bottom)])
            left_side.extend([(lefts[k], top), (lefts[k], bottom)])
        polygons.append(_simplify(right_side + left_side[::-1]))
    return polygons


def polygon_area(points: Sequence[Point]) -> Number:
    """Shoelace formula; exact for Fraction vertices."""
    n = len(points)
    twice = sum(
        (points[k][0] * points[(k + 1) % n][1] - points[(k + 1) % n][0] * points[k][1] for k in range(n)),
        Fraction(0)
    )
    return abs(twice) / 2


def _simplify(points: Polygon) -> Polygon:
    """Drop repeated vertices and the middle vertex of collinear triples."""
    result: Polygon = []
    for point in points:
        if not result or point != result[-1]:
            result.append(point)
    if len(result) > 1 and result[0] == result[-1]:
        result.pop()
    changed = True
    while changed and len(result) > 3:
        changed = False
        for k in range(len(result)):
            a, b, c = result[k - 1], result[k], result[(k + 1) % len(result)]
            if (b[0] - a[0]) * (c[1] - b[1]) == (b[1] - a[1]) * (c[0] - b[0]):
                del result[k]
                changed = True
                break
    return result


def _fmt(value: float) -> str:
    value = float(value) + 0.0
    return f"{value:.6f}".rstrip("0").rstrip(".") or "0"


def _clearance(at: Fraction, low: Fraction, high: Fraction, sign: int) -> Optional[Fraction]:
    """Room from ``at`` towards ``sign`` before entering [low, high]; None if it never does."""
    if sign > 0:
        return None if high <= at else max(low - at, Fraction(0))
    return None if low >= at else max(at - high, Fraction(0))


def corner_radii(layout: Layout, polygon: Polygon, radius: Fraction) -> List[Fraction]:
    """
    Corner radius per vertex of a stream outline, in layout units.

    Every radius is at most half of both adjacent segments. A concave corner bulges out
    of its stream, so it is also clamped to stay clear of every other cell in the rows
    meeting at the corner, including cells of neighbouring streams.
    """
    n = len(polygon)
    orientation = sum(polygon[k][0] * polygon[(k + 1) % n][1] - polygon[(k + 1) % n][0] * polygon[k][1] for k in range(n))
    rows_at: Dict[Fraction, List[int]] = {}
    for row in layout.order:
        for y in layout.band(row):
            rows_at.setdefault(y, []).append(row)

    radii = []
    for k in range(n):
        (px, py), (x, y), (nx, ny) = polygon[k - 1], polygon[k], polygon[(k + 1) % n]
        length_in = abs(x - px) + abs(y - py)
        length_out = abs(nx - x) + abs(ny - y)
        r = min(radius, length_in / 2, length_out / 2)
        turn = (x - px) * (ny - y) - (y - py) * (nx - x)
        if r > 0 and turn * orientation < 0:
            # the curve fills the quadrant spanned by the reversed incoming and the outgoing edge
            sx = (px - x) + (nx - x)
            sy = (py - y) + (ny - y)
            for row in rows_at.get(y, ()):
                top, bottom = layout.band(row)
                for rect in layout.rects[row]:
                    room = [c for c in (_clearance(x, rect.left, rect.right, sx), _clearance(y, top, bottom, sy))
                            if c is not None]
                    if len(room) == 2:
                        r = min(r, max(room))
        radii.append(r)
    return radii


def _path_data(points: Sequence[Tuple[float, float]], radii: Sequence[float] = ()) -> str:
    """
    Closed path through ``points``; a corner with a positive radius becomes a quadratic
    curve whose ends sit ``radius`` away from it along the two adjacent segments.
    """
    if not any(r > 0 for r in radii):
        return "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in points) + " Z"
    n = len(points)
    commands = []
    for k in range(n):
        (px, py), (x, y), (nx, ny) = points[k - 1], points[k], points[(k + 1) % n]
        r = radii[k]
        if r <= 0:
            commands.append(("M " if k == 0 else "L ") + f"{_fmt(x)} {_fmt(y)}")
            continue
        length_in = abs(x - px) + abs(y - py)
        length_out = abs(nx - x) + abs(ny - y)
        start = (x - (x - px) / length_in * r, y - (y - py) / length_in * r)
        end = (x + (nx - x) / length_out * r, y + (ny - y) / length_out * r)
        commands.append(("M " if k == 0 else "L ") + f"{_fmt(start[0])} {_fmt(start[1])}")
        commands.append(f"Q {_fmt(x)} {_fmt(y)} {_fmt(end[0])} {_fmt(end[1])}")
    return " ".join(commands) + " Z"


def check_export_area(layout: Layout) -> Fraction:
    """
    Compare the rectilinear stream areas with the weights, and the bounding box with
    the weights plus the excess area. Returns the total stream area.

    Raises:
        LayoutInvariantError: On any exact mismatch.
    """
    streams = sum(
        (polygon_area(p) for col in range(layout.cols) for p in stream_polygons(layout, col)),
        Fraction(0)
    )
    cells = sum((rect.area for rect in layout.cells()), Fraction(0))
    if streams != cells:
        raise LayoutInvariantError(f"Stream outlines cover {streams}, the cells cover {cells}")
    box = polygon_area([
        (layout.x_min, Fraction(0)), (layout.x_max, Fraction(0)),
        (layout.x_max, layout.height), (layout.x_min, layout.height),
    ])
    if not layout.allow_oversize and box != layout.table.total_weight() + excess_area(layout):
        raise LayoutInvariantError(f"Bounding box {box} != weights plus excess")
    return streams


def render_svg(layout: Layout, opts: RenderOptions = None) -> str:
    """
    Draw ``layout`` as SVG text.

    The rectilinear geometry is checked exactly before conversion to floats; rounded
    corners are a rendering effect only and change the drawn areas slightly. Without
    labels the viewBox is the bounding box times ``opts.scale``; labels add a margin on
    the left and top.
    """
    opts = opts or RenderOptions()
    check_export_area(layout)
    s = opts.scale
    x0 = layout.x_min
    width, height = float(layout.width) * s, float(layout.height) * s
    margin = LABEL_MARGIN if opts.labels else 0.0

    def point(x: Fraction, y: Fraction) -> Tuple[float, float]:
        return float(x - x0) * s, float(y) * s

    root = ET.Element("svg", {
        "version": "1.1",
        "width": _fmt(width + margin),
        "height": _fmt(height + margin),
        "viewBox": " ".join(_fmt(v) for v in (-margin, -margin, width + margin, height + margin)),
    })
    box = [point(layout.x_min, 0), point(layout.x_max, 0), point(layout.x_max, layout.height), point(layout.x_min, layout.height)]
    sub_element(root, "path", d=_path_data(box), fill=BACKGROUND, class_="background")

    radius = opts.smoothing * min(layout.heights) if opts.smoothing else Fraction(0)
    for col in range(layout.cols):
        colour = opts.colour(col)
        for polygon in stream_polygons(layout, col):
            sub_element(
                root, "path",
                d=_path_data([point(x, y) for x, y in polygon],
                             [float(r) * s for r in corner_radii(layout, polygon, radius)]),
                fill=colour.svg(),
                fill_opacity=None if colour.opacity == 1 else _fmt(colour.opacity),
                class_="stream",
                data_col=layout.table.col_labels[col],
            )

    if opts.show_grid:
        for upper, _ in layout.drawn_pairs():
            _, y = point(x0, layout.band(upper)[1])
            sub_element(root, "line", x1="0", y1=_fmt(y), x2=_fmt(width), y2=_fmt(y),
                        stroke="#555555", stroke_width="1", stroke_dasharray="2 3", class_="row-line")

    if opts.labels:
        for row in layout.order:
            top, bottom = layout.band(row)
            _, y = point(x0, (top + bottom) / 2)
            sub_element(root, "text", layout.table.row_labels[row], x=_fmt(-4), y=_fmt(y),
                        text_anchor="end", dominant_baseline="middle", font_size="12")
        first = layout.order[0]
        for col in range(layout.cols):
            rect = layout.rects[first][col]
            x, _ = point((rect.left + rect.right) / 2, 0)
            sub_element(root, "text", layout.table.col_labels[col], x=_fmt(x), y=_fmt(-6),
                        text_anchor="middle", font_size="12")

    logger.debug("rendered %d streams, corner radius %.3f px", layout.cols, float(radius) * s)
    return svg_to_string(root)
