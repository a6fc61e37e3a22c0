"""
Description: This module is the pystreamtable command line interface.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from pyStreamTable.errors import StreamTableError
from pyStreamTable.greedy import greedy_layout
from pyStreamTable.heights import HeightPolicy, initial_heights, local_improve
from pyStreamTable.io import (
    format_fraction, layout_from_json, layout_to_dict, layout_to_json, parse_table_csv, read_text,
    table_to_csv, write_text_atomic
)
from pyStreamTable.layout import excess_area, split_count
from pyStreamTable.models import (
    emit_gp_model, emit_lp_model, emit_qcqp_model, import_and_validate_solution, read_solution
)
from pyStreamTable.properties import RenderOptions
from pyStreamTable.reductions import (
    BETWEENNESS, betweenness_to_table, certificate_layout, check_betweenness_certificate,
    check_hampath_certificate, hampath_to_table, random_betweenness_instance, random_cubic_graph,
    read_edge_list, read_triples_json
)
from pyStreamTable.search import AnnealSchedule, anneal_search, brute_force_search, packed_layout
from pyStreamTable.settings import (
    ANNEAL_STEPS, BETWEENNESS_W, BRUTE_FORCE_CAP, DEFAULT_MAX_ITERS, DEFAULT_SCALE, HAMPATH_W, SMOOTHING_RADIUS
)
from pyStreamTable.svg import render_svg
from pyStreamTable.table import RowOrder, Table, to_fraction

logger = logging.getLogger(__name__)


# -- argument types ---------------------------------------------------------------

def _fraction(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"'{text}' is not a decimal or p/q number") from None


def _height_policy(text: str) -> HeightPolicy:
    try:
        return HeightPolicy.parse(text)
    except (ValueError, ZeroDivisionError) as error:
        raise argparse.ArgumentTypeError(str(error)) from None


def _smoothing(text: str) -> Optional[Fraction]:
    if text.lower() == "none":
        return None
    radius = _fraction(text)
    if not 0 <= radius <= Fraction(1, 2):
        raise argparse.ArgumentTypeError(f"'{text}' is outside [0, 1/2]")
    return radius


def parse_order(text: str, labels: Sequence[str]) -> RowOrder:
    """
    Comma separated row tokens; each is matched against the labels first and read as a
    1-based row index otherwise.
    """
    rows = []
    for token in (t.strip() for t in text.split(",")):
        if token in labels:
            rows.append(list(labels).index(token))
        elif token.isdigit():
            rows.append(int(token) - 1)
        else:
            rows.append(-1)
    return RowOrder(rows, len(labels))


def _order_tokens(text: str) -> List[str]:
    return [t.strip() for t in text.split(",")]


def _emit(args: argparse.Namespace, text: str) -> None:
    if getattr(args, "out", None):
        write_text_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _table(args: argparse.Namespace) -> Table:
    return parse_table_csv(read_text(args.table))


def _drawn(args: argparse.Namespace, table: Table) -> Optional[RowOrder]:
    return parse_order(args.order, table.row_labels) if getattr(args, "order", None) else None


# -- subcommands --------------------------------------------------------------------

def cmd_layout(args: argparse.Namespace) -> int:
    table = _table(args)
    layout = greedy_layout(table, initial_heights(table, args.heights), _drawn(args, table))
    _emit(args, layout_to_json(layout) + "\n")
    return 0


def cmd_improve(args: argparse.Namespace) -> int:
    table = _table(args)
    result = local_improve(table, initial_heights(table, args.heights), args.max_iters, _drawn(args, table))
    document = layout_to_dict(result.layout)
    document["iterations"] = result.iterations
    _emit(args, json.dumps(document, indent=2) + "\n")
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    table = _table(args)
    if args.method == "brute":
        result = brute_force_search(table, args.delta, args.objective, args.cap, args.workers, args.reversal)
    else:
        if args.seed is None:
            args.parser.error("--seed is required with --method anneal")
        result = anneal_search(table, args.delta, args.objective, args.seed, AnnealSchedule(steps=args.steps))
    _emit(args, result.to_json() + "\n")
    return 0


def _read_instance(args: argparse.Namespace):
    if args.random is not None:
        if args.seed is None:
            args.parser.error("--seed is required with --random")
        if args.kind == BETWEENNESS.lower():
            return random_betweenness_instance(np.random.default_rng(args.seed), args.random, args.triples)
        return random_cubic_graph(args.random, args.seed)
    if args.instance is None:
        args.parser.error("an instance file or --random is required")
    text = read_text(args.instance)
    return read_triples_json(text) if args.kind == BETWEENNESS.lower() else read_edge_list(text)


def _reduce(args: argparse.Namespace, source):
    if args.kind == BETWEENNESS.lower():
        return betweenness_to_table(source, args.w if args.w is not None else BETWEENNESS_W)
    return hampath_to_table(source, args.w if args.w is not None else HAMPATH_W)


def cmd_gen(args: argparse.Namespace) -> int:
    instance = _reduce(args, _read_instance(args))
    _emit(args, table_to_csv(instance.table))
    if args.manifest:
        write_text_atomic(args.manifest, instance.to_json() + "\n")
    threshold = instance.threshold
    sys.stderr.write(f"threshold: {format_fraction(threshold) if isinstance(threshold, Fraction) else threshold}\n")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    source = _read_instance(args)
    instance = _reduce(args, source)
    drawn = instance.row_order(_order_tokens(args.order))
    if instance.kind == BETWEENNESS:
        order = [source.elements[i] for i in drawn]
        valid = check_betweenness_certificate(source, order)
        layout = certificate_layout(instance, order) if valid else greedy_layout(
            instance.table, initial_heights(instance.table, HeightPolicy.uniform(instance.delta)), drawn)
        metric = format_fraction(excess_area(layout))
    else:
        order = [source.vertices[i] for i in drawn]
        valid = check_hampath_certificate(source, order)
        layout = packed_layout(instance.table, drawn, instance.delta)
        metric = split_count(layout)
    threshold = instance.threshold
    _emit(args, json.dumps({
        "kind": instance.kind,
        "certificate": valid,
        "metric": metric,
        "threshold": format_fraction(threshold) if isinstance(threshold, Fraction) else threshold,
        "within_threshold": instance.within_threshold(layout),
    }, indent=2) + "\n")
    return 0


def _model(args: argparse.Namespace, table: Table):
    drawn = _drawn(args, table)
    separate = args.separate
    if args.kind == "lp":
        return emit_lp_model(table, initial_heights(table, args.heights), drawn, separate)
    if args.total_height is None:
        args.parser.error(f"--total-height is required for {args.kind}")
    if args.kind == "qcqp":
        return emit_qcqp_model(table, args.total_height, drawn, separate)
    if args.width is None:
        args.parser.error("--width is required for gp")
    return emit_gp_model(table, args.width, args.total_height, drawn, separate)


def cmd_emit_model(args: argparse.Namespace) -> int:
    table = _table(args)
    _emit(args, _model(args, table).text)
    return 0


def cmd_import_solution(args: argparse.Namespace) -> int:
    table = _table(args)
    model = _model(args, table)
    report = import_and_validate_solution(model, read_solution(read_text(args.solution)), table)
    document = layout_to_dict(report.layout)
    document["solution"] = {
        "kind": model.kind,
        "objective": format_fraction(report.objective),
        "exact": report.exact,
        "oversized": [[rect.row, rect.col] for rect in report.oversized],
        "notes": report.notes,
    }
    _emit(args, json.dumps(document, indent=2) + "\n")
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    layout = layout_from_json(read_text(args.layout))
    opts = RenderOptions(scale=args.scale, smoothing=args.smooth, show_grid=not args.no_grid, labels=not args.no_labels)
    _emit(args, render_svg(layout, opts))
    return 0


# -- parser -------------------------------------------------------------------------

def _add_table_arguments(parser: argparse.ArgumentParser, heights: bool = True) -> None:
    parser.add_argument("table", help="table CSV file, '-' for standard input")
    if heights:
        parser.add_argument("--heights", type=_height_policy, default=HeightPolicy.uniform(1),
                            help="uniform:DELTA, proportional:H or explicit:h1,h2,... (default uniform:1)")
    parser.add_argument("--order", help="drawn row order as labels or 1-based indices, comma separated")


def _add_instance_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("kind", choices=["betweenness", "hampath"])
    parser.add_argument("instance", nargs="?", help="triples JSON or edge list, '-' for standard input")
    parser.add_argument("--w", type=_fraction, help="cell weight w (default 15 / 12)")
    parser.add_argument("--random", type=int, help="generate a random source instance with this many elements")
    parser.add_argument("--triples", type=int, default=5, help="number of random triples")
    parser.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pystreamtable", description="Exact StreamTable layouts.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler, parser=sub)
        sub.add_argument("--out", help="write the result to this file instead of standard output")
        return sub

    sub = command("layout", cmd_layout, "greedy layout for fixed heights and order")
    _add_table_arguments(sub)

    sub = command("improve", cmd_improve, "greedy layout improved by shrinking rows")
    _add_table_arguments(sub)
    sub.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)

    sub = command("search", cmd_search, "search row orders")
    _add_table_arguments(sub, heights=False)
    sub.add_argument("--objective", choices=["min-excess", "min-splits"], default="min-excess")
    sub.add_argument("--delta", type=_fraction, default=Fraction(1))
    sub.add_argument("--method", choices=["brute", "anneal"], default="brute")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--cap", type=int, default=BRUTE_FORCE_CAP)
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--steps", type=int, default=ANNEAL_STEPS)
    sub.add_argument("--reversal", action="store_true", help="skip reversed orders when the objective allows it")

    sub = command("gen", cmd_gen, "generate the table of a hard instance")
    _add_instance_arguments(sub)
    sub.add_argument("--manifest", help="also write the instance manifest JSON here")

    sub = command("verify", cmd_verify, "check a certificate order against an instance")
    _add_instance_arguments(sub)
    sub.add_argument("--order", required=True, help="elements or vertices, comma separated")

    for name, handler, help_text in (
            ("emit-model", cmd_emit_model, "write the LP, QCQP or GP model of a table"),
            ("import-solution", cmd_import_solution, "validate a solver solution and turn it into a layout"),
    ):
        sub = command(name, handler, help_text)
        sub.add_argument("kind", choices=["lp", "qcqp", "gp"])
        _add_table_arguments(sub)
        if name == "import-solution":
            sub.add_argument("solution", help="'var value' lines or a JSON object")
        sub.add_argument("--total-height", type=_fraction)
        sub.add_argument("--width", type=_fraction)
        sub.add_argument("--separate", action="store_true", help="add the in-row order constraints C0")

    sub = command("render", cmd_render, "render a layout JSON file as SVG")
    sub.add_argument("layout", help="layout JSON file, '-' for standard input")
    sub.add_argument("--scale", type=float, default=DEFAULT_SCALE)
    sub.add_argument("--smooth", type=_smoothing, default=SMOOTHING_RADIUS,
                     help="corner radius as a fraction of the smallest row height, or 'none'")
    sub.add_argument("--no-grid", action="store_true")
    sub.add_argument("--no-labels", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.ERROR if args.quiet else max(logging.DEBUG, logging.WARNING - 10 * args.verbose),
            format="%(levelname)s %(name)s: %(message)s",
        )
        return args.handler(args)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    except StreamTableError as error:
        sys.stderr.write(f"error: {error}\n")
        return 1
    except OSError as error:
        sys.stderr.write(f"error: {error}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
