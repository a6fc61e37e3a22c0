"""
Description: This module generates the hard StreamTable instances obtained from betweenness
             and from Hamiltonian path in cubic graphs, together with certificate checkers,
             certificate layouts and small brute-force solvers for the source problems.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

import itertools
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from pyStreamTable.errors import CertificateInvalid, InvalidOrder, InvalidTriples, LayoutInvariantError, NotCubic, WTooSmall
from pyStreamTable.greedy import greedy_layout
from pyStreamTable.layout import Layout, excess_area, split_count
from pyStreamTable.search import packed_layout
from pyStreamTable.settings import BETWEENNESS_W, HAMPATH_W
from pyStreamTable.table import RowHeights, RowOrder, Table, to_fraction, validate_table

logger = logging.getLogger(__name__)

BETWEENNESS = "Betweenness"
HAMPATH = "HamPath"

SAMPLE_TRIPLES = ((2, 1, 3), (3, 4, 5), (1, 4, 5), (2, 4, 1), (5, 2, 3))


@dataclass(frozen=True)
class BetweennessInstance:
    """
    Ordered triples (left, centre, right) over a set of integer elements.
    """
    elements: Tuple[int, ...]
    triples: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        elements = tuple(int(e) for e in self.elements)
        triples = tuple(tuple(int(e) for e in t) for t in self.triples)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "triples", triples)
        if len(set(elements)) != len(elements):
            raise InvalidTriples(f"Elements {elements} are not distinct")
        known = set(elements)
        for t in triples:
            if len(t) != 3 or len(set(t)) != 3:
                raise InvalidTriples(f"Triple {t} must have three distinct elements")
            if not known.issuperset(t):
                raise InvalidTriples(f"Triple {t} uses elements outside {sorted(known)}")

    @classmethod
    def from_triples(cls, triples: Sequence[Sequence[int]]) -> 'BetweennessInstance':
        elements = sorted({int(e) for t in triples for e in t})
        return cls(tuple(elements), tuple(tuple(t) for t in triples))

    @property
    def r(self) -> int:
        return len(self.elements)

    @property
    def c(self) -> int:
        return len(self.triples)


class CubicGraph:
    """
    A graph in which every vertex has degree exactly 3, backed by ``networkx.Graph``.
    """

    def __init__(self, edges: Union[nx.Graph, Sequence[Tuple[Hashable, Hashable]]]) -> None:
        graph = edges if isinstance(edges, nx.Graph) else nx.Graph(list(edges))
        if graph.number_of_nodes() == 0:
            raise NotCubic(reason="A cubic graph needs at least one vertex")
        if nx.number_of_selfloops(graph):
            raise NotCubic(reason="A cubic graph has no self loops")
        for vertex, degree in graph.degree():
            if degree != 3:
                raise NotCubic(vertex, degree)
        self.graph = graph

    @property
    def vertices(self) -> List[Hashable]:
        return list(self.graph.nodes())

    @property
    def edges(self) -> List[Tuple[Hashable, Hashable]]:
        return list(self.graph.edges())

    @property
    def n(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def m(self) -> int:
        return self.graph.number_of_edges()


@dataclass(frozen=True)
class ReductionInstance:
    """
    A generated table with its source instance and decision threshold.

    ``threshold`` bounds the excess area (Betweenness) or the number of splits (HamPath).
    """
    table: Table
    kind: str
    source: Union[BetweennessInstance, CubicGraph]
    threshold: Union[Fraction, int]
    w: Fraction
    delta: Fraction = Fraction(1)
    epsilon: Optional[Fraction] = None

    def row_order(self, order: Sequence) -> RowOrder:
        """Map an order of source elements (or vertices) to table rows."""
        labels = [str(x) for x in order]
        try:
            return RowOrder((self.table.row_index(label) for label in labels), self.table.rows)
        except ValueError:
            raise InvalidOrder(order, self.table.rows) from None

    def within_threshold(self, layout: Layout) -> bool:
        if self.kind == BETWEENNESS:
            return split_count(layout) == 0 and excess_area(layout) <= self.threshold
        return excess_area(layout) == 0 and split_count(layout) <= self.threshold

    def to_json(self) -> str:
        threshold = self.threshold
        if isinstance(threshold, Fraction):
            threshold = f"{threshold.numerator}/{threshold.denominator}"
        return json.dumps({
            "kind": self.kind,
            "rows": self.table.rows,
            "cols": self.table.cols,
            "threshold": threshold,
            "w": f"{self.w.numerator}/{self.w.denominator}",
            "delta": f"{self.delta.numerator}/{self.delta.denominator}",
        }, indent=2)


# -- betweenness --------------------------------------------------------------

def _triple_weights(element: int, triple: Tuple[int, int, int], w: Fraction) -> Tuple[Fraction, Fraction, Fraction]:
    left, centre, right = triple
    if element == left:
        return 2 * w / 3, w / 6, w / 6
    if element == right:
        return w / 6, w / 6, 2 * w / 3
    if element == centre:
        return w / 6, 2 * w / 3, w / 6
    return 5 * w / 12, w / 6, 5 * w / 12


def betweenness_to_table(instance: BetweennessInstance, w=BETWEENNESS_W) -> ReductionInstance:
    """
    Build the r x (4c + 1) table of the betweenness reduction.

    Columns are a line column followed, per triple, by its left, middle and right
    columns and another line column. Line cells weigh ``1 / (r (c + 1))``; the three
    cells of a triple in one row share the weight ``w`` as the element's role dictates.

    Raises:
        InvalidTriples: If the instance has fewer than 5 elements or 5 triples.
        WTooSmall: If ``w`` < 15.
    """
    w = to_fraction(w)
    if instance.r < 5 or instance.c < 5:
        raise InvalidTriples(f"The reduction needs r, c >= 5, got r = {instance.r}, c = {instance.c}")
    if w < 15:
        raise WTooSmall(w, Fraction(15))
    r, c = instance.r, instance.c
    epsilon = Fraction(1, r * (c + 1))
    rows = []
    for element in instance.elements:
        row = [epsilon]
        for triple in instance.triples:
            row.extend(_triple_weights(element, triple, w))
            row.append(epsilon)
        rows.append(row)
    col_labels = ["|0"]
    for k in range(c):
        col_labels.extend([f"t{k + 1}.L", f"t{k + 1}.M", f"t{k + 1}.R", f"|{k + 1}"])
    table = validate_table(rows, [str(e) for e in instance.elements], col_labels)
    _assert_equal_row_sums(table)
    threshold = r * c * w / 12
    logger.debug("betweenness table %dx%d, epsilon %s, threshold %s", table.rows, table.cols, epsilon, threshold)
    return ReductionInstance(table, BETWEENNESS, instance, threshold, w, Fraction(1), epsilon)


def check_betweenness_certificate(instance: BetweennessInstance, order: Sequence[int]) -> bool:
    """
    True iff every triple's centre lies strictly between its outer elements in ``order``.
    """
    order = [int(e) for e in order]
    if sorted(order) != sorted(instance.elements):
        raise InvalidOrder(order, instance.r)
    position = {e: k for k, e in enumerate(order)}
    for left, centre, right in instance.triples:
        low, high = sorted((position[left], position[right]))
        if not low < position[centre] < high:
            return False
    return True


def solve_betweenness(instance: BetweennessInstance) -> Optional[Tuple[int, ...]]:
    """The lexicographically first satisfying order, or None."""
    for order in itertools.permutations(instance.elements):
        if check_betweenness_certificate(instance, order):
            return order
    return None


def betweenness_satisfiable(instance: BetweennessInstance) -> bool:
    return solve_betweenness(instance) is not None


def random_betweenness_instance(rng: np.random.Generator, r: int = 5, c: int = 5) -> BetweennessInstance:
    elements = tuple(range(1, r + 1))
    triples = tuple(tuple(int(x) + 1 for x in rng.choice(r, size=3, replace=False)) for _ in range(c))
    return BetweennessInstance(elements, triples)


# -- Hamiltonian path in cubic graphs -----------------------------------------

def hampath_to_table(graph: CubicGraph, w=HAMPATH_W) -> ReductionInstance:
    """
    Build the n x 3m table of the Hamiltonian-path reduction.

    Every edge gets three columns. A row whose vertex is an endpoint of the edge gets
    the L group (7w/12, w/12, 4w/12), every other row the R group (4w/12, w/12, 7w/12).
    """
    if not isinstance(graph, CubicGraph):
        graph = CubicGraph(graph)
    w = to_fraction(w)
    edges = graph.edges
    rows = []
    for vertex in graph.vertices:
        row = []
        for edge in edges:
            if vertex in edge:
                row.extend([7 * w / 12, w / 12, 4 * w / 12])
            else:
                row.extend([4 * w / 12, w / 12, 7 * w / 12])
        rows.append(row)
    col_labels = [f"{u}-{v}.{part}" for u, v in edges for part in "LMR"]
    table = validate_table(rows, [str(v) for v in graph.vertices], col_labels)
    _assert_equal_row_sums(table)
    return ReductionInstance(table, HAMPATH, graph, 4 * (graph.n - 1), w, Fraction(1))


def check_hampath_certificate(graph: CubicGraph, order: Sequence[Hashable]) -> bool:
    """
    True iff consecutive vertices of ``order`` are always adjacent.

    Raises:
        InvalidOrder: If ``order`` is not a permutation of the vertices.
    """
    order = list(order)
    if len(order) != graph.n or set(order) != set(graph.vertices):
        raise InvalidOrder(order, graph.n)
    return all(graph.graph.has_edge(u, v) for u, v in zip(order, order[1:]))


def hamiltonian_path(graph: CubicGraph) -> Optional[Tuple[Hashable, ...]]:
    """Brute force over vertex orders; the first Hamiltonian path found, or None."""
    for order in itertools.permutations(graph.vertices):
        if check_hampath_certificate(graph, order):
            return order
    return None


def sample_cubic_graph() -> CubicGraph:
    """A 6-vertex cubic graph with the Hamiltonian path a, b, c, d, e, f."""
    return CubicGraph([
        ("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"),
        ("a", "d"), ("a", "e"), ("b", "f"), ("c", "f"),
    ])


def k4() -> CubicGraph:
    return CubicGraph(nx.complete_graph(4))


def two_k4() -> CubicGraph:
    """Two disjoint copies of K4: cubic, 8 vertices, no Hamiltonian path."""
    return CubicGraph(nx.disjoint_union(nx.complete_graph(4), nx.complete_graph(4)))


def random_cubic_graph(n: int, seed: int) -> CubicGraph:
    return CubicGraph(nx.random_regular_graph(3, n, seed=seed))


# -- certificates ---------------------------------------------------------------

def certificate_layout(instance: ReductionInstance, order: Sequence) -> Layout:
    """
    The layout the reduction promises for a valid certificate ``order``.

    Betweenness: line columns are stacked at fixed x-coordinates and every triple is
    drawn by the greedy layout inside a band of width w + w/12, giving no split and an
    excess area of exactly r c w / 12. HamPath: the packed layout, with 4(n - 1) splits.

    Raises:
        CertificateInvalid: If ``order`` does not satisfy the source instance.
    """
    if instance.kind == HAMPATH:
        if not check_hampath_certificate(instance.source, order):
            raise CertificateInvalid(f"{list(order)} is not a Hamiltonian path")
        return packed_layout(instance.table, instance.row_order(order), instance.delta)

    source = instance.source
    if not check_betweenness_certificate(source, order):
        raise CertificateInvalid(f"{list(order)} violates a betweenness triple")
    drawn = instance.row_order(order)
    table, w, epsilon = instance.table, instance.w, instance.epsilon
    band = (w + w / 12) / instance.delta
    heights = RowHeights.uniform(table.rows, instance.delta)
    lefts = [[Fraction(0)] * table.cols for _ in range(table.rows)]
    x = epsilon / instance.delta
    for k in range(source.c):
        first = 4 * k + 1
        sub = validate_table([row[first:first + 3] for row in table.weights], table.row_labels,
                             table.col_labels[first:first + 3])
        inner = greedy_layout(sub, heights, drawn)
        if inner.width > band:
            raise LayoutInvariantError(f"Triple {k + 1} needs width {inner.width} > {band}")
        for i in range(table.rows):
            for j in range(3):
                lefts[i][first + j] = x + inner.rects[i][j].left
        x += band
        for i in range(table.rows):
            lefts[i][first + 3] = x
        x += epsilon / instance.delta
    return Layout.from_lefts(table, heights, lefts, drawn)


def _assert_equal_row_sums(table: Table) -> None:
    if len(set(table.row_sums())) != 1:
        raise LayoutInvariantError(f"Generated table has unequal row sums {table.row_sums()}")


# -- instance files -------------------------------------------------------------

def read_triples_json(text: str) -> BetweennessInstance:
    """A JSON list of 3-element arrays."""
    try:
        triples = json.loads(text)
    except json.JSONDecodeError as error:
        raise InvalidTriples(f"Not a JSON list of triples: {error}") from None
    if not isinstance(triples, list):
        raise InvalidTriples("Expected a JSON list of triples")
    try:
        return BetweennessInstance.from_triples(triples)
    except InvalidTriples:
        raise
    except (TypeError, ValueError) as error:
        raise InvalidTriples(f"Triples must be arrays of integers: {error}") from None


def read_edge_list(text: str) -> CubicGraph:
    """One ``u v`` pair per line; ``#`` starts a comment."""
    return CubicGraph(nx.parse_edgelist(text.splitlines(), nodetype=str, data=False))
