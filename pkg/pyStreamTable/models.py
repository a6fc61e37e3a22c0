"""
Description: This module writes the optimisation models of a StreamTable (LP for fixed heights,
             QCQP for variable heights, GP for relaxed cell areas) and validates solutions that
             an external solver sends back.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from pyStreamTable.errors import ConstraintViolated, LayoutInvariantError, MissingVariable, NonPositiveParameter
from pyStreamTable.layout import CellRect, Layout, excess_area
from pyStreamTable.settings import DENOMINATOR_BOUND, IMPORT_TOLERANCE
from pyStreamTable.table import RowHeights, RowOrder, Table

logger = logging.getLogger(__name__)

LP, QCQP, GP = "LP", "QCQP", "GP"
EQ, LE, GE = "=", "<=", ">="


@dataclass(frozen=True)
class Term:
    """
    ``coef * prod(var ** exp)``; linear terms have one factor with exponent 1.
    """
    coef: Fraction
    exps: Tuple[Tuple[str, int], ...]

    @classmethod
    def of(cls, coef, *factors: Union[str, Tuple[str, int]]) -> 'Term':
        exps = tuple(f if isinstance(f, tuple) else (f, 1) for f in factors)
        return cls(Fraction(coef), exps)

    def value(self, assignment: Mapping[str, Fraction]) -> Fraction:
        result = self.coef
        for name, exp in self.exps:
            base = assignment[name]
            if exp < 0 and base == 0:
                raise ZeroDivisionError(name)
            result *= base ** exp
        return result

    @property
    def degree(self) -> int:
        return sum(exp for _, exp in self.exps)


@dataclass(frozen=True)
class Constraint:
    name: str
    family: str
    terms: Tuple[Term, ...]
    relation: str
    rhs: Fraction = Fraction(0)

    def slack(self, assignment: Mapping[str, Fraction]) -> Fraction:
        """Positive (or zero) when satisfied; for equalities the signed residual."""
        lhs = sum((t.value(assignment) for t in self.terms), Fraction(0))
        if self.relation == GE:
            return lhs - self.rhs
        return self.rhs - lhs

    def satisfied(self, assignment: Mapping[str, Fraction], tolerance: Fraction = Fraction(0)) -> bool:
        slack = self.slack(assignment)
        if self.relation == EQ:
            return abs(slack) <= tolerance
        return slack >= -tolerance


@dataclass
class ModelFile:
    """
    A serialized optimisation model plus the exact structure it was written from.

    Attributes:
        kind (str): LP, QCQP or GP.
        text (str): The model in LP file format (LP, QCQP) or JSON monomial lists (GP).
        var_index (dict): Variable name to ``(family, row, col)``; ``col`` is -1 for heights.
        objective (list): Objective terms (minimised).
        constraints (list): Every constraint with exact coefficients.
    """
    kind: str
    text: str
    var_index: Dict[str, Tuple[str, int, int]]
    objective: List[Term]
    constraints: List[Constraint]
    table: Optional[Table] = None
    order: Optional[RowOrder] = None
    heights: Optional[RowHeights] = None
    params: Dict[str, Fraction] = field(default_factory=dict)

    def family_count(self, family: str) -> int:
        return sum(1 for c in self.constraints if c.family == family)

    def objective_value(self, assignment: Mapping[str, Fraction]) -> Fraction:
        return sum((t.value(assignment) for t in self.objective), Fraction(0))


# -- naming ---------------------------------------------------------------

def var_a(i: int, j: int) -> str:
    return f"a_{i + 1}_{j + 1}"


def var_b(i: int, j: int) -> str:
    return f"b_{i + 1}_{j + 1}"


def var_d(i: int, j: int) -> str:
    return f"d_{i + 1}_{j + 1}"


def var_h(i: int) -> str:
    return f"h_{i + 1}"


def _order(table: Table, order: Optional[Sequence[int]]) -> RowOrder:
    return RowOrder(order if order is not None else range(table.rows), table.rows)


def _position_vars(table: Table) -> Dict[str, Tuple[str, int, int]]:
    index = {}
    for i in range(table.rows):
        for j in range(table.cols):
            index[var_a(i, j)] = ("a", i, j)
            index[var_b(i, j)] = ("b", i, j)
    return index


# -- shared linear structure ----------------------------------------------

def _alignment(table: Table, drawn: RowOrder) -> List[Constraint]:
    last = table.cols - 1
    result = []
    for u, l in zip(drawn, drawn[1:]):
        result.append(Constraint(f"C1a_{u + 1}_{l + 1}", "C1",
                                 (Term.of(1, var_a(u, 0)), Term.of(-1, var_a(l, 0))), EQ))
        result.append(Constraint(f"C1b_{u + 1}_{l + 1}", "C1",
                                 (Term.of(1, var_b(u, last)), Term.of(-1, var_b(l, last))), EQ))
    return result


def _separation(table: Table, monomial: bool = False) -> List[Constraint]:
    """
    C0: consecutive cells of a row may touch but never overlap, ``b_{i,k} <= a_{i,k+1}``.
    """
    result = []
    for i in range(table.rows):
        for k in range(table.cols - 1):
            if monomial:
                terms = (Term.of(1, var_b(i, k), (var_a(i, k + 1), -1)),)
                result.append(Constraint(f"C0_{i + 1}_{k + 1}", "C0", terms, LE, Fraction(1)))
            else:
                terms = (Term.of(1, var_b(i, k)), Term.of(-1, var_a(i, k + 1)))
                result.append(Constraint(f"C0_{i + 1}_{k + 1}", "C0", terms, LE))
    return result


def _adjacency(table: Table, drawn: RowOrder, index: Dict[str, Tuple[str, int, int]]) -> List[Constraint]:
    result = []
    for u, l in zip(drawn, drawn[1:]):
        for k in range(table.cols):
            d = var_d(u, k)
            index[d] = ("d", u, k)
            tag = f"{u + 1}_{k + 1}"
            result.extend([
                Constraint(f"C3a_{tag}", "C3", (Term.of(1, var_a(u, k)), Term.of(-1, d)), LE),
                Constraint(f"C3b_{tag}", "C3", (Term.of(1, d), Term.of(-1, var_b(u, k))), LE),
                Constraint(f"C3c_{tag}", "C3", (Term.of(1, var_a(l, k)), Term.of(-1, d)), LE),
                Constraint(f"C3d_{tag}", "C3", (Term.of(1, d), Term.of(-1, var_b(l, k))), LE),
            ])
    return result


# -- LP file format ---------------------------------------------------------

def _number(value: Fraction) -> str:
    """
    Exact decimal when the denominator allows it, otherwise 17 significant digits.
    """
    value = Fraction(value)
    den = value.denominator
    digits = 0
    while den % 10 == 0 or den % 2 == 0 or den % 5 == 0:
        if den % 10 == 0:
            den //= 10
        elif den % 2 == 0:
            den //= 2
        else:
            den //= 5
        digits += 1
    if den != 1:
        return "%.17g" % float(value)
    if value.denominator == 1:
        return str(value.numerator)
    text = f"{abs(value.numerator) * 10 ** digits // value.denominator:0{digits + 1}d}"
    text = f"{text[:-digits]}.{text[-digits:]}".rstrip("0").rstrip(".")
    return ("-" if value < 0 else "") + text


def _signed(value: Fraction) -> str:
    text = _number(value)
    return text if text.startswith("-") else "+" + text


def _lp_terms(terms: Iterable[Term], quadratic_scale: int = 1) -> List[str]:
    linear = [t for t in terms if t.degree == 1]
    quadratic = [t for t in terms if t.degree == 2]
    lines = ["%s %s" % (_signed(t.coef), t.exps[0][0]) for t in linear]
    if quadratic:
        lines.append("+ [")
        for t in quadratic:
            names = " * ".join(name for name, exp in t.exps for _ in range(exp))
            lines.append("%s %s" % (_signed(t.coef * quadratic_scale), names))
        lines.append("]" + (" / %d" % quadratic_scale if quadratic_scale != 1 else ""))
    return lines


def write_lp(title: str, objective: List[Term], constraints: List[Constraint], variables: Iterable[str]) -> str:
    """
    Render a model in the LP file format (Minimize / Subject To / Bounds / End).
    """
    lines = [f"\\* {title} *\\", "", "minimize", "obj:"]
    lines.extend(_lp_terms(objective, quadratic_scale=2))
    lines.extend(["", "subject to", ""])
    for c in constraints:
        lines.append(f"{c.name}:")
        lines.extend(_lp_terms(c.terms))
        lines.append(f"{c.relation} {_number(c.rhs)}")
        lines.append("")
    lines.append("bounds")
    for name in variables:
        lines.append(f"   0 <= {name} <= +inf")
    lines.append("end")
    return "\n".join(lines) + "\n"


def emit_lp_model(
        table: Table,
        heights: RowHeights,
        order: Optional[Sequence[int]] = None,
        separate_cells: bool = False
) -> ModelFile:
    """
    The linear program of the fixed-height problem.

    Minimises the gap area ``sum h_i (a_{i,k+1} - b_{i,k})`` subject to the alignment (C1),
    width (C2) and adjacency (C3) constraints, all variables non-negative. With
    ``separate_cells`` the row-order constraints C0 are added; without them nothing keeps
    two cells of a row from overlapping.
    """
    drawn = _order(table, order)
    index = _position_vars(table)
    objective = []
    for i in range(table.rows):
        for k in range(table.cols - 1):
            objective.append(Term.of(heights[i], var_a(i, k + 1)))
            objective.append(Term.of(-heights[i], var_b(i, k)))
    constraints = _alignment(table, drawn)
    for i in range(table.rows):
        for j in range(table.cols):
            constraints.append(Constraint(
                f"C2_{i + 1}_{j + 1}", "C2",
                (Term.of(1, var_b(i, j)), Term.of(-1, var_a(i, j))), EQ, table.weight(i, j) / heights[i]
            ))
    if separate_cells:
        constraints.extend(_separation(table))
    constraints.extend(_adjacency(table, drawn, index))
    text = write_lp(f"StreamTable LP: {table.rows} rows, {table.cols} columns", objective, constraints, index)
    logger.debug("LP model: %d variables, %d constraints", len(index), len(constraints))
    return ModelFile(LP, text, index, objective, constraints, table, drawn, heights)


def emit_qcqp_model(
        table: Table,
        total_height,
        order: Optional[Sequence[int]] = None,
        separate_cells: bool = False
) -> ModelFile:
    """
    The quadratically constrained program of the variable-height problem.

    Same structure as the LP with the heights h_i as variables: width constraints become
    ``h_i b_ij - h_i a_ij = w_ij`` and the heights must sum to ``total_height``.
    """
    total_height = Fraction(total_height)
    if total_height <= 0:
        raise NonPositiveParameter("H", total_height)
    drawn = _order(table, order)
    index = _position_vars(table)
    objective = []
    for i in range(table.rows):
        for k in range(table.cols - 1):
            objective.append(Term.of(1, var_h(i), var_a(i, k + 1)))
            objective.append(Term.of(-1, var_h(i), var_b(i, k)))
    constraints = _alignment(table, drawn)
    for i in range(table.rows):
        for j in range(table.cols):
            constraints.append(Constraint(
                f"C2_{i + 1}_{j + 1}", "C2",
                (Term.of(1, var_h(i), var_b(i, j)), Term.of(-1, var_h(i), var_a(i, j))), EQ, table.weight(i, j)
            ))
    if separate_cells:
        constraints.extend(_separation(table))
    constraints.extend(_adjacency(table, drawn, index))
    for i in range(table.rows):
        index[var_h(i)] = ("h", i, -1)
    constraints.append(Constraint("C4_height", "C4", tuple(Term.of(1, var_h(i)) for i in range(table.rows)),
                                  EQ, total_height))
    text = write_lp(f"StreamTable QCQP: {table.rows} rows, {table.cols} columns, H = {total_height}",
                    objective, constraints, index)
    return ModelFile(QCQP, text, index, objective, constraints, table, drawn, None, {"H": total_height})


# -- geometric program --------------------------------------------------------

def _fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _term_json(term: Term) -> dict:
    return {"coef": _fraction_text(term.coef), "exps": {name: exp for name, exp in term.exps}}


def write_gp(objective: List[Term], constraints: List[Constraint]) -> str:
    document = {
        "objective": [_term_json(t) for t in objective],
        "constraints": [
            {"name": c.name, "relation": c.relation, "terms": [_term_json(t) for t in c.terms]}
            for c in constraints
        ],
    }
    return json.dumps(document, indent=2) + "\n"


def emit_gp_model(
        table: Table,
        width,
        total_height,
        order: Optional[Sequence[int]] = None,
        separate_cells: bool = False
) -> ModelFile:
    """
    The geometric program where cells may cover more than their weight.

    Every constraint is written as ``posynomial <= 1`` or ``monomial = 1``; the objective
    ``sum h_i b_{i,c}`` is the area of the drawing.
    """
    width, total_height = Fraction(width), Fraction(total_height)
    if width <= 0:
        raise NonPositiveParameter("W", width)
    if total_height <= 0:
        raise NonPositiveParameter("H", total_height)
    drawn = _order(table, order)
    last = table.cols - 1
    index = _position_vars(table)
    for i in range(table.rows):
        index[var_h(i)] = ("h", i, -1)

    objective = [Term.of(1, var_h(i), var_b(i, last)) for i in range(table.rows)]
    constraints = []
    pairs = list(zip(drawn, drawn[1:]))
    for u, l in pairs:
        constraints.append(Constraint(f"C1_{u + 1}_{l + 1}", "C1",
                                      (Term.of(1, var_a(u, 0), (var_a(l, 0), -1)),), EQ, Fraction(1)))
    for u, l in pairs:
        constraints.append(Constraint(f"C2_{u + 1}_{l + 1}", "C2",
                                      (Term.of(1, var_b(u, last), (var_b(l, last), -1)),), EQ, Fraction(1)))
    for i in range(table.rows):
        for j in range(table.cols):
            constraints.append(Constraint(f"C3_{i + 1}_{j + 1}", "C3", (
                Term.of(table.weight(i, j), (var_h(i), -1), (var_b(i, j), -1)),
                Term.of(1, var_a(i, j), (var_b(i, j), -1)),
            ), LE, Fraction(1)))
    for i in range(table.rows):
        for j in range(table.cols):
            constraints.append(Constraint(f"C4_{i + 1}_{j + 1}", "C4",
                                          (Term.of(1, var_a(i, j), (var_b(i, j), -1)),), LE, Fraction(1)))
    if separate_cells:
        constraints.extend(_separation(table, monomial=True))
    for u, l in pairs:
        for k in range(table.cols):
            constraints.append(Constraint(f"C5_{u + 1}_{k + 1}", "C5",
                                          (Term.of(1, var_a(u, k), (var_b(l, k), -1)),), LE, Fraction(1)))
    for u, l in pairs:
        for k in range(table.cols):
            constraints.append(Constraint(f"C6_{u + 1}_{k + 1}", "C6",
                                          (Term.of(1, var_a(l, k), (var_b(u, k), -1)),), LE, Fraction(1)))
    constraints.append(Constraint("C7_height", "C7",
                                  tuple(Term.of(1 / total_height, var_h(i)) for i in range(table.rows)),
                                  LE, Fraction(1)))
    constraints.append(Constraint("C8_width", "C8", (Term.of(1 / width, var_b(drawn[0], last)),), LE, Fraction(1)))
    text = write_gp(objective, constraints)
    return ModelFile(GP, text, index, objective, constraints, table, drawn, None, {"W": width, "H": total_height})


def _term_from_json(data: dict) -> Term:
    return Term(Fraction(data["coef"]), tuple((name, int(exp)) for name, exp in data["exps"].items()))


def parse_gp_model(text: str) -> ModelFile:
    """
    Read a JSON monomial-list model back; ``write_gp`` of the result reproduces ``text``.
    """
    document = json.loads(text)
    objective = [_term_from_json(t) for t in document["objective"]]
    constraints = []
    index: Dict[str, Tuple[str, int, int]] = {}
    for c in document["constraints"]:
        terms = tuple(_term_from_json(t) for t in c["terms"])
        constraints.append(Constraint(c["name"], c["name"].split("_")[0], terms, c["relation"], Fraction(1)))
    for term in objective + [t for c in constraints for t in c.terms]:
        for name, _ in term.exps:
            family, *rest = name.split("_")
            numbers = [int(x) - 1 for x in rest]
            index.setdefault(name, (family, numbers[0], numbers[1] if len(numbers) > 1 else -1))
    return ModelFile(GP, write_gp(objective, constraints), index, objective, constraints)


# -- solutions ------------------------------------------------------------------

def read_solution(text: str) -> Dict[str, str]:
    """
    Parse ``var value`` lines (``#`` starts a comment) or a JSON object of values.
    """
    if text.lstrip().startswith("{"):
        return {str(k): str(v) for k, v in json.loads(text).items()}
    result = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        name, value = line.split()[:2]
        result[name] = value
    return result


def _rationalize(value) -> Tuple[Fraction, bool]:
    """
    Return (value, exact). Integers, Fractions and "p/q" strings are exact; floats and
    decimal strings are snapped by continued fractions within the denominator bound.
    """
    if isinstance(value, (int, Fraction)):
        return Fraction(value), True
    if isinstance(value, str) and "/" in value:
        return Fraction(value.strip()), True
    if isinstance(value, str):
        value = value.strip()
        try:
            return Fraction(int(value)), True
        except ValueError:
            pass
    return Fraction(str(value)).limit_denominator(DENOMINATOR_BOUND), False


def layout_assignment(layout: Layout, model: ModelFile) -> Dict[str, Fraction]:
    """
    The model variables read off an existing layout (adjacency witnesses at the larger left side).
    """
    assignment = {}
    for name, (family, i, j) in model.var_index.items():
        if family == "a":
            assignment[name] = layout.rects[i][j].left
        elif family == "b":
            assignment[name] = layout.rects[i][j].right
        elif family == "h":
            assignment[name] = layout.heights[i]
    for name, (family, u, k) in model.var_index.items():
        if family == "d":
            position = layout.order.position()[u]
            lower = layout.order[position + 1]
            assignment[name] = max(layout.rects[u][k].left, layout.rects[lower][k].left)
    return assignment


@dataclass
class SolutionReport:
    layout: Layout
    objective: Fraction
    exact: bool
    oversized: List[CellRect] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)


def check_solution(model: ModelFile, assignment: Mapping[str, Fraction], tolerance: Fraction = Fraction(0)) -> List[Tuple[str, Fraction]]:
    """
    Every violated bound or constraint as (name, slack), in model order.
    """
    violations = []
    for name in model.var_index:
        if assignment[name] < -tolerance:
            violations.append((f"bound_{name}", assignment[name]))
    for constraint in model.constraints:
        try:
            if not constraint.satisfied(assignment, tolerance):
                violations.append((constraint.name, constraint.slack(assignment)))
        except ZeroDivisionError as error:
            violations.append((constraint.name, Fraction(0)))
            logger.warning("%s is undefined: %s is zero", constraint.name, error)
    return violations


def import_and_validate_solution(model: ModelFile, assignment: Mapping[str, object], table: Table) -> SolutionReport:
    """
    Check an external solver's assignment against ``model`` and turn it into a Layout.

    Exact values are checked with zero tolerance; decimal values are rationalised and
    checked within ``IMPORT_TOLERANCE``. GP solutions may cover more area than a cell's
    weight; such cells are reported and left as they are.

    Raises:
        MissingVariable: If a model variable has no value.
        ConstraintViolated: For the first violated bound or constraint.
    """
    values: Dict[str, Fraction] = {}
    exact = True
    for name in model.var_index:
        if name not in assignment:
            raise MissingVariable(name)
        values[name], is_exact = _rationalize(assignment[name])
        exact = exact and is_exact
    tolerance = Fraction(0) if exact else IMPORT_TOLERANCE
    violations = check_solution(model, values, tolerance)
    if violations:
        raise ConstraintViolated(*violations[0])

    order = model.order if model.order is not None else RowOrder.identity(table.rows)
    if model.kind == LP:
        heights = model.heights
    else:
        heights = RowHeights(tuple(values[var_h(i)] for i in range(table.rows)))
    report = SolutionReport(None, model.objective_value(values), exact)

    if model.kind == GP:
        rects = []
        for i in range(table.rows):
            row = []
            for j in range(table.cols):
                left = values[var_a(i, j)]
                right = max(values[var_b(i, j)], left + table.weight(i, j) / heights[i])
                row.append(CellRect(i, j, left, right, heights[i]))
            rects.append(row)
        rects = _align(rects, table, exact)
        report.layout = Layout(table, heights, rects, order, allow_oversize=True)
        report.oversized = report.layout.oversized_cells()
        if report.oversized:
            report.notes.append(f"{len(report.oversized)} cells cover more than their weight; they are not shrunk")
            logger.warning(report.notes[-1])
    else:
        lefts = [[values[var_a(i, j)] for j in range(table.cols)] for i in range(table.rows)]
        rects = [
            [CellRect(i, j, lefts[i][j], lefts[i][j] + table.weight(i, j) / heights[i], heights[i])
             for j in range(table.cols)]
            for i in range(table.rows)
        ]
        rects = _align(rects, table, exact)
        report.layout = Layout(table, heights, rects, order)
    if not exact:
        report.notes.append(f"decimal solution accepted within tolerance {IMPORT_TOLERANCE}")
        logger.warning(report.notes[-1])
    logger.info("%s solution: objective %s, layout excess %s", model.kind, report.objective, excess_area(report.layout))
    return report


def _align(rects: List[List[CellRect]], table: Table, exact: bool) -> List[List[CellRect]]:
    """
    Snap rationalised coordinates so the outer streams align exactly and cells keep their
    row order; exact solutions must already be aligned.
    """
    if exact:
        return rects
    x0 = min(row[0].left for row in rects)
    result = []
    for row in rects:
        snapped, cursor = [], x0
        for rect in row:
            left = x0 if rect.col == 0 else max(rect.left, cursor)
            snapped.append(CellRect(rect.row, rect.col, left, left + rect.width, rect.height))
            cursor = left + rect.width
        result.append(snapped)
    edge = max(row[-1].right for row in result)
    for row in result:
        last = row[-1]
        if last.right != edge:
            if edge - last.width < row[-2].right:
                raise LayoutInvariantError(f"Row {last.row} cannot be right-aligned at {edge}")
            row[-1] = CellRect(last.row, last.col, edge - last.width, edge, last.height)
    return result
