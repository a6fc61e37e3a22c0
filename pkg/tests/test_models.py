from fractions import Fraction

import pytest

from pyStreamTable.errors import ConstraintViolated, MissingVariable, NonPositiveParameter
from pyStreamTable.greedy import greedy_layout
from pyStreamTable.layout import excess_area
from pyStreamTable.models import (
    GP, LP, QCQP, Term, check_solution, emit_gp_model, emit_lp_model, emit_qcqp_model, import_and_validate_solution,
    layout_assignment, parse_gp_model, read_solution, var_a, var_d
)
from pyStreamTable.table import RowHeights, validate_table
from tests.conftest import random_heights, random_table

SIZES = [(r, c) for r in range(1, 5) for c in range(2, 5)]


def ones(rows, cols):
    return validate_table([[1] * cols for _ in range(rows)])


def variables(model, family):
    return sum(1 for f, _, _ in model.var_index.values() if f == family)


@pytest.mark.parametrize("rows, cols", SIZES)
def test_lp_counts(rows, cols):
    model = emit_lp_model(ones(rows, cols), RowHeights.uniform(rows))
    assert variables(model, "a") + variables(model, "b") == 2 * rows * cols
    assert variables(model, "d") == (rows - 1) * cols
    assert model.family_count("C1") == 2 * (rows - 1)
    assert model.family_count("C2") == rows * cols
    assert model.family_count("C3") == 4 * (rows - 1) * cols
    assert len(model.constraints) == 2 * (rows - 1) + rows * cols + 4 * (rows - 1) * cols
    separated = emit_lp_model(ones(rows, cols), RowHeights.uniform(rows), separate_cells=True)
    assert separated.family_count("C0") == rows * (cols - 1)
    assert len(separated.constraints) == len(model.constraints) + rows * (cols - 1)


@pytest.mark.parametrize("rows, cols", SIZES)
def test_qcqp_counts(rows, cols):
    lp = emit_lp_model(ones(rows, cols), RowHeights.uniform(rows))
    model = emit_qcqp_model(ones(rows, cols), rows)
    assert len(model.var_index) == len(lp.var_index) + rows
    assert len(model.constraints) == len(lp.constraints) + 1
    assert all(t.degree == 2 for c in model.constraints if c.family == "C2" for t in c.terms)


@pytest.mark.parametrize("rows, cols", SIZES)
def test_gp_counts(rows, cols):
    model = emit_gp_model(ones(rows, cols), cols, rows)
    assert len(model.var_index) == 2 * rows * cols + rows
    assert model.family_count("C1") + model.family_count("C2") == 2 * (rows - 1)
    assert model.family_count("C3") == rows * cols
    assert sum(model.family_count(f) for f in ("C4", "C5", "C6")) == rows * cols + 2 * (rows - 1) * cols
    assert model.family_count("C7") == 1
    assert model.family_count("C8") == 1
    assert all(len(c.terms) == 2 for c in model.constraints if c.family == "C3")
    assert model.family_count("C0") == 0
    assert emit_gp_model(ones(rows, cols), cols, rows, separate_cells=True).family_count("C0") == rows * (cols - 1)


def test_one_row_lp():
    model = emit_lp_model(validate_table([[1, 2]]), RowHeights.uniform(1))
    assert len(model.var_index) == 4
    assert model.family_count("C1") == model.family_count("C3") == 0
    assert model.text.startswith("\\*")
    for section in ("minimize", "subject to", "bounds", "end"):
        assert section in model.text.splitlines()


def test_lp_file_writes_exact_decimals():
    model = emit_lp_model(validate_table([[1, 3], [1, 1]]), RowHeights(("1/4", "1/3")))
    assert "= 12" in model.text
    assert "+0.25 a_1_2" in model.text


def test_greedy_coordinates_are_feasible(rng):
    for _ in range(40):
        rows, cols = int(rng.integers(1, 5)), int(rng.integers(2, 5))
        table = random_table(rng, rows, cols)
        heights = random_heights(rng, rows)
        layout = greedy_layout(table, heights)
        model = emit_lp_model(table, heights)
        assignment = layout_assignment(layout, model)
        assert check_solution(model, assignment) == []
        assert model.objective_value(assignment) == excess_area(layout)


def test_greedy_coordinates_fit_the_gp(gap_table):
    heights = RowHeights(("1", "1/2"))
    layout = greedy_layout(gap_table, heights).translated(Fraction(1))
    model = emit_gp_model(gap_table, layout.x_max, layout.height)
    assert check_solution(model, layout_assignment(layout, model)) == []


def test_import_lp_solution(tight_table):
    heights = RowHeights.uniform(2)
    layout = greedy_layout(tight_table, heights)
    model = emit_lp_model(tight_table, heights)
    text = "\n".join(f"{k} {v.numerator}/{v.denominator}" for k, v in layout_assignment(layout, model).items())
    report = import_and_validate_solution(model, read_solution(text), tight_table)
    assert report.exact
    assert report.objective == 0
    assert excess_area(report.layout) == 0


def test_import_rejects_witness_out_of_range(tight_table):
    heights = RowHeights.uniform(2)
    layout = greedy_layout(tight_table, heights)
    model = emit_lp_model(tight_table, heights)
    assignment = layout_assignment(layout, model)
    assignment[var_d(0, 0)] = Fraction(5)
    with pytest.raises(ConstraintViolated) as error:
        import_and_validate_solution(model, assignment, tight_table)
    assert error.value.name.startswith("C3")


def test_import_needs_every_variable(tight_table):
    model = emit_lp_model(tight_table, RowHeights.uniform(2))
    with pytest.raises(MissingVariable):
        import_and_validate_solution(model, {}, tight_table)


def test_import_qcqp_optimum(gap_table):
    heights = RowHeights(("1", "1/2"))
    layout = greedy_layout(gap_table, heights)
    model = emit_qcqp_model(gap_table, Fraction(3, 2))
    assert model.kind == QCQP
    report = import_and_validate_solution(model, layout_assignment(layout, model), gap_table)
    assert list(report.layout.heights) == [1, Fraction(1, 2)]
    assert excess_area(report.layout) == 0


def test_import_decimal_solution(tight_table):
    heights = RowHeights(("1/3", "1/3"))
    layout = greedy_layout(tight_table, heights)
    model = emit_lp_model(tight_table, heights)
    decimals = {k: "%.12f" % float(v) for k, v in layout_assignment(layout, model).items()}
    report = import_and_validate_solution(model, decimals, tight_table)
    assert not report.exact
    assert report.notes
    assert report.layout.width == 9


def test_gp_solution_may_oversize_cells(gap_table):
    model = emit_gp_model(gap_table, 5, 2)
    assert model.kind == GP
    assignment = {"h_1": 1, "h_2": 1, "a_1_1": 1, "b_1_1": 4, "a_1_2": 4, "b_1_2": 5,
                  "a_2_1": 1, "b_2_1": 3, "a_2_2": 3, "b_2_2": 5}
    report = import_and_validate_solution(model, assignment, gap_table)
    assert {(r.row, r.col) for r in report.oversized} == {(1, 0), (1, 1)}
    assert report.objective == 10
    assert report.objective >= gap_table.total_weight() + excess_area(report.layout)


def test_gp_objective_covers_weights_and_excess(rng):
    for _ in range(20):
        rows, cols = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        table, heights = random_table(rng, rows, cols), random_heights(rng, rows)
        layout = greedy_layout(table, heights).translated(1)
        model = emit_gp_model(table, layout.x_max, heights.total())
        report = import_and_validate_solution(model, layout_assignment(layout, model), table)
        assert report.oversized == []
        assert report.objective >= table.total_weight() + excess_area(report.layout)
        assert report.objective == heights.total() * layout.x_max


def test_gp_model_round_trip(tight_table):
    model = emit_gp_model(tight_table, 3, 2)
    again = parse_gp_model(model.text)
    assert again.text == model.text
    assert len(again.constraints) == len(model.constraints)
    assert again.var_index[var_a(1, 1)] == ("a", 1, 1)


def test_read_solution_formats():
    assert read_solution('{"a_1_1": "1/2", "h_1": 2}') == {"a_1_1": "1/2", "h_1": "2"}
    assert read_solution("# comment\na_1_1 0.5\n\nh_1 2 extra\n") == {"a_1_1": "0.5", "h_1": "2"}


def test_terms_refuse_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Term.of(1, ("x", -1)).value({"x": Fraction(0)})


def test_model_parameters_must_be_positive(tight_table):
    with pytest.raises(NonPositiveParameter):
        emit_qcqp_model(tight_table, 0)
    with pytest.raises(NonPositiveParameter):
        emit_gp_model(tight_table, 0, 1)
    assert emit_lp_model(tight_table, RowHeights.uniform(2)).kind == LP
