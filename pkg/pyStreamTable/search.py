"""
Description: This module searches row permutations for the two order-dependent objectives:
             minimum excess area without splits, and minimum splits without excess area.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

import itertools
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from pyStreamTable.errors import NonPositiveParameter, TooManyRows, UnequalRowSums
from pyStreamTable.greedy import greedy_layout
from pyStreamTable.layout import Layout, excess_area, split_count
from pyStreamTable.settings import ANNEAL_COOLING, ANNEAL_STEPS, BRUTE_FORCE_CAP, REVERSAL_CHECK_MAX_ROWS
from pyStreamTable.table import RowHeights, RowOrder, Table, to_fraction

logger = logging.getLogger(__name__)

Score = Union[Fraction, int]

MIN_EXCESS_NO_SPLIT = "MinExcessNoSplit"
MIN_SPLITS_ZERO_EXCESS = "MinSplitsZeroExcess"
OBJECTIVES = {
    "min-excess": MIN_EXCESS_NO_SPLIT,
    "min-splits": MIN_SPLITS_ZERO_EXCESS,
    MIN_EXCESS_NO_SPLIT: MIN_EXCESS_NO_SPLIT,
    MIN_SPLITS_ZERO_EXCESS: MIN_SPLITS_ZERO_EXCESS,
}


def objective_name(objective: str) -> str:
    try:
        return OBJECTIVES[objective]
    except KeyError:
        raise ValueError(f"Unknown objective '{objective}', expected one of {sorted(OBJECTIVES)}") from None


@dataclass(frozen=True)
class SearchResult:
    best_order: RowOrder
    score: Score
    objective: str
    evaluations: int
    optimal: bool
    row_labels: Tuple[str, ...] = ()

    def to_json(self) -> str:
        if self.row_labels:
            order = [self.row_labels[i] for i in self.best_order]
        else:
            order = list(self.best_order)
        score = self.score if isinstance(self.score, int) else f"{self.score.numerator}/{self.score.denominator}"
        return json.dumps({
            "order": order,
            "score": score,
            "objective": self.objective,
            "optimal": self.optimal,
            "evaluations": self.evaluations,
        }, indent=2)


def packed_layout(table: Table, order: Sequence[int], delta=1) -> Layout:
    """
    Draw every row as a gap-free run of cells from x = 0, rows of uniform height ``delta``.

    Raises:
        UnequalRowSums: If the rows do not all have the same sum, so no zero-excess
                        packing with aligned outer streams exists.
    """
    delta = to_fraction(delta)
    if delta <= 0:
        raise NonPositiveParameter("delta", delta)
    sums = table.row_sums()
    if len(set(sums)) != 1:
        raise UnequalRowSums(sums)
    lefts = []
    for row in table.weights:
        xs, cursor = [], Fraction(0)
        for weight in row:
            xs.append(cursor)
            cursor += weight / delta
        lefts.append(xs)
    return Layout.from_lefts(table, RowHeights.uniform(table.rows, delta), lefts, order)


def evaluate_order(table: Table, order: Sequence[int], delta, objective: str) -> Score:
    """
    Score one drawn order: greedy excess for MinExcessNoSplit, packed splits for
    MinSplitsZeroExcess.
    """
    objective = objective_name(objective)
    if objective == MIN_EXCESS_NO_SPLIT:
        return excess_area(greedy_layout(table, RowHeights.uniform(table.rows, delta), order))
    return split_count(packed_layout(table, order, delta))


def reversal_invariant(table: Table, delta, objective: str, samples: int = 50, seed: int = 0) -> bool:
    """
    Check that reversing an order never changes its score. Tables with at most
    REVERSAL_CHECK_MAX_ROWS rows are checked exhaustively, larger ones on random orders.
    """
    r = table.rows
    if r <= REVERSAL_CHECK_MAX_ROWS:
        orders = itertools.permutations(range(r))
    else:
        rng = np.random.default_rng(seed)
        orders = (tuple(int(x) for x in rng.permutation(r)) for _ in range(samples))
    for perm in orders:
        order = RowOrder(perm, r)
        if order[0] > order[-1]:
            continue
        if evaluate_order(table, order, delta, objective) != evaluate_order(table, order.reversed(), delta, objective):
            logger.info("order %s scores differently when reversed", order)
            return False
    return True


def _search_first_row(args) -> Tuple[Optional[Score], Optional[Tuple[int, ...]], int]:
    """Best order among those drawing ``first`` on top, in lexicographic order."""
    table, delta, objective, first, prune = args
    rest = [i for i in range(table.rows) if i != first]
    best_score, best_order, count = None, None, 0
    for tail in itertools.permutations(rest):
        order = (first,) + tail
        if prune and len(order) > 1 and order[0] > order[-1]:
            continue
        score = evaluate_order(table, order, delta, objective)
        count += 1
        if best_score is None or score < best_score:
            best_score, best_order = score, order
    return best_score, best_order, count


def brute_force_search(
        table: Table,
        delta,
        objective: str,
        cap: int = BRUTE_FORCE_CAP,
        workers: int = 1,
        use_reversal_symmetry: bool = False
) -> SearchResult:
    """
    Evaluate every row order and return the best one.

    The permutations are split by their top row; each part is searched in lexicographic
    order, so merging on (score, order) gives the same answer for any number of workers.

    Args:
        table (Table): The weighted table.
        delta: Uniform row height.
        objective (str): "min-excess" / "min-splits" or the full objective name.
        cap (int): Largest number of rows accepted.
        workers (int): Worker processes; 1 searches in-process.
        use_reversal_symmetry (bool): Skip orders whose reversal is lexicographically
                                      smaller, after checking reversal invariance.

    Raises:
        TooManyRows: If the table has more than ``cap`` rows.
    """
    objective = objective_name(objective)
    if table.rows > cap:
        raise TooManyRows(table.rows, cap)
    prune = use_reversal_symmetry and reversal_invariant(table, delta, objective)
    if use_reversal_symmetry and not prune:
        logger.warning("reversal pruning disabled: the objective is not reversal invariant on this table")
    jobs = [(table, to_fraction(delta), objective, first, prune) for first in range(table.rows)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_search_first_row, jobs))
    else:
        parts = [_search_first_row(job) for job in jobs]

    found = [(score, order) for score, order, _ in parts if order is not None]
    score, order = min(found)
    evaluations = sum(count for _, _, count in parts)
    logger.info("brute force: %d orders evaluated, best %s = %s", evaluations, order, score)
    return SearchResult(RowOrder(order), score, objective, evaluations, True, table.row_labels)


@dataclass(frozen=True)
class AnnealSchedule:
    """
    Attributes:
        initial_temperature (Optional[float]): Defaults to max(1, score of the start order).
        cooling (float): Temperature factor applied after every step.
        steps (int): Number of proposed moves.
    """
    initial_temperature: Optional[float] = None
    cooling: float = ANNEAL_COOLING
    steps: int = ANNEAL_STEPS


def _neighbour(order: List[int], rng: np.random.Generator) -> List[int]:
    candidate = list(order)
    if rng.random() < 0.5:
        k = int(rng.integers(len(order) - 1))
        candidate[k], candidate[k + 1] = candidate[k + 1], candidate[k]
    else:
        i, j = (int(x) for x in rng.choice(len(order), size=2, replace=False))
        candidate[i], candidate[j] = candidate[j], candidate[i]
    return candidate


def anneal_search(
        table: Table,
        delta,
        objective: str,
        seed: int,
        schedule: AnnealSchedule = AnnealSchedule(),
        start: Optional[Sequence[int]] = None
) -> SearchResult:
    """
    Simulated annealing over row orders with Metropolis acceptance.

    Moves are adjacent transpositions or random pair swaps with equal probability. The
    result is the best order ever visited and depends only on ``seed`` and ``schedule``.
    """
    objective = objective_name(objective)
    rng = np.random.default_rng(seed)
    current = list(start) if start is not None else list(range(table.rows))
    current_score = evaluate_order(table, current, delta, objective)
    best, best_score = list(current), current_score
    evaluations = 1
    temperature = schedule.initial_temperature
    if temperature is None:
        temperature = max(1.0, float(current_score))

    if table.rows > 1:
        for _ in range(schedule.steps):
            candidate = _neighbour(current, rng)
            score = evaluate_order(table, candidate, delta, objective)
            evaluations += 1
            change = float(score - current_score)
            if change <= 0 or (temperature > 0 and rng.random() < math.exp(-change / temperature)):
                current, current_score = candidate, score
                if (score, candidate) < (best_score, best):
                    best, best_score = list(candidate), score
            temperature *= schedule.cooling
    logger.info("annealing (seed %d): %d evaluations, best %s = %s", seed, evaluations, best, best_score)
    return SearchResult(RowOrder(best), best_score, objective, evaluations, False, table.row_labels)
