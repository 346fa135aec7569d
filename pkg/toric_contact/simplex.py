"""
Exact feasibility for small linear programs.

Phase one of the two-phase simplex method on a dense tableau of Fractions,
with Bland's rule for both the entering and the leaving variable so that
degenerate problems (which the fan predicates produce all the time) cannot
cycle. Every variable is nonnegative; callers split free variables.
"""
import logging
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]

LE, GE, EQ = "<=", ">=", "=="


class LinearConstraint(NamedTuple):
    coeffs: Tuple[Number, ...]
    sense: str
    rhs: Number


def _pivot(tableau: List[List[Fraction]], row: int, col: int) -> None:
    pivot_row = tableau[row]
    p = pivot_row[col]
    if p != 1:
        tableau[row] = pivot_row = [x / p for x in pivot_row]
    for i, other in enumerate(tableau):
        if i == row:
            continue
        factor = other[col]
        if factor:
            tableau[i] = [x - factor * y for x, y in zip(other, pivot_row)]


def find_feasible_point(constraints: Sequence[LinearConstraint],
                        num_vars: int) -> Optional[Tuple[Fraction, ...]]:
    """
    Return x >= 0 satisfying every constraint exactly, or None when the
    system is infeasible.
    """
    rows: List[Tuple[List[Fraction], str, Fraction]] = []
    for c in constraints:
        if len(c.coeffs) != num_vars:
            raise ValueError(f"constraint has {len(c.coeffs)} coefficients, expected {num_vars}")
        if c.sense not in (LE, GE, EQ):
            raise ValueError(f"unknown constraint sense {c.sense!r}")
        coeffs = [Fraction(x) for x in c.coeffs]
        rhs = Fraction(c.rhs)
        sense = c.sense
        if rhs < 0:
            coeffs = [-x for x in coeffs]
            rhs = -rhs
            sense = {LE: GE, GE: LE, EQ: EQ}[sense]
        rows.append((coeffs, sense, rhs))

    if not rows:
        return tuple(Fraction(0) for _ in range(num_vars))

    num_slack = sum(1 for _, sense, _ in rows if sense != EQ)
    num_artificial = sum(1 for _, sense, _ in rows if sense != LE)
    width = num_vars + num_slack + num_artificial

    tableau: List[List[Fraction]] = []
    basis: List[int] = []
    slack_col = num_vars
    art_col = num_vars + num_slack
    artificial_rows = []
    for coeffs, sense, rhs in rows:
        line = coeffs + [Fraction(0)] * (num_slack + num_artificial) + [rhs]
        if sense == LE:
            line[slack_col] = Fraction(1)
            basis.append(slack_col)
            slack_col += 1
        else:
            if sense == GE:
                line[slack_col] = Fraction(-1)
                slack_col += 1
            line[art_col] = Fraction(1)
            basis.append(art_col)
            artificial_rows.append(len(tableau))
            art_col += 1
        tableau.append(line)

    # cost row: minimize the sum of artificials, expressed in the initial basis
    cost = [Fraction(0)] * (width + 1)
    for j in range(num_vars + num_slack, width):
        cost[j] = Fraction(1)
    for i in artificial_rows:
        cost = [x - y for x, y in zip(cost, tableau[i])]
    tableau.append(cost)

    iterations = 0
    while True:
        cost = tableau[-1]
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        leaving = None
        best = None
        for i in range(len(rows)):
            a = tableau[i][entering]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            # cannot happen in phase one: the objective is bounded below by zero
            raise RuntimeError("phase-one simplex reported an unbounded direction")
        _pivot(tableau, leaving, entering)
        basis[leaving] = entering
        iterations += 1

    objective = -tableau[-1][-1]
    logger.debug(f"Phase one finished after {iterations} pivots, residual {objective}.")
    if objective != 0:
        return None

    point = [Fraction(0)] * num_vars
    for i, var in enumerate(basis):
        if var < num_vars:
            point[var] = tableau[i][-1]
    return tuple(point)


def is_feasible(constraints: Sequence[LinearConstraint], num_vars: int) -> bool:
    return find_feasible_point(constraints, num_vars) is not None
