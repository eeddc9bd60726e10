"""Two-phase simplex over exact rationals.

Standard form: minimize c.x subject to A x = b, x >= 0.  Bland's rule
is used for both the entering and leaving choices, so the method
terminates on degenerate problems and, given identical input, always
performs the identical pivot sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import LpInfeasibleError, LpUnboundedError

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class LpResult:
    x: list[Fraction]
    value: Fraction


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    piv = tableau[row][col]
    if piv != 1:
        inv = _ONE / piv
        tableau[row] = [v * inv for v in tableau[row]]
    pivot_row = tableau[row]
    for i, r in enumerate(tableau):
        if i != row and r[col] != 0:
            f = r[col]
            tableau[i] = [a - f * b for a, b in zip(r, pivot_row)]
    basis[row] = col


def _run(tableau: list[list[Fraction]], basis: list[int], allowed_cols: int) -> bool:
    """Pivot to optimality.  Returns False if unbounded."""
    nrows = len(tableau) - 1
    cost = tableau[-1]
    while True:
        enter = next((j for j in range(allowed_cols) if cost[j] < 0), None)
        if enter is None:
            return True
        leave = None
        best = None
        for i in range(nrows):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return False
        _pivot(tableau, basis, leave, enter)
        cost = tableau[-1]


def solve_standard_lp(a_eq: list[list[Fraction]], b_eq: list[Fraction],
                      cost: list[Fraction]) -> LpResult:
    """Minimize cost.x over {x >= 0 : A x = b}.

    Raises LpInfeasibleError / LpUnboundedError accordingly.
    """
    nrows = len(a_eq)
    ncols = len(cost)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(nrows):
        row = [Fraction(v) for v in a_eq[i]]
        b = Fraction(b_eq[i])
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)

    # Phase 1: artificial basis, minimize the artificial mass.
    tableau = []
    for i in range(nrows):
        art = [_ZERO] * nrows
        art[i] = _ONE
        tableau.append(rows[i] + art + [rhs[i]])
    basis = [ncols + i for i in range(nrows)]
    phase1_cost = [_ZERO] * (ncols + nrows + 1)
    for j in range(ncols):
        phase1_cost[j] = -sum(rows[i][j] for i in range(nrows))
    phase1_cost[-1] = -sum(rhs)
    tableau.append(phase1_cost)
    if not _run(tableau, basis, ncols + nrows):
        raise AssertionError("phase 1 cannot be unbounded")
    if tableau[-1][-1] != 0:
        raise LpInfeasibleError("no feasible point")

    # Drive any artificial variables out of the basis; drop redundant rows.
    keep = []
    for i in range(nrows):
        if basis[i] >= ncols:
            col = next((j for j in range(ncols) if tableau[i][j] != 0), None)
            if col is None:
                continue  # 0 = 0 row
            _pivot(tableau, basis, i, col)
        keep.append(i)
    tableau = [tableau[i] for i in keep] + [tableau[-1]]
    basis = [basis[i] for i in keep]

    # Phase 2: rebuild the reduced-cost row for the real objective.
    cost = [Fraction(v) for v in cost]
    reduced = list(cost) + [_ZERO] * nrows + [_ZERO]
    for i, bv in enumerate(basis):
        cb = cost[bv]
        if cb != 0:
            reduced = [rj - cb * tij for rj, tij in zip(reduced, tableau[i])]
    tableau[-1] = reduced
    if not _run(tableau, basis, ncols):
        raise LpUnboundedError("objective unbounded below")

    x = [_ZERO] * ncols
    for i, bv in enumerate(basis):
        if bv < ncols:
            x[bv] = tableau[i][-1]
    value = sum((cv * xv for cv, xv in zip(cost, x)), _ZERO)
    return LpResult(x=x, value=value)


def feasible_point(a_eq: list[list[Fraction]], b_eq: list[Fraction],
                   ncols: int) -> list[Fraction] | None:
    """A point of {x >= 0 : A x = b}, or None if the set is empty."""
    try:
        res = solve_standard_lp(a_eq, b_eq, [_ZERO] * ncols)
    except LpInfeasibleError:
        return None
    return res.x
