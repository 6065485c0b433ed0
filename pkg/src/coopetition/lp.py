"""Exact rational linear programming.

A dense two-phase simplex over :class:`fractions.Fraction` with Bland's
least-index rule, so it terminates without perturbation. Optimal solutions
carry constraint duals (shadow prices) and variable reduced costs.

Dual sign conventions (``y`` is the change in optimum per unit increase of a
right-hand side):

==========  =====  =====
sense       ``<=``  ``>=``
==========  =====  =====
max         y >= 0  y <= 0
min         y <= 0  y >= 0
==========  =====  =====

Reduced costs are ``r = c - A^T y``; a nonzero ``r_j`` means variable ``j``
sits at one of its bounds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exceptions import GameInputError, ScaleError
from .game import as_fraction

MAX_DIMENSION = 10_000

LE, EQ, GE = "<=", "==", ">="
_RELATIONS = {LE, EQ, GE}


class LpStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise GameInputError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coeffs", tuple(as_fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", as_fraction(self.rhs))

    def activity(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.coeffs, x) if c), Fraction(0))

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = self.activity(x)
        if self.relation == LE:
            return lhs <= self.rhs
        if self.relation == GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """``sense`` c.x subject to constraints and per-variable bounds.

    Bounds default to ``0 <= x_j`` with no upper bound; ``None`` means
    unbounded on that side.
    """

    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...] = ()
    sense: str = "max"
    lower: Optional[tuple[Optional[Fraction], ...]] = None
    upper: Optional[tuple[Optional[Fraction], ...]] = None

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise GameInputError(f"sense must be 'max' or 'min', not {self.sense!r}")
        obj = tuple(as_fraction(c) for c in self.objective)
        n = len(obj)
        cons = []
        for k, con in enumerate(self.constraints):
            if not isinstance(con, Constraint):
                coeffs, rel, rhs = con
                con = Constraint(tuple(coeffs), rel, rhs)
            if len(con.coeffs) != n:
                raise GameInputError(f"constraint {k} has {len(con.coeffs)} coefficients, expected {n}")
            cons.append(con)

        def bounds(values, default):
            if values is None:
                return (default,) * n
            if len(values) != n:
                raise GameInputError(f"expected {n} bounds, got {len(values)}")
            return tuple(None if v is None else as_fraction(v) for v in values)

        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", tuple(cons))
        object.__setattr__(self, "lower", bounds(self.lower, Fraction(0)))
        object.__setattr__(self, "upper", bounds(self.upper, None))

    @property
    def num_variables(self) -> int:
        return len(self.objective)

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        for v, lo, hi in zip(x, self.lower, self.upper):
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return False
        return all(con.holds(x) for con in self.constraints)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x) if c), Fraction(0))


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    primal: tuple[Fraction, ...] = ()
    objective_value: Optional[Fraction] = None
    dual: tuple[Fraction, ...] = ()
    reduced_costs: tuple[Fraction, ...] = ()

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def dual_objective(lp: LinearProgram, sol: LpSolution) -> Fraction:
    """Dual objective b.y plus the bound terms picked out by the reduced costs."""
    total = sum((con.rhs * y for con, y in zip(lp.constraints, sol.dual)), Fraction(0))
    for r, lo, hi in zip(sol.reduced_costs, lp.lower, lp.upper):
        if not r:
            continue
        at_upper = (r > 0) == (lp.sense == "max")
        bound = hi if at_upper else lo
        if bound is None:
            raise ArithmeticError("reduced cost points at an infinite bound")
        total += r * bound
    return total


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Solve ``lp`` exactly. Deterministic for identical inputs."""
    n = lp.num_variables
    if n == 0:
        raise GameInputError("linear program has no variables")
    if n > MAX_DIMENSION or len(lp.constraints) > MAX_DIMENSION:
        raise ScaleError(
            f"LP with {n} variables and {len(lp.constraints)} constraints exceeds "
            f"the {MAX_DIMENSION} ceiling"
        )

    # x_j = offset_j + sum(coef * z_col) with every z >= 0
    subs: list[list[tuple[int, int]]] = []
    offsets: list[Fraction] = []
    extra_rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
    ncols = 0
    for lo, hi in zip(lp.lower, lp.upper):
        if lo is not None and hi is not None and hi < lo:
            return LpSolution(LpStatus.INFEASIBLE)
        if lo is not None:
            subs.append([(ncols, 1)])
            offsets.append(lo)
            if hi is not None:
                extra_rows.append(({ncols: Fraction(1)}, LE, hi - lo))
            ncols += 1
        elif hi is not None:
            subs.append([(ncols, -1)])
            offsets.append(hi)
            ncols += 1
        else:
            subs.append([(ncols, 1), (ncols + 1, -1)])
            offsets.append(Fraction(0))
            ncols += 2
    nz = ncols

    rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
    for con in lp.constraints:
        row: dict[int, Fraction] = {}
        rhs = con.rhs
        for j, a in enumerate(con.coeffs):
            if not a:
                continue
            rhs -= a * offsets[j]
            for col, coef in subs[j]:
                row[col] = row.get(col, Fraction(0)) + a * coef
        rows.append((row, con.relation, rhs))
    rows.extend(extra_rows)
    m = len(rows)

    slack_of: dict[int, int] = {}
    for r, (_, rel, _) in enumerate(rows):
        if rel != EQ:
            slack_of[r] = ncols
            ncols += 1
    art0 = ncols
    width = ncols + m

    tableau: list[list[Fraction]] = []
    signs: list[int] = []
    zero = Fraction(0)
    for r, (row, rel, rhs) in enumerate(rows):
        line = [zero] * (width + 1)
        for col, v in row.items():
            line[col] = v
        if rel == LE:
            line[slack_of[r]] = Fraction(1)
        elif rel == GE:
            line[slack_of[r]] = Fraction(-1)
        line[width] = rhs
        sign = 1
        if rhs < 0:
            sign = -1
            line = [-v for v in line]
        line[art0 + r] = Fraction(1)
        tableau.append(line)
        signs.append(sign)
    basis = [art0 + r for r in range(m)]

    phase1 = [zero] * width
    for r in range(m):
        phase1[art0 + r] = Fraction(1)
    if m:
        _simplex(tableau, basis, phase1, width)
        infeasibility = sum(tableau[r][width] for r in range(m) if basis[r] >= art0)
        if infeasibility > 0:
            return LpSolution(LpStatus.INFEASIBLE)
        for r in range(m):
            if basis[r] < art0:
                continue
            for j in range(art0):
                if tableau[r][j]:
                    _pivot(tableau, basis, r, j)
                    break

    sense_sign = -1 if lp.sense == "max" else 1
    cost = [zero] * width
    for j, c in enumerate(lp.objective):
        for col, coef in subs[j]:
            cost[col] += sense_sign * c * coef
    if not _simplex(tableau, basis, cost, art0):
        return LpSolution(LpStatus.UNBOUNDED)

    z = [zero] * width
    for r, b in enumerate(basis):
        z[b] = tableau[r][width]
    x = []
    for j in range(n):
        x.append(offsets[j] + sum((coef * z[col] for col, coef in subs[j]), zero))

    # B^-1 sits in the artificial columns since they started as the identity
    duals = []
    for r in range(len(lp.constraints)):
        y_int = sum((cost[b] * tableau[k][art0 + r] for k, b in enumerate(basis) if cost[b]), zero)
        duals.append(sense_sign * signs[r] * y_int)
    reduced = []
    for j, c in enumerate(lp.objective):
        reduced.append(c - sum((con.coeffs[j] * y for con, y in zip(lp.constraints, duals) if y), zero))
    return LpSolution(LpStatus.OPTIMAL, tuple(x), lp.value(x), tuple(duals), tuple(reduced))


def _pivot(tableau, basis, r, j):
    pivot_row = tableau[r]
    piv = pivot_row[j]
    if piv != 1:
        pivot_row[:] = [v / piv for v in pivot_row]
    nz = [(k, v) for k, v in enumerate(pivot_row) if v]
    for i, line in enumerate(tableau):
        if i == r:
            continue
        f = line[j]
        if f:
            for k, v in nz:
                line[k] -= f * v
    basis[r] = j


def _simplex(tableau, basis, cost, allowed) -> bool:
    """Minimize ``cost`` over columns ``< allowed``; False when unbounded."""
    m = len(tableau)
    width = len(cost)
    while True:
        entering = None
        basic_cost = [(r, cost[b]) for r, b in enumerate(basis) if cost[b]]
        in_basis = set(basis)
        for j in range(allowed):
            if j in in_basis:
                continue
            d = cost[j] - sum((c * tableau[r][j] for r, c in basic_cost), Fraction(0))
            if d < 0:
                entering = j
                break
        if entering is None:
            return True
        leave = None
        best = None
        for r in range(m):
            a = tableau[r][entering]
            if a > 0:
                ratio = tableau[r][width] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:
            return False
        _pivot(tableau, basis, leave, entering)


def solve_maxmin(payoff_matrix: Sequence[Sequence]) -> tuple[Fraction, tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Value and optimal strategies of the zero-sum matrix game.

    Rows belong to the maximizer, columns to the minimizer. The column
    strategy is read off the LP duals.
    """
    matrix = [[as_fraction(v) for v in row] for row in payoff_matrix]
    if not matrix or not matrix[0]:
        raise GameInputError("payoff matrix is empty")
    ncols = len(matrix[0])
    if any(len(row) != ncols for row in matrix):
        raise GameInputError("payoff matrix is ragged")
    nrows = len(matrix)
    # variables: row probabilities, then the free value v
    constraints = []
    for j in range(ncols):
        constraints.append(Constraint(tuple(-matrix[i][j] for i in range(nrows)) + (Fraction(1),), LE, Fraction(0)))
    constraints.append(Constraint((Fraction(1),) * nrows + (Fraction(0),), EQ, Fraction(1)))
    lp = LinearProgram(
        objective=(Fraction(0),) * nrows + (Fraction(1),),
        constraints=tuple(constraints),
        sense="max",
        lower=(Fraction(0),) * nrows + (None,),
    )
    sol = solve_lp(lp)
    if not sol.is_optimal:
        raise ArithmeticError(f"maxmin LP unexpectedly {sol.status.value}")
    return sol.objective_value, sol.primal[:nrows], sol.dual[:ncols]
