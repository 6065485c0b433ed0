"""Independent reference computations used to check the library.

Nothing here imports the solvers under test; each oracle is the simplest
brute-force or closed-form method available for its small case.
"""

import itertools
from fractions import Fraction

import sympy


def ne_2x2(A, B):
    """All Nash equilibria of a nondegenerate 2x2 bimatrix game.

    Returns a set of ((p, 1 - p), (q, 1 - q)) pairs where p, q are the
    probabilities of the first row and column.
    """
    out = set()
    for r, c in itertools.product(range(2), repeat=2):
        if A[r][c] >= A[1 - r][c] and B[r][c] >= B[r][1 - c]:
            p = Fraction(1 - r)
            q = Fraction(1 - c)
            out.add(((p, 1 - p), (q, 1 - q)))
    # column indifferent: p*B00 + (1-p)*B10 == p*B01 + (1-p)*B11
    den_p = B[0][0] - B[1][0] - B[0][1] + B[1][1]
    den_q = A[0][0] - A[0][1] - A[1][0] + A[1][1]
    if den_p and den_q:
        p = Fraction(B[1][1] - B[1][0], den_p)
        q = Fraction(A[1][1] - A[0][1], den_q)
        if 0 < p < 1 and 0 < q < 1:
            out.add(((p, 1 - p), (q, 1 - q)))
    return out


def is_nondegenerate_2x2(A, B):
    """No payoff ties along any best-response comparison."""
    return all(A[0][c] != A[1][c] for c in range(2)) and all(B[r][0] != B[r][1] for r in range(2))


def maxmin_value(M):
    """Value of a zero-sum matrix game with two rows or two columns.

    The optimum of a one-parameter piecewise-linear envelope sits at an
    endpoint or where two lines cross, so it is enough to try those points.
    """
    M = [[Fraction(v) for v in row] for row in M]
    if len(M) == 2:
        lines = [(M[0][j] - M[1][j], M[1][j]) for j in range(len(M[0]))]  # payoff = slope*p + icpt

        def envelope(p):
            return min(s * p + b for s, b in lines)

        best = max
    elif len(M[0]) == 2:
        lines = [(row[0] - row[1], row[1]) for row in M]  # column mixes q on column 0

        def envelope(q):
            return max(s * q + b for s, b in lines)

        best = min
    else:
        raise ValueError("oracle handles only 2-row or 2-column matrices")
    points = {Fraction(0), Fraction(1)}
    for (s1, b1), (s2, b2) in itertools.combinations(lines, 2):
        if s1 != s2:
            x = (b2 - b1) / (s1 - s2)
            if 0 <= x <= 1:
                points.add(x)
    return best(envelope(x) for x in points)


def lp_vertex_optimum(objective, ineqs=(), eqs=(), sense="max"):
    """Optimum of ``c.x`` over ``{x >= 0, A x <= b, E x == f}`` by enumerating vertices.

    ``ineqs`` and ``eqs`` are lists of (coefficients, rhs). Returns
    (value, vertex) or ``None`` when infeasible. Assumes a bounded problem.
    """
    n = len(objective)
    rows = [(list(a), b) for a, b in ineqs]
    rows += [([int(k == j) * -1 for k in range(n)], 0) for j in range(n)]  # -x_j <= 0
    eq_rows = [(list(a), f) for a, f in eqs]
    best = None
    need = n - len(eq_rows)
    if need < 0:
        need = 0
    for tight in itertools.combinations(range(len(rows)), need):
        system = eq_rows + [rows[t] for t in tight]
        if not system:
            continue
        A = sympy.Matrix([[sympy.Rational(v) for v in a] for a, _ in system])
        b = sympy.Matrix([sympy.Rational(v) for _, v in system])
        if A.rank() < n:
            continue
        sol, params = A.gauss_jordan_solve(b)
        if params.shape[0]:
            continue
        x = [Fraction(int(v.p), int(v.q)) for v in sol]
        if any(sum(Fraction(c) * xv for c, xv in zip(a, x)) > Fraction(rhs) for a, rhs in rows):
            continue
        if any(sum(Fraction(c) * xv for c, xv in zip(a, x)) != Fraction(rhs) for a, rhs in eq_rows):
            continue
        value = sum(Fraction(c) * xv for c, xv in zip(objective, x))
        if best is None or (value > best[0] if sense == "max" else value < best[0]):
            best = (value, tuple(x))
    return best


def pure_coe_profiles(payoff, shape, team, adversary):
    """Every pure (team joint action, adversary action) that is a CoE.

    ``payoff(joint)`` returns the payoff vector of a full joint action.
    A pure profile is a CoE iff no single team player and not the adversary
    can improve by a unilateral switch.
    """
    found = []
    for joint in itertools.product(*(range(s) for s in shape)):
        ok = True
        for p in list(team) + [adversary]:
            for b in range(shape[p]):
                dev = list(joint)
                dev[p] = b
                if payoff(tuple(dev))[p] > payoff(joint)[p]:
                    ok = False
        if ok:
            found.append(joint)
    return found


def team_value_of(payoff, team, joint):
    return sum(payoff(joint)[i] for i in team)
