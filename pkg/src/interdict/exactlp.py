"""Exact rational linear programming.

A dense two-phase primal simplex over ``fractions.Fraction`` with Bland's
pivoting rule on the canonical variable order, so every solve is
deterministic and every returned number is exact.  The solver produces an
optimal basic feasible solution together with a dual certificate (one
multiplier per constraint row) that is verified for exact complementary
slackness and a zero duality gap before it is returned.

No floating point enters any code path.  Solver state is per-invocation;
concurrent solves share nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

Q = Fraction

LE, GE, EQ = "<=", ">=", "=="


class InfeasibleLP(Exception):
    """The constraint system has no feasible point."""


class UnboundedLP(Exception):
    """The objective is unbounded over the feasible region."""


class TUViolationError(Exception):
    """An LP assumed to have an integral dual produced a fractional one."""


class EdgeExtractionError(Exception):
    """The point passed to edge_endpoints does not lie on an edge."""


@dataclass
class LinearProgram:
    """min/max c^T x subject to rows (a, rel, rhs) and bounds l <= x <= u.

    Lower bounds default to 0 and must be finite; upper bounds are optional.
    All data is Fraction-valued (ints are accepted and coerced).
    """

    n_vars: int
    objective: list
    sense: str = "min"
    rows: list = field(default_factory=list)     # (coeffs, rel, rhs)
    lower: list = None
    upper: list = None

    def __post_init__(self):
        self.objective = [Q(c) for c in self.objective]
        if len(self.objective) != self.n_vars:
            raise ValueError("objective length must equal n_vars")
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        self.lower = [Q(0)] * self.n_vars if self.lower is None else [Q(v) for v in self.lower]
        self.upper = [None] * self.n_vars if self.upper is None else \
            [None if v is None else Q(v) for v in self.upper]

    def add_row(self, coeffs, rel, rhs):
        if len(coeffs) != self.n_vars:
            raise ValueError("row length must equal n_vars")
        if rel not in (LE, GE, EQ):
            raise ValueError(f"unknown relation {rel!r}")
        self.rows.append(([Q(c) for c in coeffs], rel, Q(rhs)))

    def set_bounds(self, j, lower=None, upper=None):
        if lower is not None:
            self.lower[j] = Q(lower)
        self.upper[j] = None if upper is None else Q(upper)


@dataclass
class VertexSolution:
    """Optimal basic solution with an exact dual certificate.

    ``duals`` has one multiplier per constraint row; bound multipliers are
    recoverable as the reduced costs c - A^T y.  ``tight_rows`` and
    ``tight_bounds`` together span the whole variable space.
    """

    x: list
    objective: Fraction
    duals: list
    tight_rows: list
    tight_bounds: list           # (var index, "lower" | "upper")

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.x)


# ---------------------------------------------------------------------------
# simplex core


def _pivot(tableau, basis, row, col):
    piv = tableau[row][col]
    inv = Q(1) / piv
    tableau[row] = [v * inv for v in tableau[row]]
    prow = tableau[row]
    for i, trow in enumerate(tableau):
        if i != row and trow[col] != 0:
            f = trow[col]
            tableau[i] = [a - f * b for a, b in zip(trow, prow)]
    basis[row] = col


def _reduced_cost(tableau, basis, costs, j):
    red = costs[j]
    for i, b in enumerate(basis):
        cb = costs[b]
        if cb != 0 and tableau[i][j] != 0:
            red -= cb * tableau[i][j]
    return red


def _run_simplex(tableau, basis, costs, allowed):
    """Minimize ``costs`` over the standard-form tableau with Bland's rule.

    ``allowed`` marks columns eligible to enter.  A reduced-cost row is
    maintained alongside the tableau and updated with each pivot, so the
    entering scan is a single pass.  Returns the optimal objective value;
    raises UnboundedLP when an entering column has no blocking row.
    """
    m = len(tableau)
    ncols = len(tableau[0]) - 1
    red = [_reduced_cost(tableau, basis, costs, j) for j in range(ncols)]
    zero = Q(0)
    while True:
        entering = -1
        for j in range(ncols):
            if allowed[j] and red[j] < zero:
                entering = j
                break
        if entering < 0:
            return sum(costs[basis[i]] * tableau[i][-1]
                       for i in range(m) if costs[basis[i]] != 0)
        leaving, best = -1, None
        for i in range(m):
            a = tableau[i][entering]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving < 0:
            raise UnboundedLP("objective unbounded")
        _pivot(tableau, basis, leaving, entering)
        f = red[entering]
        prow = tableau[leaving]
        for j in range(ncols):
            if prow[j] != 0:
                red[j] -= f * prow[j]
        red[entering] = zero


class _Standard:
    """Standard-form expansion of a LinearProgram.

    Variables are shifted by their lower bounds; upper bounds become extra
    <= rows appended after the original rows; right-hand sides are made
    nonnegative by row negation (recorded in ``sign``).  Each row gets a
    recovery column (its slack, or its artificial) whose reduced cost in
    the final tableau yields that row's dual multiplier.
    """

    def __init__(self, lp):
        n = lp.n_vars
        rows = []
        for coeffs, rel, rhs in lp.rows:
            adj = rhs - sum(c * s for c, s in zip(coeffs, lp.lower))
            rows.append((coeffs, rel, adj))
        for j in range(n):
            if lp.upper[j] is not None:
                coeffs = [Q(0)] * n
                coeffs[j] = Q(1)
                rows.append((coeffs, LE, lp.upper[j] - lp.lower[j]))

        m = len(rows)
        self.sign = [Q(-1) if rhs < 0 else Q(1) for _, _, rhs in rows]
        self.slack_coef = {}
        ncols = n
        for i, (_, rel, _) in enumerate(rows):
            if rel != EQ:
                self.slack_coef[i] = ((Q(1) if rel == LE else Q(-1)) * self.sign[i], ncols)
                ncols += 1
        self.matrix = []
        self.rhs = []
        for i, (coeffs, rel, rhs) in enumerate(rows):
            row = [Q(0)] * ncols
            for j, c in enumerate(coeffs):
                if c != 0:
                    row[j] = c * self.sign[i]
            if i in self.slack_coef:
                coef, col = self.slack_coef[i]
                row[col] = coef
            self.matrix.append(row)
            self.rhs.append(rhs * self.sign[i])
        self.n_structural = n
        self.ncols = ncols
        self.m = m


def solve_to_vertex(lp: LinearProgram) -> VertexSolution:
    """Solve to an optimal basic feasible solution with a dual certificate.

    Deterministic (Bland's rule, canonical column order; phase 1 via
    auxiliary variables).  Raises InfeasibleLP or UnboundedLP; a failure of
    the exact optimality verification would be a solver bug and raises
    AssertionError.
    """
    n = lp.n_vars
    std = _Standard(lp)
    m = std.m

    basis = [-1] * m
    for i in range(m):
        if i in std.slack_coef:
            coef, col = std.slack_coef[i]
            if coef == 1:
                basis[i] = col
    art_col = {}
    total = std.ncols
    for i in range(m):
        if basis[i] < 0:
            art_col[i] = total
            basis[i] = total
            total += 1
    art_set = set(art_col.values())

    tableau = []
    for i in range(m):
        row = std.matrix[i] + [Q(0)] * (total - std.ncols) + [std.rhs[i]]
        if i in art_col:
            row[art_col[i]] = Q(1)
        tableau.append(row)
    live = list(range(m))

    if art_set:
        costs1 = [Q(1) if j in art_set else Q(0) for j in range(total)]
        if _run_simplex(tableau, basis, costs1, [True] * total) > 0:
            raise InfeasibleLP("no feasible point")
        drop = []
        for i in range(len(tableau)):
            if basis[i] in art_set:
                piv = next((j for j in range(std.ncols) if tableau[i][j] != 0), None)
                if piv is None:
                    drop.append(i)
                else:
                    _pivot(tableau, basis, i, piv)
        for i in reversed(drop):
            del tableau[i], basis[i], live[i]

    minimize = lp.sense == "min"
    costs2 = [Q(0)] * total
    for j in range(n):
        costs2[j] = lp.objective[j] if minimize else -lp.objective[j]
    allowed = [j not in art_set for j in range(total)]
    _run_simplex(tableau, basis, costs2, allowed)

    values = [Q(0)] * total
    for i, b in enumerate(basis):
        values[b] = tableau[i][-1]
    x = [values[j] + lp.lower[j] for j in range(n)]
    objective = sum(c * v for c, v in zip(lp.objective, x)) if n else Q(0)

    # dual of standard row i from its recovery column's reduced cost:
    # 0 - y_i * coef = redcost  =>  y_i = -redcost / coef
    y_std = [Q(0)] * m
    live_set = set(live)
    for i in range(m):
        if i not in live_set:
            continue
        if i in art_col:
            col, coef = art_col[i], Q(1)
        else:
            coef, col = std.slack_coef[i]
        y_std[i] = -_reduced_cost(tableau, basis, costs2, col) / coef
    flip = Q(1) if minimize else Q(-1)
    duals = [y_std[i] * std.sign[i] * flip for i in range(len(lp.rows))]

    tight_rows, tight_bounds = _tight_sets(lp, x)
    sol = VertexSolution(x, objective, duals, tight_rows, tight_bounds)
    _verify(lp, sol)
    return sol


def _tight_sets(lp, x):
    tight_rows = []
    for i, (coeffs, rel, rhs) in enumerate(lp.rows):
        if sum(c * v for c, v in zip(coeffs, x)) == rhs:
            tight_rows.append(i)
    tight_bounds = []
    for j in range(lp.n_vars):
        if x[j] == lp.lower[j]:
            tight_bounds.append((j, "lower"))
        if lp.upper[j] is not None and x[j] == lp.upper[j]:
            tight_bounds.append((j, "upper"))
    return tight_rows, tight_bounds


def _verify(lp, sol):
    """Exact primal/dual feasibility, complementary slackness, zero gap."""
    x, y = sol.x, sol.duals
    for j in range(lp.n_vars):
        assert x[j] >= lp.lower[j], "primal lower bound violated"
        assert lp.upper[j] is None or x[j] <= lp.upper[j], "primal upper bound violated"
    maximize = lp.sense == "max"
    for i, (coeffs, rel, rhs) in enumerate(lp.rows):
        lhs = sum(c * v for c, v in zip(coeffs, x))
        ok = lhs <= rhs if rel == LE else lhs >= rhs if rel == GE else lhs == rhs
        assert ok, f"primal row {i} violated"
        if rel == EQ:
            continue
        if maximize:
            assert (y[i] >= 0) if rel == LE else (y[i] <= 0), "dual sign violated"
        else:
            assert (y[i] <= 0) if rel == LE else (y[i] >= 0), "dual sign violated"
        assert y[i] == 0 or lhs == rhs, "complementary slackness violated"

    dual_obj = sum(y[i] * lp.rows[i][2] for i in range(len(lp.rows)))
    for j in range(lp.n_vars):
        r = lp.objective[j] - sum(lp.rows[i][0][j] * y[i] for i in range(len(lp.rows)))
        if r != 0:
            at_upper = lp.upper[j] is not None and x[j] == lp.upper[j]
            at_lower = x[j] == lp.lower[j]
            if (r > 0) == maximize:
                assert at_upper, "reduced cost / bound mismatch"
            else:
                assert at_lower, "reduced cost / bound mismatch"
            dual_obj += r * x[j]
    assert dual_obj == sol.objective, "nonzero duality gap"


def integral_dual(lp: LinearProgram) -> VertexSolution:
    """Solve and require every row dual to be an integer.

    The caller is responsible for passing an LP whose constraint matrix is
    totally unimodular, so the dual polyhedron has integral vertices and
    the basis dual is one of them.  A fractional dual is diagnosed as
    TUViolationError, never rounded.
    """
    sol = solve_to_vertex(lp)
    for v in sol.duals:
        if v.denominator != 1:
            raise TUViolationError(f"TU assumption violated: fractional dual {v}")
    return sol


# ---------------------------------------------------------------------------
# polytope edges


def _nullspace(rows, n):
    """Basis of the nullspace of the given row vectors (exact)."""
    a = [row[:] for row in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = Q(1) / a[r][col]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [u - f * v for u, v in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Q(0)] * n
        vec[fc] = Q(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -a[i][fc]
        basis.append(vec)
    return basis


def edge_endpoints(polytope: LinearProgram, point) -> tuple:
    """Endpoints of the edge of the polytope whose interior contains point.

    ``point`` must be a vertex of the polytope intersected with exactly one
    extra inequality, and not a vertex of the polytope itself.  The tight
    polytope constraints then leave a one-dimensional movement direction;
    walking it in both directions until a new constraint becomes tight
    yields the two endpoints, and the point is an exact convex combination
    of them.  Raises EdgeExtractionError when the point is already a
    vertex (no movement direction) or the tight set is rank deficient by
    more than one ("not on an edge").
    """
    n = polytope.n_vars
    point = [Q(v) for v in point]
    normals = []
    for coeffs, rel, rhs in polytope.rows:
        if sum(c * v for c, v in zip(coeffs, point)) == rhs:
            normals.append(list(coeffs))
    for j in range(n):
        if point[j] == polytope.lower[j] or (
                polytope.upper[j] is not None and point[j] == polytope.upper[j]):
            e = [Q(0)] * n
            e[j] = Q(1)
            normals.append(e)

    null = _nullspace(normals, n)
    if len(null) == 0:
        raise EdgeExtractionError("point is already a vertex of the polytope")
    if len(null) > 1:
        raise EdgeExtractionError("not on an edge: tight set is rank deficient")
    d = null[0]
    lead = next(v for v in d if v != 0)
    d = [v / lead for v in d]

    def walk(direction):
        best = None
        for coeffs, rel, rhs in polytope.rows:
            slope = sum(c * v for c, v in zip(coeffs, direction))
            if slope == 0:
                continue
            gap = rhs - sum(c * v for c, v in zip(coeffs, point))
            if (rel in (LE, EQ) and slope > 0) or (rel in (GE, EQ) and slope < 0):
                best = _min_opt(best, gap / slope)
        for j in range(n):
            if direction[j] < 0:
                best = _min_opt(best, (polytope.lower[j] - point[j]) / direction[j])
            elif direction[j] > 0 and polytope.upper[j] is not None:
                best = _min_opt(best, (polytope.upper[j] - point[j]) / direction[j])
        if best is None:
            raise EdgeExtractionError("movement direction unbounded; not a polytope")
        return [p + best * v for p, v in zip(point, direction)]

    return walk(d), walk([-v for v in d])


def _min_opt(cur, val):
    return val if cur is None or val < cur else cur


def convex_coefficients(point, end_a, end_b):
    """Exact (t, 1-t) such that point = t*end_a + (1-t)*end_b."""
    for pa, pb, pp in zip(end_a, end_b, point):
        if pa != pb:
            t = (pp - pb) / (pa - pb)
            return t, 1 - t
    return Q(1), Q(0)
