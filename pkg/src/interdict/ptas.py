"""PTAS for capped-stable-set interdiction in bipartite graphs.

The budgeted relaxation is an edge-cover LP over an auxiliary bipartite
graph with two extra vertices whose incidence matrix is totally
unimodular: covering a vertex by its auxiliary edge means removing it.
An optimal vertex of the budgeted LP either has an integral removal part
(then it is an optimal removal set for the subproblem) or lies in the
interior of an edge of the cover polytope, whose two integral endpoints
bracket the budget; the under-budget endpoint overshoots the fractional
optimum by at most twice the largest edge capacity.  Guessing the
heaviest cover edges shrinks that additive loss to a (1+epsilon) factor.

The guess loop is a pure fold over candidates with a deterministic
tie-break; nothing is shared between solves.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .exactlp import (EQ, GE, LE, EdgeExtractionError, InfeasibleLP,
                      LinearProgram, edge_endpoints, solve_to_vertex)
from .instance import BIPARTITE_KINDS, Instance
from .lagrangian import InterdictionResult, psi

Q = Fraction

AUX_I = "__cover_i"
AUX_J = "__cover_j"


@dataclass(frozen=True)
class AuxiliaryCoverGraph:
    """Edge-indexed view of the auxiliary cover graph.

    Variables are ordered: original edges (sorted), one removal edge per
    vertex (sorted; it joins the vertex to the opposite side's auxiliary
    vertex), then the auxiliary-auxiliary edge.  ``rows`` lists, per
    vertex of the auxiliary graph, the incident variable indices.
    """

    var_keys: tuple
    rows: tuple                  # (vertex, (var indices, ...))
    b_ext: tuple
    c_ext: tuple
    endpoints: tuple             # per variable, its two endpoints in V'

    @property
    def n(self):
        return len(self.var_keys)

    def b_of(self, support):
        index = {k: n for n, k in enumerate(self.var_keys)}
        return sum((self.b_ext[index[k]] for k in support), Q(0))

    def c_of(self, support):
        index = {k: n for n, k in enumerate(self.var_keys)}
        return sum((self.c_ext[index[k]] for k in support), Q(0))


def build_aux_graph(inst: Instance) -> AuxiliaryCoverGraph:
    g = inst.payload
    keys = [("y",) + e for e in g.edges]
    keys += [("r", v) for v in sorted(g.part_i + g.part_j)]
    keys.append(("f",))
    part_i = set(g.part_i)

    endpoints = []
    for key in keys:
        if key[0] == "y":
            endpoints.append((key[1], key[2]))
        elif key[0] == "r":
            v = key[1]
            endpoints.append((v, AUX_J) if v in part_i else (AUX_I, v))
        else:
            endpoints.append((AUX_I, AUX_J))

    incident = {v: [] for v in sorted(g.part_i + g.part_j) + [AUX_I, AUX_J]}
    for n, (u, v) in enumerate(endpoints):
        incident[u].append(n)
        incident[v].append(n)
    rows = tuple((v, tuple(cols)) for v, cols in incident.items())

    b_ext = tuple(Q(g.edge_caps[k[1:]]) if k[0] == "y" else Q(0) for k in keys)
    c_ext = tuple(Q(inst.costs[k[1]]) if k[0] == "r" else Q(0) for k in keys)
    return AuxiliaryCoverGraph(tuple(keys), rows, b_ext, c_ext, tuple(endpoints))


def build_cover_lp(inst: Instance, aux=None, fixed=(), removed=(),
                   with_budget=True) -> LinearProgram:
    """Budgeted edge-cover LP in full variable space.

    ``fixed``/``removed`` pin edge variables to 1/0 through their bounds;
    used directly by tests, while the solver works on the reduced space.
    """
    aux = aux or build_aux_graph(inst)
    lp = LinearProgram(aux.n, list(aux.b_ext), "min", upper=[Q(1)] * aux.n)
    for _, cols in aux.rows:
        coeffs = [Q(0)] * aux.n
        for c in cols:
            coeffs[c] = Q(1)
        lp.add_row(coeffs, GE, 1)
    if with_budget:
        lp.add_row(list(aux.c_ext), LE, inst.budget)
    fixed, removed = set(fixed), set(removed)
    for n, key in enumerate(aux.var_keys):
        if key in fixed:
            lp.set_bounds(n, 1, 1)
        elif key in removed:
            lp.set_bounds(n, 0, 0)
    return lp


def _reduced_lp(inst, aux, fixed, removed, with_budget):
    """Cover LP with the pinned variables substituted out.

    Rows whose right-hand side drops to 0 or below are kept: their
    tightness pattern matches the full-space face polytope, which the
    edge-endpoint extraction relies on.  Only original-edge variables may
    be pinned.
    """
    free = [n for n in range(aux.n)
            if aux.var_keys[n] not in fixed and aux.var_keys[n] not in removed]
    pos = {n: k for k, n in enumerate(free)}
    lp = LinearProgram(len(free), [aux.b_ext[n] for n in free], "min",
                       upper=[Q(1)] * len(free))
    for _, cols in aux.rows:
        coeffs = [Q(0)] * len(free)
        rhs = 1
        for c in cols:
            if c in pos:
                coeffs[pos[c]] = Q(1)
            elif aux.var_keys[c] in fixed:
                rhs -= 1
        lp.add_row(coeffs, GE, rhs)
    if with_budget:
        lp.add_row([aux.c_ext[n] for n in free], LE, inst.budget)
    return lp, free


@dataclass(frozen=True)
class EdgeCoverPair:
    cover_over: frozenset        # over budget, undershoots the fractional optimum
    cover_under: frozenset       # within budget, overshoots by at most 2 b_max
    frac_value: Fraction
    c_over: Fraction
    c_under: Fraction
    b_over: Fraction
    b_under: Fraction


@dataclass(frozen=True)
class CoverCandidate:
    feasible: bool
    removal: tuple = ()
    value: Fraction = Q(0)
    budget_used: Fraction = Q(0)
    frac_value: Fraction = Q(0)
    shortcut: bool = False
    pair: EdgeCoverPair = None

    def rank(self):
        return (self.value, self.budget_used, self.removal)


def _candidate(inst, removal, frac, shortcut, pair=None):
    removal = tuple(sorted(removal))
    return CoverCandidate(True, removal, psi(inst, removal),
                          Q(inst.cost_of(removal)), frac, shortcut, pair)


def solve_one(inst: Instance, aux=None, fixed=(), removed=()) -> CoverCandidate:
    """One budgeted LP solve: integral shortcut or edge-endpoint extraction.

    Returns an infeasible candidate when the (possibly residual) LP has no
    feasible point.  On extraction, asserts that the under-budget cover's
    capacity exceeds the fractional optimum by at most twice the largest
    free edge capacity.
    """
    aux = aux or build_aux_graph(inst)
    fixed, removed = frozenset(fixed), frozenset(removed)
    lp, free = _reduced_lp(inst, aux, fixed, removed, with_budget=True)
    try:
        sol = solve_to_vertex(lp)
    except InfeasibleLP:
        return CoverCandidate(False)
    frac = sol.objective + aux.b_of(fixed)

    def removal_of(x):
        return [aux.var_keys[n][1] for k, n in enumerate(free)
                if aux.var_keys[n][0] == "r" and x[k] == 1]

    r_cols = [k for k, n in enumerate(free) if aux.var_keys[n][0] == "r"]
    if all(sol.x[k].denominator == 1 for k in r_cols):
        return _candidate(inst, removal_of(sol.x), frac, True)

    face, _ = _reduced_lp(inst, aux, fixed, removed, with_budget=False)
    try:
        end_a, end_b = edge_endpoints(face, sol.x)
    except EdgeExtractionError:
        sol = _lexicographic_resolve(lp, sol.objective)
        if all(sol.x[k].denominator == 1 for k in r_cols):
            return _candidate(inst, removal_of(sol.x), frac, True)
        end_a, end_b = edge_endpoints(face, sol.x)

    covers = []
    for end in (end_a, end_b):
        assert all(v.denominator == 1 for v in end), "cover endpoint not integral"
        support = frozenset(aux.var_keys[free[k]] for k in range(len(free))
                            if end[k] == 1) | fixed
        covers.append((support, aux.c_of(support), aux.b_of(support)))
    covers.sort(key=lambda t: t[1], reverse=True)
    (f_over, c_over, b_over), (f_under, c_under, b_under) = covers
    budget = Q(inst.budget)
    assert c_over > budget > c_under, "endpoints do not bracket the budget"

    b_max = max((aux.b_ext[n] for n in free if aux.var_keys[n][0] == "y"),
                default=Q(0))
    assert b_under <= frac + 2 * b_max, "cover capacity bound violated"

    pair = EdgeCoverPair(f_over, f_under, frac, c_over, c_under, b_over, b_under)
    cand = _candidate(inst, [k[1] for k in f_under if k[0] == "r"], frac, False, pair)
    assert cand.budget_used <= budget
    return cand


def _lexicographic_resolve(lp, opt_value):
    """Tie-break a degenerate optimum with a secondary lexicographic objective.

    Unreachable for vertices of the budgeted cover polytope (their tight
    sets leave rank deficiency exactly one), kept as the documented
    fallback: re-solve over the optimal face minimizing sum 4^-j z_j.
    """
    stage2 = LinearProgram(lp.n_vars, [Q(1, 4 ** (j + 1)) for j in range(lp.n_vars)],
                           "min", lower=list(lp.lower), upper=list(lp.upper))
    for coeffs, rel, rhs in lp.rows:
        stage2.add_row(coeffs, rel, rhs)
    stage2.add_row(list(lp.objective), EQ, opt_value)
    return solve_to_vertex(stage2)


@dataclass(frozen=True)
class PtasReport:
    requested_epsilon: Fraction
    effective_epsilon: Fraction
    frac_value: Fraction
    shortcut: bool
    skipped_guessing: bool
    guesses: int
    pairs: tuple


def solve_ptas(inst: Instance, epsilon) -> tuple:
    """(1+epsilon)-approximate interdiction within budget.

    Solves the budgeted cover LP once; an integral removal part is
    returned as optimal.  If twice the largest edge capacity is within
    epsilon of the fractional optimum, the extracted under-budget cover
    already suffices.  Otherwise every subset of up to ceil(2/epsilon)
    edges is guessed as the heaviest cover edges: guesses of exactly that
    size pin their edges and drop all strictly heavier ones; smaller
    guesses assert the cover uses exactly those edges, which pins the
    removal set to the uncovered vertices outright (this covers optima
    whose cover has fewer edges than the guess size).  Candidates are
    ranked by exact nominal value, then budget used, then removal set.

    Returns (InterdictionResult, PtasReport).  Epsilon is floored at
    1/|edges| to keep the guess loop at desk scale; the report carries
    the effective value.
    """
    if inst.problem_kind not in BIPARTITE_KINDS:
        raise ValueError("the approximation scheme needs a bipartite instance")
    epsilon = Q(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    g = inst.payload
    eff = max(epsilon, Q(1, len(g.edges)))
    aux = build_aux_graph(inst)

    base = solve_one(inst, aux)
    assert base.feasible, "unrestricted cover LP cannot be infeasible"
    pairs = [base.pair] if base.pair else []

    if base.shortcut:
        return _result(inst, base), PtasReport(epsilon, eff, base.frac_value,
                                               True, False, 0, tuple(pairs))

    b_max = max(Q(g.edge_caps[e]) for e in g.edges)
    if 2 * b_max <= eff * base.frac_value:
        return _result(inst, base), PtasReport(epsilon, eff, base.frac_value,
                                               False, True, 0, tuple(pairs))

    k = math.ceil(2 / eff)
    edge_keys = sorted(("y",) + e for e in g.edges)
    vertices = sorted(g.part_i + g.part_j)
    best = base
    guesses = 0
    for size in range(0, min(k, len(edge_keys)) + 1):
        for combo in itertools.combinations(edge_keys, size):
            guesses += 1
            if size == k:
                floor_cap = min(Q(g.edge_caps[key[1:]]) for key in combo)
                removed = [key for key in edge_keys
                           if key not in combo and Q(g.edge_caps[key[1:]]) > floor_cap]
                cand = solve_one(inst, aux, fixed=combo, removed=removed)
                if cand.feasible and cand.pair:
                    pairs.append(cand.pair)
            else:
                covered = {v for key in combo for v in key[1:]}
                forced = [v for v in vertices if v not in covered]
                if inst.cost_of(forced) > inst.budget:
                    continue
                cand = _candidate(inst, forced, aux.b_of(combo), True)
            if cand.feasible and cand.rank() < best.rank():
                best = cand
    return _result(inst, best), PtasReport(epsilon, eff, base.frac_value,
                                           False, False, guesses, tuple(pairs))


def _result(inst, cand: CoverCandidate) -> InterdictionResult:
    assert cand.budget_used <= inst.budget
    return InterdictionResult(cand.removal, cand.value, cand.budget_used,
                              "within_budget", cand.frac_value, None)


def hurkens_check(cover_a, cover_b, aux: AuxiliaryCoverGraph) -> bool:
    """Adjacency test for two integral edge covers of the auxiliary graph.

    True iff their symmetric difference is one alternating cycle, or one
    alternating path whose endpoints are covered by the common edges.
    """
    cover_a, cover_b = frozenset(cover_a), frozenset(cover_b)
    diff = cover_a ^ cover_b
    if not diff:
        return True
    side = {}
    adjacency = {}
    for n, key in enumerate(aux.var_keys):
        if key in diff:
            u, v = aux.endpoints[n]
            side[key] = key in cover_a
            adjacency.setdefault(u, []).append((key, v))
            adjacency.setdefault(v, []).append((key, u))
    if any(len(inc) > 2 for inc in adjacency.values()):
        return False

    ends = sorted(v for v, inc in adjacency.items() if len(inc) == 1)
    if len(ends) not in (0, 2):
        return False
    start = ends[0] if ends else sorted(adjacency)[0]

    walked = []
    seen = set()
    vertex = start
    while True:
        options = [(key, w) for key, w in adjacency[vertex] if key not in seen]
        if not options:
            break
        key, vertex = options[0]
        seen.add(key)
        walked.append(key)
    if len(walked) != len(diff):
        return False                       # more than one component
    for a, b in zip(walked, walked[1:]):
        if side[a] == side[b]:
            return False                   # not alternating
    if not ends:
        return len(walked) % 2 == 0 and side[walked[0]] != side[walked[-1]]
    common_vertices = set()
    for n, key in enumerate(aux.var_keys):
        if key in (cover_a & cover_b):
            common_vertices.update(aux.endpoints[n])
    return ends[0] in common_vertices and ends[1] in common_vertices
