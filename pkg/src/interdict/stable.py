"""Exact interdiction of maximum-cardinality stable sets in bipartite graphs.

With unit edge capacities the objective after removing R is
|V| - |R| - (max matching of the remaining graph), so an optimal removal
set can be reconstructed from a matching that is constrained by four
counts: a prefix length in the cost order, the number of matched prefix
vertices on each side, and the matching size.  Enumerating all count
quadruples, finding for each a constrained matching that maximizes the
covered prefix cost (a face of a matroid intersection polytope, hence an
integral LP), and keeping the budget-feasible quadruple of least value
solves the problem exactly.

Quadruple evaluations are independent; the scan order (value ascending,
longer prefix first, then lexicographic counts) makes the result
deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .bipartite import max_cardinality_matching
from .exactlp import EQ, LE, InfeasibleLP, LinearProgram, solve_to_vertex
from .instance import Instance
from .lagrangian import InterdictionResult

Q = Fraction


@dataclass(frozen=True)
class Quadruple:
    """Counts indexing one constrained-matching subproblem.

    prefix_len bounds the candidate removal pool (cheapest vertices
    first); matched_i / matched_j count matched pool vertices per side;
    size is the matching cardinality.  The removal set of a corresponding
    matching has value
    |V| - size - prefix_len + matched_i + matched_j.
    """

    prefix_len: int
    matched_i: int
    matched_j: int
    size: int

    def value(self, n_vertices: int) -> int:
        return n_vertices - self.size - self.prefix_len + self.matched_i + self.matched_j


def cost_order(inst: Instance) -> list:
    """Vertices sorted by removal cost ascending, ties by identifier."""
    return sorted(inst.ground, key=lambda v: (inst.costs[v], v))


def enumerate_quadruples(inst: Instance, nu: int):
    """The full candidate set (prefix, counts, size) with its size bound."""
    g = inst.payload
    n = len(inst.ground)
    bound = (n + 1) * (len(g.part_i) + 2) * (len(g.part_j) + 2) * (nu + 1)
    out = []
    for ell in range(n + 1):
        for bi in range(len(g.part_i) + 2):
            for bj in range(len(g.part_j) + 2):
                for gamma in range(nu + 1):
                    out.append(Quadruple(ell, bi, bj, gamma))
    assert len(out) <= bound, "quadruple enumeration exceeded its bound"
    return out


def _counts_possible(q: Quadruple, prefix_i, prefix_j, part_i, part_j, nu):
    return (q.matched_i <= len(prefix_i) and q.matched_j <= len(prefix_j)
            and q.matched_i <= q.size and q.matched_j <= q.size
            and q.matched_i + q.matched_j <= 2 * q.size
            and q.matched_i <= len(part_i) and q.matched_j <= len(part_j)
            and q.size <= nu
            and q.matched_i <= q.prefix_len and q.matched_j <= q.prefix_len)


def _counts_attainable(graph, prefix_i, prefix_j, q: Quadruple) -> bool:
    """Integer max-flow screen: does a matching with the exact counts exist?

    A four-way class gadget (prefix/rest on each side) capped at the
    required counts admits a flow of the full matching size iff every
    class cap is met with equality.
    """
    src, snk = "__s", "__t"
    cap = {}
    adj = {src: [], snk: []}

    def arc(u, v, c):
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
        cap[(u, v)] = cap.get((u, v), 0) + c
        cap.setdefault((v, u), 0)

    arc(src, "__pi", q.matched_i)
    arc(src, "__ri", q.size - q.matched_i)
    arc("__pj", snk, q.matched_j)
    arc("__rj", snk, q.size - q.matched_j)
    for i in graph.part_i:
        arc("__pi" if i in prefix_i else "__ri", i, 1)
    for j in graph.part_j:
        arc(j, "__pj" if j in prefix_j else "__rj", 1)
    for i, j in graph.edges:
        arc(i, j, 1)

    total = 0
    while True:
        parent = {src: None}
        queue = deque([src])
        while queue and snk not in parent:
            u = queue.popleft()
            for v in adj[u]:
                if v not in parent and cap.get((u, v), 0) > 0:
                    parent[v] = u
                    queue.append(v)
        if snk not in parent:
            break
        v = snk
        while parent[v] is not None:
            u = parent[v]
            cap[(u, v)] -= 1
            cap[(v, u)] += 1
            v = u
        total += 1
    return total == q.size


def constrained_matching(inst: Instance, q: Quadruple):
    """Matching with the quadruple's exact counts maximizing covered prefix cost.

    Solved as the face LP of the two laminar matroids (per-vertex caps,
    prefix-class caps, total size); an optimal vertex is integral whenever
    the face is nonempty.  Returns a frozenset of edges or None.
    """
    g = inst.payload
    order = cost_order(inst)
    prefix = set(order[:q.prefix_len])
    edges = list(g.edges)
    idx = {e: k for k, e in enumerate(edges)}

    # primary: covered prefix cost; secondary (scaled below integer
    # resolution of the primary): prefer covering later-ordered vertices,
    # which pins the matching among cost ties deterministically
    pos = {v: k for k, v in enumerate(sorted(inst.ground))}
    scale = 4 ** (len(pos) + 1)

    def weight(e):
        i, j = e
        primary = (inst.costs[i] if i in prefix else 0) + \
            (inst.costs[j] if j in prefix else 0)
        return primary * scale + 4 ** pos[i] + 4 ** pos[j]

    lp = LinearProgram(len(edges), [weight(e) for e in edges], "max")
    for v in sorted(inst.ground):
        coeffs = [0] * len(edges)
        for e in edges:
            if v in e:
                coeffs[idx[e]] = 1
        lp.add_row(coeffs, LE, 1)
    for side, target in ((g.part_i, q.matched_i), (g.part_j, q.matched_j)):
        coeffs = [0] * len(edges)
        for e in edges:
            for v in e:
                if v in prefix and v in side:
                    coeffs[idx[e]] = 1
        lp.add_row(coeffs, EQ, target)
    lp.add_row([1] * len(edges), EQ, q.size)
    try:
        sol = solve_to_vertex(lp)
    except InfeasibleLP:
        return None
    assert sol.is_integral(), "face LP produced a fractional matching"
    return frozenset(e for e in edges if sol.x[idx[e]] == 1)


def quadruple_feasible(inst: Instance, q: Quadruple, matching) -> bool:
    """Budget test: the corresponding removal set must be affordable."""
    order = cost_order(inst)
    prefix = order[:q.prefix_len]
    matched = {v for e in matching for v in e}
    removal = [v for v in prefix if v not in matched]
    return inst.cost_of(removal) <= inst.budget


def solve_exact(inst: Instance) -> InterdictionResult:
    """Optimal interdiction set for the unit-capacity stable-set problem.

    Scans quadruples by value ascending (longer prefix first, then
    lexicographic counts) and returns the removal set of the first one
    admitting a budget-feasible corresponding matching; count screens and
    a cheapest-possible-removal bound avoid most LP solves.  The reported
    value is recomputed from the remaining graph's maximum matching as a
    self-check.
    """
    if inst.problem_kind != "bipartite_stable":
        raise ValueError("exact algorithm requires unit edge capacities")
    g = inst.payload
    n = len(inst.ground)
    order = cost_order(inst)
    nu = len(max_cardinality_matching(g.part_i, g.part_j, g.edges))
    part_i, part_j = set(g.part_i), set(g.part_j)

    candidates = enumerate_quadruples(inst, nu)
    candidates.sort(key=lambda q: (q.value(n), -q.prefix_len,
                                   q.matched_i, q.matched_j, q.size))
    prefix_costs = [inst.costs[v] for v in order]

    for q in candidates:
        prefix = set(order[:q.prefix_len])
        prefix_i = prefix & part_i
        prefix_j = prefix & part_j
        if not _counts_possible(q, prefix_i, prefix_j, part_i, part_j, nu):
            continue
        n_removed = q.prefix_len - q.matched_i - q.matched_j
        if n_removed < 0:
            continue
        cheapest = sorted(prefix_costs[:q.prefix_len])[:n_removed]
        if sum(cheapest) > inst.budget:
            continue
        if not _counts_attainable(g, prefix_i, prefix_j, q):
            continue
        matching = constrained_matching(inst, q)
        assert matching is not None, "count screen accepted an infeasible face"
        if not quadruple_feasible(inst, q, matching):
            continue

        matched = {v for e in matching for v in e}
        removal = tuple(sorted(v for v in order[:q.prefix_len] if v not in matched))
        rest_edges = [e for e in g.edges if e[0] not in removal and e[1] not in removal]
        rest_i = [v for v in g.part_i if v not in removal]
        rest_j = [v for v in g.part_j if v not in removal]
        alpha = (len(rest_i) + len(rest_j)) - len(
            max_cardinality_matching(rest_i, rest_j, rest_edges))
        value = q.value(n)
        if alpha != value:
            raise AssertionError(
                f"self-check failed: remaining stable set {alpha} != quadruple value {value}")
        return InterdictionResult(removal, Q(value), Q(inst.cost_of(removal)),
                                  "within_budget", Q(value), None)
    raise AssertionError("no feasible quadruple; the empty quadruple should always pass")
