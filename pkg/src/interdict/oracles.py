"""Integral dual oracles feeding the bisection engine, plus the driver.

Each oracle maps a multiplier to one DualOracleEval: the matroid oracle
minimizes lam * cost(A) + r_w(N \\ A) over removal sets by enumeration,
the flow oracle reads an integral dual off a min cut in the network with
capacities min(u, lam * c), and the capped-stable-set oracle extracts an
integral dual vertex from the box-constrained LP (integral because the
bipartite incidence matrix plus identity is totally unimodular).

Oracles are pure functions of the multiplier and safe to probe
concurrently.
"""

from __future__ import annotations

from fractions import Fraction

from . import matroid as matroid_mod
from .bipartite import bstable_value
from .exactlp import LE, LinearProgram, integral_dual
from .flow import CapacitatedNetwork, max_flow
from .instance import BIPARTITE_KINDS, MATROID_KINDS, Instance
from .lagrangian import (DualOracleEval, InterdictionResult, LagrangianOutcome,
                         bisect, psi, select)

Q = Fraction


def nu_star(inst: Instance) -> int:
    """Nominal optimum without any removals; integral by dual integrality."""
    value = psi(inst, frozenset())
    assert value.denominator == 1, "nominal optimum must be integral"
    return int(value)


def matroid_oracle(inst: Instance):
    """Dual oracle for (possibly weighted, possibly submodular-cost) matroids.

    The weighted problem is the all-ones problem over the weighted-rank
    polymatroid, whose dual optimum at a fixed multiplier is attained by a
    single removal set A with value lam * cost(A) + r_w(N \\ A).
    """
    spec = inst.payload
    ground = sorted(spec.weights)
    ranks = matroid_mod.rank_table(spec, ground)
    budget = inst.budget
    cost = inst.costs

    def oracle(lam) -> DualOracleEval:
        lam = Q(lam)
        res = matroid_mod.lagrangian_min_set(spec, cost, lam, ranks=ranks)
        r = {e: 1 for e in sorted(res.min_set)}
        return DualOracleEval(lam, res.value - lam * budget, r,
                              Q(res.cost), Q(res.rank_rest))

    return oracle


def flow_oracle(inst: Instance):
    """Dual oracle for max-flow interdiction via a min cut under capacities
    min(u, lam * c); cut arcs cheaper to remove than to pay for go to the
    removal vector, the rest are paid at capacity (ties pay, keeping the
    removal cost minimal among optimal duals)."""
    net = inst.payload
    budget = inst.budget
    costs = inst.costs

    def oracle(lam) -> DualOracleEval:
        lam = Q(lam)
        arcs = [(a, net.arcs[a][0], net.arcs[a][1], min(Q(net.capacities[a]), lam * costs[a]))
                for a in inst.ground]
        capped = CapacitatedNetwork.build(net.vertices, arcs, net.source, net.sink)
        cut_value, _, cut = max_flow(capped)
        r = {}
        payment = Q(0)
        cost = Q(0)
        for a in cut.cut_arcs:
            if lam * costs[a] < net.capacities[a]:
                r[a] = 1
                cost += costs[a]
            else:
                payment += net.capacities[a]
        assert cut_value == payment + lam * cost, "cut split lost value"
        return DualOracleEval(lam, cut_value - lam * budget, r, cost, payment)

    return oracle


def bstable_oracle(inst: Instance):
    """Dual oracle for capped stable sets from the box-constrained LP.

    Solves max sum x(v) subject to x(i)+x(j) <= b per edge and x <= lam*c,
    then reads the integral dual off the edge rows (payments) and the box
    rows (removals)."""
    graph = inst.payload
    verts = list(inst.ground)
    index = {v: k for k, v in enumerate(verts)}
    budget = inst.budget
    costs = inst.costs

    def oracle(lam) -> DualOracleEval:
        lam = Q(lam)
        lp = LinearProgram(len(verts), [1] * len(verts), "max")
        for (i, j) in graph.edges:
            row = [0] * len(verts)
            row[index[i]] = 1
            row[index[j]] = 1
            lp.add_row(row, LE, graph.edge_caps[(i, j)])
        for v in verts:
            row = [0] * len(verts)
            row[index[v]] = 1
            lp.add_row(row, LE, lam * costs[v])
        sol = integral_dual(lp)
        n_edges = len(graph.edges)
        payment = Q(0)
        for k, (i, j) in enumerate(graph.edges):
            payment += graph.edge_caps[(i, j)] * sol.duals[k]
        r = {}
        cost = Q(0)
        for k, v in enumerate(verts):
            d = sol.duals[n_edges + k]
            assert d >= 0
            if d > 0:
                r[v] = int(d)
                cost += costs[v] * d
        return DualOracleEval(lam, payment + lam * cost - lam * budget, r, cost, payment)

    return oracle


def make_oracle(inst: Instance):
    if inst.problem_kind in MATROID_KINDS:
        return matroid_oracle(inst)
    if inst.problem_kind == "max_flow":
        return flow_oracle(inst)
    if inst.problem_kind in BIPARTITE_KINDS:
        return bstable_oracle(inst)
    raise ValueError(f"no dual oracle for problem kind {inst.problem_kind!r}")


def solve_framework(inst: Instance, alpha=Q(1)):
    """Run the full pseudoapproximation: short-circuits, bisection, selection.

    Returns (InterdictionResult, LagrangianOutcome or None); the outcome is
    None when a trivial case short-circuited before bisection (budget
    covering everything, or a worthless nominal problem).
    """
    alpha = Q(alpha)
    total = inst.total_cost
    if inst.budget >= total:
        removal = tuple(inst.ground)
        value = psi(inst, removal)
        assert value == 0
        return InterdictionResult(removal, value, Q(total), "within_budget",
                                  Q(0), alpha), None
    nominal = nu_star(inst)
    if nominal == 0:
        return InterdictionResult((), Q(0), Q(0), "within_budget", Q(0), alpha), None
    oracle = make_oracle(inst)
    outcome = bisect(oracle, nominal, total, inst.budget, inst.ground)
    return select(outcome, alpha, inst), outcome
