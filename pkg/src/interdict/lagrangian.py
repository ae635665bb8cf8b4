"""The generic 2-pseudoapproximation engine.

Moves the budget constraint into the objective with a multiplier, locates
an optimal multiplier by bisection over the concave piecewise-linear dual
value curve (whose segments have width at least 1 over the squared total
cost, so a fixed number of halvings lands the bracket inside two adjacent
segments), and selects one of the two bracketing integral dual vectors:
either one that respects the budget and is within a factor 1+alpha of
optimal, or one that overruns the budget by at most a factor 1+1/alpha and
is at least as good as the optimum.

The engine talks to the nominal problem only through a dual oracle
``lam -> DualOracleEval``; oracles must be pure functions of the
multiplier.  Distinct solves share no state.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import matroid as matroid_mod
from .bipartite import bstable_value
from .flow import CapacitatedNetwork, max_flow
from .instance import BIPARTITE_KINDS, MATROID_KINDS, Instance

Q = Fraction


class OracleConsistencyError(Exception):
    """A dual oracle returned an eval violating the payment/value identity."""


class GuaranteeViolationError(Exception):
    """Neither selection branch applies; must be unreachable."""


@dataclass(frozen=True)
class DualOracleEval:
    """One evaluation of the multiplier-parameterized dual problem.

    ``payment`` is the dual payment b^T y; ``cost`` is the removal cost of
    the integral interdiction vector ``r``; the dual value satisfies
    L = payment - lam * (budget - cost) exactly.
    """

    lam: Fraction
    L_value: Fraction
    r: dict                      # element -> nonnegative integer
    cost: Fraction
    payment: Fraction


@dataclass(frozen=True)
class LagrangianOutcome:
    lambda_star: Fraction
    eval1: DualOracleEval        # cost >= budget
    eval2: DualOracleEval        # cost <= budget
    L_star: Fraction
    iterations: int


@dataclass(frozen=True)
class InterdictionResult:
    removal: tuple               # sorted element identifiers
    value: Fraction              # nominal value after removal
    budget_used: Fraction
    branch: str                  # "within_budget" | "over_budget"
    lower_bound: Fraction
    alpha: Fraction | None = None


def clip(r) -> frozenset:
    """Support of the componentwise minimum of r and the all-ones vector."""
    if any(v < 0 for v in r.values()):
        raise ValueError("interdiction vector must be nonnegative")
    return frozenset(e for e, v in r.items() if v >= 1)


def psi(inst: Instance, removal) -> Fraction:
    """Nominal optimum with the removed elements' variables forced to zero.

    Matroids: weighted rank of the remaining elements.  Flows: max flow
    with the removed arcs deleted.  Capped stable sets: LP optimum with
    the removed vertices zeroed but every edge constraint retained.
    """
    removal = set(removal)
    kind = inst.problem_kind
    if kind in MATROID_KINDS:
        rest = [e for e in inst.ground if e not in removal]
        return Q(matroid_mod.weighted_rank(inst.payload, rest))
    if kind == "max_flow":
        net = inst.payload
        arcs = [(a, net.arcs[a][0], net.arcs[a][1], net.capacities[a])
                for a in inst.ground if a not in removal]
        value, _, _ = max_flow(CapacitatedNetwork.build(net.vertices, arcs, net.source, net.sink))
        return value
    if kind in BIPARTITE_KINDS:
        return Q(bstable_value(inst.payload, removal))
    raise ValueError(f"unknown problem kind {kind!r}")


def lambda_star(lambda1, lambda2, L1, L2, cost1, cost2, budget) -> Fraction:
    """Intersection of the two bracketing segments of the dual value curve.

    The segment through (lambda_i, L_i) has slope cost_i - budget; equal
    costs mean parallel segments and must be short-circuited by the caller.
    """
    if cost1 == cost2:
        raise ValueError("parallel segments: caller must handle the plateau")
    if not lambda1 < lambda2:
        raise ValueError("need lambda1 < lambda2")
    lam = (L2 - L1 - lambda2 * (-budget + cost2) + lambda1 * (-budget + cost1)) \
        / (cost1 - cost2)
    assert lambda1 <= lam <= lambda2, "segment intersection outside bracket"
    return lam


def _check_eval(ev: DualOracleEval, budget) -> None:
    if ev.payment < 0:
        raise OracleConsistencyError(f"negative dual payment {ev.payment}")
    if ev.L_value != ev.payment - ev.lam * (budget - ev.cost):
        raise OracleConsistencyError(
            f"dual value {ev.L_value} inconsistent with payment {ev.payment} "
            f"and cost {ev.cost} at multiplier {ev.lam}")


def iteration_budget(nu_star: int, total_cost: int) -> int:
    """1 + floor(log2(nu_star * total_cost^2)); halving that many times
    shrinks the bracket below the minimum segment width."""
    size = nu_star * total_cost * total_cost
    return 1 + (size.bit_length() - 1)


def bisect(oracle, nu_star: int, total_cost, budget, ground) -> LagrangianOutcome:
    """Locate an optimal multiplier and two bracketing integral duals.

    Starts from the trivial brackets (multiplier 0 with everything
    removed; multiplier nu_star with nothing removed, which is optimal
    there because removing any element would cost more than the whole
    nominal value) and runs the fixed number of halvings, keeping the
    invariant that the left dual costs at least the budget and the right
    one strictly less.  The two final duals are optimal at the segment
    intersection, so nothing is re-evaluated afterwards.
    """
    if not budget < total_cost:
        raise ValueError("caller must short-circuit budget >= total cost")
    if nu_star < 1:
        raise ValueError("caller must short-circuit a zero nominal optimum")

    lam1, lam2 = Q(0), Q(nu_star)
    eval1 = DualOracleEval(Q(0), Q(0), {e: 1 for e in ground}, Q(total_cost), Q(0))
    eval2 = DualOracleEval(Q(nu_star), Q(nu_star) * (1 - budget), {}, Q(0), Q(nu_star))

    rounds = iteration_budget(nu_star, total_cost)
    for _ in range(rounds):
        lam = (lam1 + lam2) / 2
        ev = oracle(lam)
        _check_eval(ev, budget)
        if ev.cost >= budget:
            lam1, eval1 = lam, ev
        else:
            lam2, eval2 = lam, ev

    if eval1.cost == budget:
        # zero-slope left segment: lam1 already maximizes the dual value,
        # and its dual qualifies on both sides of the budget
        lam_st = lam1
        eval2 = eval1
        L_st = eval1.payment
    else:
        assert eval1.cost != eval2.cost, "bracket invariant violated"
        lam_st = lambda_star(lam1, lam2, eval1.L_value, eval2.L_value,
                             eval1.cost, eval2.cost, budget)
        L_st = eval1.payment - lam_st * (budget - eval1.cost)
        L_from_2 = eval2.payment - lam_st * (budget - eval2.cost)
        assert L_st == L_from_2, "bracketing duals disagree at the intersection"
    return LagrangianOutcome(lam_st, eval1, eval2, L_st, rounds)


def select(outcome: LagrangianOutcome, alpha, inst: Instance) -> InterdictionResult:
    """Pick the guaranteed dual vector per the pseudoapproximation dichotomy.

    If the under-budget dual's payment is within 1+alpha of the lower
    bound, its clipped support is a budget-feasible solution with value at
    most (1+alpha) times optimal (preferred whenever it applies).
    Otherwise the over-budget dual costs at most (1+1/alpha) times the
    budget and its clipped support is super-optimal.  The returned value
    is always recomputed from the nominal problem.
    """
    alpha = Q(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    budget = Q(inst.budget)
    e1, e2 = outcome.eval1, outcome.eval2

    if e2.payment <= (1 + alpha) * outcome.L_star:
        removal = clip(e2.r)
        branch = "within_budget"
    elif e1.cost <= (1 + 1 / alpha) * budget:
        removal = clip(e1.r)
        branch = "over_budget"
    else:
        raise GuaranteeViolationError(
            "neither selection branch applies; the dichotomy theorem is violated")

    value = psi(inst, removal)
    used = Q(inst.cost_of(removal))
    if branch == "within_budget":
        assert used <= budget, "within-budget branch exceeded the budget"
    else:
        assert used <= (1 + 1 / alpha) * budget, "over-budget branch exceeded its bound"
        assert value <= outcome.L_star, "over-budget branch not super-optimal"
    return InterdictionResult(tuple(sorted(removal)), value, used, branch,
                              outcome.L_star, alpha)
