"""Matroid independence, weighted rank, and the set-form Lagrangian minimizer.

The weighted rank is computed by the matroid greedy algorithm (descending
weight, ties by element identifier), which attains the true maximum by the
exchange property.  The Lagrangian set minimizer enumerates all subsets;
at desk scale this is exact and doubles as the reference implementation of
the integral dual oracle for matroid and submodular-cost interdiction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .guards import check_size
from .instance import MatroidSpec, SubmodularCostSpec

Q = Fraction

ENUMERATION_LIMIT = 22


def is_independent(spec: MatroidSpec, subset) -> bool:
    """Independence oracle for all supported matroid encodings."""
    s = set(subset)
    if spec.variant == "uniform":
        return len(s) <= spec.k
    if spec.variant == "partition":
        return all(len(s & block) <= cap for block, cap in spec.blocks)
    if spec.variant == "graphic":
        parent = list(range(spec.vertex_count))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in s:
            u, v = spec.edges[e]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True
    if spec.variant == "explicit":
        return any(s <= m for m in spec.maximal_sets)
    raise ValueError(f"unknown matroid variant {spec.variant!r}")


def weighted_rank(spec: MatroidSpec, subset, weights=None) -> int:
    """Weight of a heaviest independent set contained in the subset.

    Greedy over the subset sorted by weight descending (ties by element
    identifier); zero-weight elements cannot raise the value and are
    skipped.
    """
    w = spec.weights if weights is None else weights
    order = sorted(subset, key=lambda e: (-w[e], e))
    chosen = []
    total = 0
    for e in order:
        if w[e] == 0:
            break
        if is_independent(spec, chosen + [e]):
            chosen.append(e)
            total += w[e]
    return total


def cost_value(cost, subset):
    """Removal cost of a subset under a linear map or a submodular spec."""
    if isinstance(cost, SubmodularCostSpec):
        return cost.value(subset)
    return sum(cost[e] for e in subset)


@dataclass(frozen=True)
class LagrangianSetResult:
    min_set: frozenset
    value: Fraction              # lam * cost(A) + r_w(N \ A)
    cost: int
    rank_rest: int


def rank_table(spec: MatroidSpec, ground):
    """r_w of every subset of the (canonically ordered) ground set.

    Indexed by bitmask over ``ground``; used to amortize repeated
    Lagrangian minimizations over the probes of one bisection run.
    """
    n = len(ground)
    check_size("matroid subset enumeration", n, ENUMERATION_LIMIT)
    table = [0] * (1 << n)
    for mask in range(1 << n):
        table[mask] = weighted_rank(spec, [ground[i] for i in range(n) if mask >> i & 1])
    return table


def lagrangian_min_set(spec: MatroidSpec, cost, lam, ranks=None) -> LagrangianSetResult:
    """Minimize lam * cost(A) + r_w(N \\ A) over all subsets A of the ground set.

    Ties are broken by smaller cost(A), then by the lexicographically
    smallest A (canonical element order), so the minimizer is
    deterministic.  ``ranks`` may carry a precomputed rank_table.
    """
    if lam < 0:
        raise ValueError("multiplier must be nonnegative")
    ground = sorted(spec.weights)
    n = len(ground)
    check_size("matroid subset enumeration", n, ENUMERATION_LIMIT)
    if ranks is None:
        ranks = rank_table(spec, ground)
    full = (1 << n) - 1
    lam = Q(lam)

    best = None
    best_key = None
    for mask in range(1 << n):
        subset = tuple(ground[i] for i in range(n) if mask >> i & 1)
        c = cost_value(cost, subset)
        rest_rank = ranks[full ^ mask]
        value = lam * c + rest_rank
        key = (value, c, subset)
        if best_key is None or key < best_key:
            best_key = key
            best = LagrangianSetResult(frozenset(subset), value, c, rest_rank)
    return best
