"""Brute-force oracles, guarantee checkers, and random instance generators.

The brute-force optimum enumerates every budget-feasible removal set and
evaluates the shared nominal solvers; independently coded naive evaluators
(subset enumeration for matroids, cut enumeration for flows, integral
profile enumeration for capped stable sets) guard against the shared code
being wrong in the same way twice.  All generators are deterministic in
their seed and emit documents accepted by the instance validator.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction

from . import matroid as matroid_mod
from .guards import check_size
from .instance import BIPARTITE_KINDS, MATROID_KINDS, Instance, parse_instance
from .lagrangian import InterdictionResult, psi

Q = Fraction

BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class BruteForceReport:
    opt: Fraction
    removal: tuple
    enumerated: int
    candidates: tuple = ()       # optional (removal, value) dump


def brute_force_opt(inst: Instance, keep_candidates=False) -> BruteForceReport:
    """Definitional optimum: min over budget-feasible removal sets of psi.

    Ties broken by the lexicographically smallest removal set.  Guarded at
    BRUTE_FORCE_LIMIT ground elements.
    """
    ground = list(inst.ground)
    n = len(ground)
    check_size("brute force", n, BRUTE_FORCE_LIMIT)
    best_value = None
    best_removal = None
    enumerated = 0
    dump = []
    for mask in range(1 << n):
        removal = tuple(ground[i] for i in range(n) if mask >> i & 1)
        if inst.cost_of(removal) > inst.budget:
            continue
        enumerated += 1
        value = psi(inst, removal)
        if keep_candidates:
            dump.append((removal, value))
        if best_value is None or (value, removal) < (best_value, best_removal):
            best_value, best_removal = value, removal
    return BruteForceReport(best_value, best_removal, enumerated, tuple(dump))


def check_guarantee(result: InterdictionResult, report: BruteForceReport,
                    alpha, budget) -> tuple:
    """Exact check of the pseudoapproximation dichotomy against brute force.

    Returns (True, None) or (False, reason).
    """
    alpha = Q(alpha)
    budget = Q(budget)
    if result.branch == "within_budget":
        if result.budget_used > budget:
            return False, f"budget {result.budget_used} exceeds {budget}"
        if result.value > (1 + alpha) * report.opt:
            return False, f"value {result.value} exceeds (1+alpha)*OPT = {(1 + alpha) * report.opt}"
    elif result.branch == "over_budget":
        if result.budget_used > (1 + 1 / alpha) * budget:
            return False, f"budget {result.budget_used} exceeds (1+1/alpha)*B"
        if result.value > report.opt:
            return False, f"value {result.value} exceeds OPT {report.opt}"
    else:
        return False, f"unknown branch {result.branch!r}"
    return True, None


def probe_concavity(oracle, triples) -> tuple:
    """Chord test: L at the middle point dominates the chord, exactly.

    Degenerate triples (repeated abscissae) are skipped.  Returns
    (True, None) or (False, failing_triple).
    """
    for a, b, c in triples:
        a, b, c = sorted((Q(a), Q(b), Q(c)))
        if a == b or b == c:
            continue
        la = oracle(a).L_value
        lb = oracle(b).L_value
        lc = oracle(c).L_value
        chord = la + (lc - la) * (b - a) / (c - a)
        if lb < chord:
            return False, (a, b, c)
    return True, None


# ---------------------------------------------------------------------------
# independent naive evaluators (test oracles; deliberately separate code)

NAIVE_LIMIT = 12


def naive_psi(inst: Instance, removal) -> Fraction:
    """Nominal value after removal, recomputed without the production solvers."""
    removal = set(removal)
    kind = inst.problem_kind
    if kind in MATROID_KINDS:
        spec = inst.payload
        rest = [e for e in inst.ground if e not in removal]
        check_size("naive matroid enumeration", len(rest), NAIVE_LIMIT)
        best = 0
        for r in range(len(rest) + 1):
            for comb in itertools.combinations(rest, r):
                if matroid_mod.is_independent(spec, comb):
                    best = max(best, sum(spec.weights[e] for e in comb))
        return Q(best)
    if kind == "max_flow":
        return _naive_min_cut(inst, removal)
    if kind in BIPARTITE_KINDS:
        return _naive_bstable(inst, removal)
    raise ValueError(kind)


def _naive_min_cut(inst, removal):
    net = inst.payload
    arcs = [(a, *net.arcs[a]) for a in inst.ground if a not in removal]
    inner = [v for v in net.vertices if v not in (net.source, net.sink)]
    check_size("naive cut enumeration", len(inner), NAIVE_LIMIT)
    best = None
    for r in range(len(inner) + 1):
        for comb in itertools.combinations(inner, r):
            side = {net.source, *comb}
            cap = sum(Q(net.capacities[a]) for a, tail, head in arcs
                      if tail in side and head not in side)
            if best is None or cap < best:
                best = cap
    return best


def _naive_bstable(inst, removal):
    graph = inst.payload
    part_i = [v for v in graph.part_i]
    check_size("naive stable enumeration", len(part_i), 8)
    incident_i = {i: [e for e in graph.edges if e[0] == i] for i in part_i}
    incident_j = {j: [e for e in graph.edges if e[1] == j] for j in graph.part_j}
    ranges = []
    for i in part_i:
        if i in removal:
            ranges.append((0,))
        else:
            cap = min(graph.edge_caps[e] for e in incident_i[i])
            ranges.append(tuple(range(cap + 1)))
    best = 0
    for profile in itertools.product(*ranges):
        x = dict(zip(part_i, profile))
        total = sum(v for i, v in x.items() if i not in removal)
        for j in graph.part_j:
            if j in removal:
                continue
            total += min(graph.edge_caps[e] - x[e[0]] for e in incident_j[j])
        best = max(best, total)
    return Q(best)


# ---------------------------------------------------------------------------
# generators


def generate_document(kind: str, size: int, seed: int, max_cap: int = 5) -> dict:
    """Deterministic pseudo-random instance document for the given kind.

    Costs and capacities lie in [1, max_cap]; the budget is uniform in
    [1, cost(N) - 1] so the trivial remove-everything case never appears.
    ``size`` counts ground elements (matroids), arcs (flows), or vertices
    (bipartite kinds).
    """
    rng = random.Random((kind, size, seed).__repr__())
    if kind in MATROID_KINDS:
        return _gen_matroid(kind, size, rng)
    if kind == "max_flow":
        return _gen_flow(size, rng)
    if kind in BIPARTITE_KINDS:
        return _gen_bipartite(kind, size, rng, max_cap=max_cap)
    raise ValueError(f"unknown problem kind {kind!r}")


def generate(kind: str, size: int, seed: int, max_cap: int = 5) -> Instance:
    doc = generate_document(kind, size, seed, max_cap=max_cap)
    return parse_instance(json.dumps(doc))


def _budget(rng, total):
    return rng.randint(1, max(1, total - 1))


def _gen_matroid_spec(ground, rng):
    variant = rng.choice(["uniform", "partition", "graphic", "explicit"])
    n = len(ground)
    if variant == "uniform":
        return {"variant": "uniform", "n": n, "k": rng.randint(0, n)}
    if variant == "partition":
        order = ground[:]
        rng.shuffle(order)
        blocks = []
        at = 0
        while at < n:
            width = rng.randint(1, min(3, n - at))
            blocks.append({"elements": sorted(order[at:at + width]),
                           "cap": rng.randint(0, width)})
            at += width
        return {"variant": "partition", "blocks": blocks}
    if variant == "graphic":
        vc = rng.randint(2, max(2, n // 2 + 2))
        return {"variant": "graphic", "vertex_count": vc,
                "edges": {e: sorted(rng.sample(range(vc), 2)) if vc > 1 else [0, 0]
                          for e in ground}}
    # explicit: materialize the maximal independent sets of a partition matroid
    caps = {}
    order = ground[:]
    rng.shuffle(order)
    blocks = []
    at = 0
    while at < n:
        width = rng.randint(1, min(3, n - at))
        blocks.append((order[at:at + width], rng.randint(0, width)))
        at += width
    maximal = []
    for combo in itertools.product(*[list(itertools.combinations(sorted(els), cap))
                                     for els, cap in blocks]):
        maximal.append(sorted(e for part in combo for e in part))
    return {"variant": "explicit", "maximal_sets": maximal}


def _gen_matroid(kind, size, rng):
    ground = [f"e{k}" for k in range(size)]
    spec = _gen_matroid_spec(ground, rng)
    if kind == "matroid_cardinality":
        spec["weights"] = {e: 1 for e in ground}
    else:
        spec["weights"] = {e: rng.randint(0, 5) for e in ground}
    if kind == "matroid_submodular_cost":
        universe = [f"u{k}" for k in range(size + 2)]
        weights = {u: rng.randint(1, 3) for u in universe}
        covers = {e: sorted(rng.sample(universe, rng.randint(1, min(3, len(universe)))))
                  for e in ground}
        sub = {"variant": "coverage", "universe": universe,
               "covers": covers, "universe_weights": weights}
        if size <= 8 and seed_bit(rng):
            sub = _coverage_to_explicit(ground, sub)
        cov = SubCost(sub)
        total = cov.value(ground)
        costs = {"submodular": sub}
    else:
        lin = {e: rng.randint(1, 5) for e in ground}
        total = sum(lin.values())
        costs = lin
    return {"problem": kind, "ground": ground, "costs": costs,
            "budget": _budget(rng, total), "payload": spec}


def seed_bit(rng):
    return rng.random() < 0.5


class SubCost:
    def __init__(self, doc):
        self.doc = doc

    def value(self, subset):
        if self.doc["variant"] == "explicit":
            return self.doc["values"][",".join(sorted(subset))]
        covered = set()
        for e in subset:
            covered.update(self.doc["covers"][e])
        return sum(self.doc["universe_weights"][u] for u in covered)


def _coverage_to_explicit(ground, sub):
    cov = SubCost(sub)
    values = {}
    for r in range(len(ground) + 1):
        for comb in itertools.combinations(sorted(ground), r):
            values[",".join(comb)] = cov.value(comb)
    return {"variant": "explicit", "values": values}


def _gen_flow(size, rng):
    inner = [f"v{k}" for k in range(rng.randint(1, 3))]
    vertices = ["s", *inner, "t"]
    ground = [f"a{k}" for k in range(size)]
    tails = ["s", *inner]
    heads = [*inner, "t"]
    arcs = {}
    for k, a in enumerate(ground):
        if k == 0:
            arcs[a] = ["s", rng.choice(inner + ["t"])]
        elif k == 1 and arcs[ground[0]][1] != "t":
            arcs[a] = [arcs[ground[0]][1], "t"]
        else:
            tail = rng.choice(tails)
            head = rng.choice([h for h in heads if h != tail])
            arcs[a] = [tail, head]
    costs = {a: rng.randint(1, 5) for a in ground}
    return {"problem": "max_flow", "ground": ground, "costs": costs,
            "budget": _budget(rng, sum(costs.values())),
            "payload": {"vertices": vertices, "arcs": arcs,
                        "capacities": {a: rng.randint(1, 5) for a in ground},
                        "source": "s", "sink": "t"}}


def _gen_bipartite(kind, size, rng, max_cap=5):
    ni = max(1, size // 2)
    nj = max(1, size - ni)
    part_i = [f"i{k}" for k in range(ni)]
    part_j = [f"j{k}" for k in range(nj)]
    cap = 1 if kind == "bipartite_stable" else max_cap
    chosen = set()
    for i in part_i:
        for j in part_j:
            if rng.random() < 0.5:
                chosen.add((i, j))
    for i in part_i:
        if not any(e[0] == i for e in chosen):
            chosen.add((i, rng.choice(part_j)))
    for j in part_j:
        if not any(e[1] == j for e in chosen):
            chosen.add((rng.choice(part_i), j))
    edges = [[i, j, rng.randint(1, cap)] for i, j in sorted(chosen)]
    ground = part_i + part_j
    costs = {v: rng.randint(1, 5) for v in ground}
    return {"problem": kind, "ground": ground, "costs": costs,
            "budget": _budget(rng, sum(costs.values())),
            "payload": {"part_i": part_i, "part_j": part_j, "edges": edges}}
