"""Bipartite matching kernels shared by the nominal-problem evaluators.

Integer arithmetic throughout: a Kuhn-style augmenting-path maximum
matching, a best-augmenting-path maximum-gain matching, and the capped
stable-set value computed through its LP dual, a minimum-cost edge cover
(an optimal cover is a matching plus a cheapest pendant edge per remaining
vertex, which reduces the cover to a maximum-gain matching).
"""

from __future__ import annotations


def max_cardinality_matching(left, right, edges):
    """Maximum matching as a dict left -> right; Kuhn's augmenting DFS.

    ``edges`` is an iterable of (i, j) pairs; iteration order is made
    deterministic by sorting.
    """
    adj = {i: [] for i in sorted(left)}
    for i, j in sorted(edges):
        adj[i].append(j)
    match_right = {}

    def try_augment(i, seen):
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match_right or try_augment(match_right[j], seen):
                match_right[j] = i
                return True
        return False

    for i in sorted(left):
        try_augment(i, set())
    return {i: j for j, i in match_right.items()}


def max_gain_matching(edges_with_gains):
    """Total gain of a maximum-weight matching (weights > 0 assumed useful).

    Repeatedly augments along the best alternating path found by
    label-correcting relaxation; a path's delta is the gain added minus
    the gain dropped.  Stops when no augmenting path has positive delta,
    which is optimal because the matching stays extreme for its
    cardinality after each best-path augmentation.
    """
    gains = {}
    lefts, rights = set(), set()
    for i, j, g in edges_with_gains:
        if g > 0:
            gains[(i, j)] = g
            lefts.add(i)
            rights.add(j)
    match_of_j = {}              # j -> i
    match_of_i = {}              # i -> j
    total = 0
    edge_list = sorted(gains)

    while True:
        # value[v]: best delta of an alternating path starting at a free
        # left vertex and ending at v; prev reconstructs the path.  No
        # positive alternating cycle exists (the matching stays extreme
        # for its cardinality), so |V| relaxation rounds suffice.
        value = {i: 0 for i in lefts if i not in match_of_i}
        prev = {}
        for _ in range(len(lefts) + len(rights)):
            changed = False
            for (i, j) in edge_list:
                if i in value and match_of_i.get(i) != j:
                    cand = value[i] + gains[(i, j)]
                    if j not in value or cand > value[j]:
                        value[j] = cand
                        prev[j] = i
                        changed = True
            for j in sorted(match_of_j):
                if j in value:
                    i = match_of_j[j]
                    cand = value[j] - gains[(i, j)]
                    if i not in value or cand > value[i]:
                        value[i] = cand
                        prev[i] = j
                        changed = True
            if not changed:
                break

        best_j, best_delta = None, 0
        for j in sorted(rights):
            if j not in match_of_j and j in value and value[j] > best_delta:
                best_j, best_delta = j, value[j]
        if best_j is None:
            return total

        total += best_delta
        j = best_j
        while True:
            i = prev[j]          # arrived at j by adding edge (i, j)
            match_of_j[j] = i
            match_of_i[i] = j
            if i not in prev:    # i was the free starting vertex
                break
            j = prev[i]          # arrived at i by dropping its matched edge


def min_cost_edge_cover(require, edges_with_caps):
    """Minimum total capacity of an edge set covering every required vertex.

    ``edges_with_caps`` maps (i, j) -> positive cost; edges may touch
    non-required vertices.  Returns 0 when nothing is required.  An optimal
    cover is a matching plus cheapest pendant edges, so the cost is
    sum of per-vertex cheapest edges minus a maximum-gain matching over
    the required-required edges.
    """
    require = set(require)
    if not require:
        return 0
    cheapest = {}
    for (i, j), b in edges_with_caps.items():
        for v in (i, j):
            if v in require and (v not in cheapest or b < cheapest[v]):
                cheapest[v] = b
    base = sum(cheapest[v] for v in require)
    gain_edges = []
    for (i, j), b in sorted(edges_with_caps.items()):
        if i in require and j in require:
            g = cheapest[i] + cheapest[j] - b
            if g > 0:
                gain_edges.append((i, j, g))
    return base - max_gain_matching(gain_edges)


def bstable_value(graph, removed):
    """Nominal capped-stable-set value with the removed vertices forced to 0.

    Constraints of removed vertices are retained (removal zeroes the
    variable, it does not delete edges), so the value is the LP optimum
    max sum x(v) over v not removed subject to x(i)+x(j) <= b on every
    edge.  Computed exactly through the dual minimum-cost edge cover.
    """
    removed = set(removed)
    keep = [v for v in list(graph.part_i) + list(graph.part_j) if v not in removed]
    return min_cost_edge_cover(keep, graph.edge_caps)
