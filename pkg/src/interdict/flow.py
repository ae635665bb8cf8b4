"""Network-flow kernels with exact rational arithmetic.

Max-flow/min-cut via augmenting shortest paths (Edmonds-Karp discipline,
which terminates independently of the capacity arithmetic), min-cost flow
with lower bounds via a feasibility max-flow followed by negative-cycle
cancellation, and flow path decomposition.  All functions are pure over
immutable inputs; concurrent calls are safe.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

Q = Fraction


@dataclass(frozen=True)
class Arc:
    name: str
    tail: str
    head: str
    capacity: Fraction
    lower: Fraction = Q(0)
    cost: Fraction = Q(0)


@dataclass(frozen=True)
class CapacitatedNetwork:
    vertices: tuple
    arcs: tuple                  # deterministic arc order
    source: str
    sink: str

    @staticmethod
    def build(vertices, arcs, source, sink):
        """arcs: iterable of (name, tail, head, capacity[, lower[, cost]])."""
        packed = []
        for spec in arcs:
            name, tail, head, cap = spec[0], spec[1], spec[2], Q(spec[3])
            lower = Q(spec[4]) if len(spec) > 4 else Q(0)
            cost = Q(spec[5]) if len(spec) > 5 else Q(0)
            if not cap >= lower >= 0:
                raise ValueError(f"arc {name}: need capacity >= lower >= 0")
            packed.append(Arc(name, tail, head, cap, lower, cost))
        return CapacitatedNetwork(tuple(vertices), tuple(packed), source, sink)


@dataclass(frozen=True)
class CutCertificate:
    source_side: tuple           # sorted vertex set S with s in S, t not in S
    cut_arcs: tuple              # arc names of delta+(S)
    capacity: Fraction


class _Residual:
    """Paired forward/backward residual edges over an arc list."""

    def __init__(self, vertices, arcs):
        self.adj = {v: [] for v in vertices}
        self.to = []
        self.cap = []
        self.cost = []
        self.arc_of = []         # index into arcs for forward edges, else -1
        for idx, a in enumerate(arcs):
            self._add(a.tail, a.head, a.capacity - a.lower, a.cost, idx)

    def _add(self, u, v, cap, cost, arc_idx):
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.cost.append(cost)
        self.arc_of.append(arc_idx)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(Q(0))
        self.cost.append(-cost)
        self.arc_of.append(-1)

    def other(self, eid):
        return eid ^ 1

    def augment_path(self, parent_edge, t, amount):
        v = t
        while parent_edge.get(v) is not None:
            eid = parent_edge[v]
            self.cap[eid] -= amount
            self.cap[eid ^ 1] += amount
            v = self.to[eid ^ 1]

    def bfs_path(self, s, t):
        parent = {s: None}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            if v == t:
                break
            for eid in self.adj[v]:
                w = self.to[eid]
                if w not in parent and self.cap[eid] > 0:
                    parent[w] = eid
                    queue.append(w)
        if t not in parent:
            return None, None
        bottleneck = None
        v = t
        while parent[v] is not None:
            eid = parent[v]
            bottleneck = self.cap[eid] if bottleneck is None else min(bottleneck, self.cap[eid])
            v = self.to[eid ^ 1]
        return parent, bottleneck

    def flow_on(self, arcs):
        """Per-arc flow recovered from backward residual capacities."""
        out = {}
        for idx, a in enumerate(arcs):
            # forward edges were added in arc order: edge 2*idx
            out[a.name] = self.cap[2 * idx + 1] + a.lower
        return out


def max_flow(net: CapacitatedNetwork):
    """Maximum s-t flow value, per-arc flow, and a minimum cut certificate.

    Requires a network without lower bounds.  The returned value equals the
    cut capacity exactly (strong duality).
    """
    if any(a.lower != 0 for a in net.arcs):
        raise ValueError("max_flow requires a network without lower bounds")
    res = _Residual(net.vertices, net.arcs)
    value = Q(0)
    while True:
        parent, bottleneck = res.bfs_path(net.source, net.sink)
        if parent is None:
            break
        res.augment_path(parent, net.sink, bottleneck)
        value += bottleneck

    reach = {net.source}
    queue = deque([net.source])
    while queue:
        v = queue.popleft()
        for eid in res.adj[v]:
            w = res.to[eid]
            if w not in reach and res.cap[eid] > 0:
                reach.add(w)
                queue.append(w)
    cut_arcs = tuple(a.name for a in net.arcs if a.tail in reach and a.head not in reach)
    cut_set = set(cut_arcs)
    cut_cap = sum((a.capacity for a in net.arcs if a.name in cut_set), Q(0))
    assert value == cut_cap, "max-flow/min-cut gap"
    return value, res.flow_on(net.arcs), CutCertificate(tuple(sorted(reach)), cut_arcs, cut_cap)


def _find_negative_cycle(res, vertices):
    """Bellman-Ford negative-cycle detection on the residual graph."""
    dist = {v: Q(0) for v in vertices}
    pred = {}
    marked = None
    for _ in range(len(vertices)):
        changed = False
        for u in vertices:
            for eid in res.adj[u]:
                if res.cap[eid] <= 0:
                    continue
                w = res.to[eid]
                nd = dist[u] + res.cost[eid]
                if nd < dist[w]:
                    dist[w] = nd
                    pred[w] = eid
                    changed = True
                    marked = w
        if not changed:
            return None
    # walk predecessors |V| times to land inside the cycle
    v = marked
    for _ in range(len(vertices)):
        v = res.to[pred[v] ^ 1]
    cycle = []
    start = v
    while True:
        eid = pred[v]
        cycle.append(eid)
        v = res.to[eid ^ 1]
        if v == start:
            break
    cycle.reverse()
    return cycle


def min_cost_flow(net: CapacitatedNetwork, required_value):
    """Minimum-cost feasible flow of exactly the required value, or None.

    Lower bounds are eliminated first; a feasibility max-flow finds any
    flow meeting them and the required value, then negative residual
    cycles are cancelled until none remain.  The result is integral
    whenever all bounds, capacities, and the value are integral.
    """
    required_value = Q(required_value)
    excess = {v: Q(0) for v in net.vertices}
    for a in net.arcs:
        excess[a.head] += a.lower
        excess[a.tail] -= a.lower
    excess[net.source] += required_value
    excess[net.sink] -= required_value

    aux_vertices = list(net.vertices) + ["__super_s", "__super_t"]
    res = _Residual(aux_vertices, net.arcs)
    need = Q(0)
    for v in net.vertices:
        if excess[v] > 0:
            res._add("__super_s", v, excess[v], Q(0), -1)
            need += excess[v]
        elif excess[v] < 0:
            res._add(v, "__super_t", -excess[v], Q(0), -1)

    sent = Q(0)
    while sent < need:
        parent, bottleneck = res.bfs_path("__super_s", "__super_t")
        if parent is None:
            return None
        res.augment_path(parent, "__super_t", bottleneck)
        sent += bottleneck

    while True:
        cycle = _find_negative_cycle(res, aux_vertices)
        if cycle is None:
            break
        amount = min(res.cap[eid] for eid in cycle)
        for eid in cycle:
            res.cap[eid] -= amount
            res.cap[eid ^ 1] += amount
    return res.flow_on(net.arcs)


def flow_cost(net: CapacitatedNetwork, flow) -> Fraction:
    return sum((a.cost * flow[a.name] for a in net.arcs), Q(0))


def path_decompose(net: CapacitatedNetwork, flow):
    """Decompose a conserving s-t flow into at most |arcs| weighted paths.

    Cycles of positive flow are cancelled first; the returned weighted
    paths (as arc-name tuples) sum arc-wise to the remaining acyclic flow.
    """
    remaining = {a.name: Q(flow[a.name]) for a in net.arcs}
    by_tail = {}
    for a in net.arcs:
        by_tail.setdefault(a.tail, []).append(a)

    def positive_out(v):
        return [a for a in by_tail.get(v, ()) if remaining[a.name] > 0]

    # cancel cycles: DFS from every vertex along positive arcs
    def find_cycle():
        for start in net.vertices:
            on_path = {}
            path = []
            seen = set()

            def dfs(v):
                if v in on_path:
                    i = on_path[v]
                    return path[i:]
                if v in seen:
                    return None
                seen.add(v)
                on_path[v] = len(path)
                for a in positive_out(v):
                    path.append(a)
                    cyc = dfs(a.head)
                    if cyc is not None:
                        return cyc
                    path.pop()
                del on_path[v]
                return None

            cyc = dfs(start)
            if cyc:
                return cyc
        return None

    while True:
        cyc = find_cycle()
        if not cyc:
            break
        amount = min(remaining[a.name] for a in cyc)
        for a in cyc:
            remaining[a.name] -= amount

    paths = []
    while True:
        out = positive_out(net.source)
        if not out:
            break
        path = []
        v = net.source
        while v != net.sink:
            arc = positive_out(v)[0]
            path.append(arc)
            v = arc.head
        amount = min(remaining[a.name] for a in path)
        for a in path:
            remaining[a.name] -= amount
        paths.append((tuple(a.name for a in path), amount))
    assert len(paths) <= len(net.arcs), "too many decomposition terms"
    return paths
