"""Instance model, JSON interchange format, and validation.

An instance is a single JSON document with five fields:

    {
      "problem": "matroid_cardinality" | "matroid_weighted"
               | "matroid_submodular_cost" | "max_flow"
               | "bipartite_bstable" | "bipartite_stable",
      "ground":  ["e1", "e2", ...],          # element identifiers, unique
      "costs":   {"e1": 1, ...}              # linear removal costs, or
                 {"submodular": {...}},      # a submodular cost spec
      "budget":  3,
      "payload": {...}                       # see below per problem kind
    }

Matroid payloads (``weights`` optional, defaults to all ones; must be all
ones for ``matroid_cardinality``):

    {"variant": "uniform",   "n": 3, "k": 2, "weights": {...}}
    {"variant": "partition", "blocks": [{"elements": [...], "cap": 1}, ...]}
    {"variant": "graphic",   "vertex_count": 3, "edges": {"e1": [0, 1], ...}}
    {"variant": "explicit",  "maximal_sets": [["a", "b"], ["b", "c"]]}

Flow payload (ground = arc identifiers):

    {"vertices": ["s", "v", "t"],
     "arcs": {"a1": ["s", "v"], ...},
     "capacities": {"a1": 2, ...},
     "source": "s", "sink": "t"}

Bipartite payload (ground = vertex identifiers, edges as [i, j, b] with b
omitted meaning 1; ``bipartite_stable`` requires b = 1 throughout):

    {"part_i": ["i1", ...], "part_j": ["j1", ...],
     "edges": [["i1", "j1", 5], ...],
     "vertex_capacities": {"i1": 2, ...}}    # optional, bstable only

A ``vertex_capacities`` map is rewritten at parse time into an equivalent
uncapacitated instance by adding one auxiliary vertex per side, joined to
the opposite side with edge capacities equal to the vertex capacities; the
auxiliary vertices get removal cost B+1 so no budget-feasible set touches
them.

Submodular cost specs (integer-valued; subsets keyed as comma-joined sorted
identifiers for the explicit table):

    {"variant": "linear",   "values": {"a": 1, ...}}
    {"variant": "explicit", "values": {"": 0, "a": 1, "a,b": 2, ...}}
    {"variant": "coverage", "universe": [...],
     "covers": {"a": ["u1", ...], ...}, "universe_weights": {"u1": 2, ...}}

Instances are immutable after validation and safe to share across
concurrent solver invocations.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .guards import check_size

PROBLEM_KINDS = (
    "matroid_cardinality",
    "matroid_weighted",
    "matroid_submodular_cost",
    "max_flow",
    "bipartite_bstable",
    "bipartite_stable",
)
MATROID_KINDS = ("matroid_cardinality", "matroid_weighted", "matroid_submodular_cost")
BIPARTITE_KINDS = ("bipartite_bstable", "bipartite_stable")

EXPLICIT_MATROID_LIMIT = 16
EXPLICIT_SUBMODULAR_LIMIT = 20


class ParseError(Exception):
    """Malformed instance document (syntax or missing/ill-typed fields)."""


class ValidationError(Exception):
    """Instance violates a semantic invariant; carries the violation list."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


@dataclass(frozen=True)
class SubmodularCostSpec:
    """Monotone integer-valued submodular removal cost, given by value oracle.

    ``variant`` is one of ``linear`` (values = per-element costs),
    ``explicit`` (values = full subset table keyed by frozenset), or
    ``coverage`` (cost of S = total weight of the universe items covered by
    the elements of S).
    """

    variant: str
    values: dict = field(default_factory=dict)      # linear / explicit
    universe: tuple = ()                            # coverage
    covers: dict = field(default_factory=dict)      # coverage
    universe_weights: dict = field(default_factory=dict)

    def value(self, subset) -> int:
        s = frozenset(subset)
        if self.variant == "linear":
            return sum(self.values[e] for e in s)
        if self.variant == "explicit":
            return self.values[s]
        covered = set()
        for e in s:
            covered.update(self.covers.get(e, ()))
        return sum(self.universe_weights[u] for u in covered)


@dataclass(frozen=True)
class MatroidSpec:
    """One of the supported matroid encodings plus element weights.

    The explicit variant stores the maximal independent sets; the family is
    subset-closed by construction and is assumed to satisfy the matroid
    exchange property (the greedy weighted-rank computation relies on it).
    """

    variant: str                 # uniform | partition | graphic | explicit
    weights: dict                # element -> nonnegative int
    n: int = 0                   # uniform
    k: int = 0                   # uniform
    blocks: tuple = ()           # partition: ((frozenset, cap), ...)
    vertex_count: int = 0        # graphic
    edges: dict = field(default_factory=dict)   # graphic: element -> (u, v)
    maximal_sets: tuple = ()     # explicit: (frozenset, ...)


@dataclass(frozen=True)
class FlowNetwork:
    vertices: tuple
    arcs: dict                   # arc id -> (tail, head)
    capacities: dict             # arc id -> positive int
    source: str
    sink: str


@dataclass(frozen=True)
class BipartiteInstance:
    part_i: tuple
    part_j: tuple
    edges: tuple                 # ((i, j), ...) in canonical order
    edge_caps: dict              # (i, j) -> positive int

    def incident(self, v):
        return tuple(e for e in self.edges if v in e)


@dataclass(frozen=True)
class Instance:
    problem_kind: str
    ground: tuple                # canonical (lexicographic) element order
    costs: dict | SubmodularCostSpec
    budget: int
    payload: MatroidSpec | FlowNetwork | BipartiteInstance

    @property
    def has_submodular_costs(self) -> bool:
        return isinstance(self.costs, SubmodularCostSpec)

    def cost_of(self, subset) -> int:
        """Removal cost of a subset of the ground set."""
        if self.has_submodular_costs:
            return self.costs.value(subset)
        return sum(self.costs[e] for e in subset)

    @property
    def total_cost(self) -> int:
        return self.cost_of(self.ground)


# ---------------------------------------------------------------------------
# parsing / serialization


def _require(doc, key, types, where):
    if key not in doc:
        raise ParseError(f"{where}: missing field '{key}'")
    val = doc[key]
    if not isinstance(val, types):
        raise ParseError(f"{where}: field '{key}' has wrong type")
    return val


def _subset_key(subset) -> str:
    return ",".join(sorted(subset))


def _parse_submodular(doc) -> SubmodularCostSpec:
    variant = _require(doc, "variant", str, "costs.submodular")
    if variant == "linear":
        values = _require(doc, "values", dict, "costs.submodular")
        return SubmodularCostSpec("linear", values=dict(values))
    if variant == "explicit":
        raw = _require(doc, "values", dict, "costs.submodular")
        table = {}
        for key, val in raw.items():
            elems = frozenset(key.split(",")) if key else frozenset()
            table[elems] = val
        return SubmodularCostSpec("explicit", values=table)
    if variant == "coverage":
        return SubmodularCostSpec(
            "coverage",
            universe=tuple(_require(doc, "universe", list, "costs.submodular")),
            covers={e: tuple(v) for e, v in _require(doc, "covers", dict, "costs.submodular").items()},
            universe_weights=dict(_require(doc, "universe_weights", dict, "costs.submodular")),
        )
    raise ParseError(f"costs.submodular: unknown variant '{variant}'")


def _parse_matroid(doc) -> MatroidSpec:
    variant = _require(doc, "variant", str, "payload")
    weights = dict(doc.get("weights") or {})
    if variant == "uniform":
        return MatroidSpec("uniform", weights,
                           n=_require(doc, "n", int, "payload"),
                           k=_require(doc, "k", int, "payload"))
    if variant == "partition":
        blocks = []
        for blk in _require(doc, "blocks", list, "payload"):
            blocks.append((frozenset(_require(blk, "elements", list, "payload.blocks")),
                           _require(blk, "cap", int, "payload.blocks")))
        return MatroidSpec("partition", weights, blocks=tuple(blocks))
    if variant == "graphic":
        edges = {e: tuple(uv) for e, uv in _require(doc, "edges", dict, "payload").items()}
        return MatroidSpec("graphic", weights,
                           vertex_count=_require(doc, "vertex_count", int, "payload"),
                           edges=edges)
    if variant == "explicit":
        sets = tuple(frozenset(s) for s in _require(doc, "maximal_sets", list, "payload"))
        return MatroidSpec("explicit", weights, maximal_sets=sets)
    raise ParseError(f"payload: unknown matroid variant '{variant}'")


def _parse_flow(doc) -> FlowNetwork:
    return FlowNetwork(
        vertices=tuple(_require(doc, "vertices", list, "payload")),
        arcs={a: tuple(uv) for a, uv in _require(doc, "arcs", dict, "payload").items()},
        capacities=dict(_require(doc, "capacities", dict, "payload")),
        source=_require(doc, "source", str, "payload"),
        sink=_require(doc, "sink", str, "payload"),
    )


def _parse_bipartite(doc, kind, budget, costs, ground):
    part_i = list(_require(doc, "part_i", list, "payload"))
    part_j = list(_require(doc, "part_j", list, "payload"))
    raw_edges = _require(doc, "edges", list, "payload")
    edges, caps = [], {}
    for entry in raw_edges:
        if not isinstance(entry, list) or len(entry) not in (2, 3):
            raise ParseError("payload.edges: expected [i, j] or [i, j, b] entries")
        i, j = entry[0], entry[1]
        b = entry[2] if len(entry) == 3 else 1
        edges.append((i, j))
        caps[(i, j)] = b

    vertex_caps = doc.get("vertex_capacities")
    if vertex_caps:
        if kind != "bipartite_bstable":
            raise ParseError("payload.vertex_capacities: only supported for bipartite_bstable")
        missing = [v for v in part_i + part_j if v not in vertex_caps]
        if missing:
            raise ParseError(f"payload.vertex_capacities: missing capacity for {missing[0]}")
        aux_i, aux_j = "_cap_I", "_cap_J"
        while aux_i in ground or aux_j in ground:
            aux_i += "_"
            aux_j += "_"
        for j in part_j:
            edges.append((aux_i, j))
            caps[(aux_i, j)] = vertex_caps[j]
        for i in part_i:
            edges.append((i, aux_j))
            caps[(i, aux_j)] = vertex_caps[i]
        part_i.append(aux_i)
        part_j.append(aux_j)
        ground = ground + [aux_i, aux_j]
        costs = dict(costs)
        costs[aux_i] = budget + 1
        costs[aux_j] = budget + 1

    edges.sort()
    payload = BipartiteInstance(tuple(sorted(part_i)), tuple(sorted(part_j)),
                                tuple(edges), caps)
    return payload, ground, costs


def parse_instance(text: str) -> Instance:
    """Parse a JSON instance document, validate it, and return the Instance.

    Raises ParseError on syntax/shape problems (with position information
    for JSON syntax errors) and ValidationError when a semantic invariant
    fails.  Parsing, serializing, and parsing again is idempotent.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level: expected a JSON object")

    kind = _require(doc, "problem", str, "top level")
    if kind not in PROBLEM_KINDS:
        raise ParseError(f"top level: unknown problem kind '{kind}'")
    ground = list(_require(doc, "ground", list, "top level"))
    budget = _require(doc, "budget", int, "top level")
    raw_costs = _require(doc, "costs", dict, "top level")
    if "submodular" in raw_costs:
        costs = _parse_submodular(raw_costs["submodular"])
    else:
        costs = dict(raw_costs)

    payload_doc = _require(doc, "payload", dict, "top level")
    if kind in MATROID_KINDS:
        payload = _parse_matroid(payload_doc)
        if not payload.weights:
            payload = MatroidSpec(payload.variant, {e: 1 for e in ground},
                                  n=payload.n, k=payload.k, blocks=payload.blocks,
                                  vertex_count=payload.vertex_count, edges=payload.edges,
                                  maximal_sets=payload.maximal_sets)
    elif kind == "max_flow":
        payload = _parse_flow(payload_doc)
    else:
        if isinstance(costs, SubmodularCostSpec):
            raise ParseError("costs: submodular costs are only supported for matroid problems")
        payload, ground, costs = _parse_bipartite(payload_doc, kind, budget, costs, ground)

    inst = Instance(kind, tuple(sorted(ground)), costs, budget, payload)
    violations = validate(inst)
    if violations:
        raise ValidationError(violations)
    return inst


def serialize_instance(inst: Instance) -> str:
    """Serialize to the canonical JSON document (sorted keys, sorted ground)."""
    if inst.has_submodular_costs:
        spec = inst.costs
        if spec.variant == "linear":
            sub = {"variant": "linear", "values": dict(sorted(spec.values.items()))}
        elif spec.variant == "explicit":
            sub = {"variant": "explicit",
                   "values": {_subset_key(s): v
                              for s, v in sorted(spec.values.items(), key=lambda kv: _subset_key(kv[0]))}}
        else:
            sub = {"variant": "coverage", "universe": sorted(spec.universe),
                   "covers": {e: sorted(c) for e, c in sorted(spec.covers.items())},
                   "universe_weights": dict(sorted(spec.universe_weights.items()))}
        costs = {"submodular": sub}
    else:
        costs = dict(sorted(inst.costs.items()))

    pay = inst.payload
    if inst.problem_kind in MATROID_KINDS:
        payload = {"variant": pay.variant, "weights": dict(sorted(pay.weights.items()))}
        if pay.variant == "uniform":
            payload.update(n=pay.n, k=pay.k)
        elif pay.variant == "partition":
            payload["blocks"] = [{"elements": sorted(els), "cap": cap}
                                 for els, cap in pay.blocks]
        elif pay.variant == "graphic":
            payload.update(vertex_count=pay.vertex_count,
                           edges={e: list(uv) for e, uv in sorted(pay.edges.items())})
        else:
            payload["maximal_sets"] = sorted(sorted(s) for s in pay.maximal_sets)
    elif inst.problem_kind == "max_flow":
        payload = {"vertices": list(pay.vertices),
                   "arcs": {a: list(uv) for a, uv in sorted(pay.arcs.items())},
                   "capacities": dict(sorted(pay.capacities.items())),
                   "source": pay.source, "sink": pay.sink}
    else:
        payload = {"part_i": list(pay.part_i), "part_j": list(pay.part_j),
                   "edges": [[i, j, pay.edge_caps[(i, j)]] for i, j in pay.edges]}

    doc = {"problem": inst.problem_kind, "ground": list(inst.ground),
           "costs": costs, "budget": inst.budget, "payload": payload}
    return json.dumps(doc, sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# validation


def check_submodular(spec: SubmodularCostSpec) -> bool:
    """Exhaustively check the diminishing-marginals inequality.

    True iff k(A + e) - k(A) >= k(B + e) - k(B) for all A subset of B and
    e outside B.  Linear maps and coverage functions satisfy it by
    construction; explicit tables are checked over every (A, B, e) with the
    ground set capped at EXPLICIT_SUBMODULAR_LIMIT elements.
    """
    if spec.variant in ("linear", "coverage"):
        return True
    elements = sorted({e for s in spec.values for e in s})
    check_size("explicit submodular table", len(elements), EXPLICIT_SUBMODULAR_LIMIT)
    val = spec.values
    for b_mask in itertools.chain.from_iterable(
            itertools.combinations(elements, r) for r in range(len(elements) + 1)):
        b_set = frozenset(b_mask)
        outside = [e for e in elements if e not in b_set]
        for a_mask in itertools.chain.from_iterable(
                itertools.combinations(sorted(b_set), r) for r in range(len(b_set) + 1)):
            a_set = frozenset(a_mask)
            for e in outside:
                lhs = val[a_set | {e}] - val[a_set]
                rhs = val[b_set | {e}] - val[b_set]
                if lhs < rhs:
                    return False
    return True


def _validate_costs(inst, out):
    if inst.has_submodular_costs:
        spec = inst.costs
        if inst.problem_kind != "matroid_submodular_cost":
            out.append("submodular costs require problem kind matroid_submodular_cost")
            return
        if spec.variant == "explicit":
            keys = set(spec.values)
            expected = 1 << len(inst.ground)
            if len(keys) != expected or any(not k <= set(inst.ground) for k in keys):
                out.append("explicit submodular table must cover every subset of the ground set")
                return
            if any(not isinstance(v, int) for v in spec.values.values()):
                out.append("submodular cost values must be integers")
                return
            if spec.values[frozenset()] != 0:
                out.append("submodular cost of the empty set must be 0")
            for a, va in spec.values.items():
                for b, vb in spec.values.items():
                    if a < b and va > vb:
                        out.append(f"not monotone: cost({_subset_key(a)}) > cost({_subset_key(b)})")
                        return
            if not check_submodular(spec):
                out.append("explicit cost table is not submodular")
        elif spec.variant == "linear":
            for e in inst.ground:
                if e not in spec.values or not isinstance(spec.values[e], int):
                    out.append(f"missing or non-integer cost for element {e}")
                    return
        elif spec.variant == "coverage":
            for u, w in spec.universe_weights.items():
                if not isinstance(w, int) or w < 0:
                    out.append(f"universe weight of {u} must be a nonnegative integer")
                    return
            for e, cov in spec.covers.items():
                if not set(cov) <= set(spec.universe):
                    out.append(f"cover of {e} references unknown universe items")
                    return
        for e in inst.ground:
            if spec.value({e}) < 1:
                out.append(f"removal cost of {{{e}}} must be at least 1")
                return
    else:
        for e in inst.ground:
            c = inst.costs.get(e)
            if not isinstance(c, int) or c < 1:
                out.append(f"cost of {e} must be a positive integer")
        if set(inst.costs) - set(inst.ground):
            out.append("costs reference unknown elements")


def _validate_matroid(inst, out):
    spec = inst.payload
    n = len(inst.ground)
    for e, w in spec.weights.items():
        if not isinstance(w, int) or w < 0:
            out.append(f"weight of {e} must be a nonnegative integer")
    if set(spec.weights) != set(inst.ground):
        out.append("weights must be given for exactly the ground set")
    if inst.problem_kind == "matroid_cardinality" and any(w != 1 for w in spec.weights.values()):
        out.append("matroid_cardinality requires all-ones weights")
    if spec.variant == "uniform":
        if spec.n != n:
            out.append("uniform matroid: n must equal the ground set size")
        if not 0 <= spec.k <= spec.n:
            out.append("uniform matroid: need 0 <= k <= n")
    elif spec.variant == "partition":
        seen = set()
        for els, cap in spec.blocks:
            if cap < 0:
                out.append("partition matroid: negative block cap")
            if els & seen:
                out.append("partition matroid: blocks overlap")
            seen |= els
        if seen != set(inst.ground):
            out.append("partition matroid: blocks must cover the ground set")
    elif spec.variant == "graphic":
        if set(spec.edges) != set(inst.ground):
            out.append("graphic matroid: edges must be indexed by the ground set")
        for e, (u, v) in spec.edges.items():
            if not (0 <= u < spec.vertex_count and 0 <= v < spec.vertex_count):
                out.append(f"graphic matroid: edge {e} references invalid vertices")
    elif spec.variant == "explicit":
        check_size("explicit matroid", n, EXPLICIT_MATROID_LIMIT)
        if not spec.maximal_sets:
            out.append("explicit matroid: independence family must be nonempty")
        for s in spec.maximal_sets:
            if not s <= set(inst.ground):
                out.append("explicit matroid: independent set references unknown elements")
    else:
        out.append(f"unknown matroid variant '{spec.variant}'")


def _validate_flow(inst, out):
    net = inst.payload
    verts = set(net.vertices)
    if len(verts) != len(net.vertices):
        out.append("duplicate vertex identifiers")
    if net.source == net.sink:
        out.append("source and sink must differ")
    if net.source not in verts or net.sink not in verts:
        out.append("source/sink must be vertices of the network")
    if set(net.arcs) != set(inst.ground):
        out.append("ground set must equal the arc identifier set")
    for a, (tail, head) in net.arcs.items():
        if tail not in verts or head not in verts:
            out.append(f"arc {a} references unknown vertices")
        if head == net.source:
            out.append(f"arc enters source: {a}")
    for a in net.arcs:
        u = net.capacities.get(a)
        if not isinstance(u, int) or u < 1:
            out.append(f"capacity of arc {a} must be a positive integer")


def _validate_bipartite(inst, out):
    g = inst.payload
    parts = set(g.part_i) | set(g.part_j)
    if set(g.part_i) & set(g.part_j):
        out.append("parts I and J must be disjoint")
    if parts != set(inst.ground):
        out.append("ground set must equal the vertex set I + J")
    covered = set()
    for (i, j) in g.edges:
        if i not in g.part_i or j not in g.part_j:
            out.append(f"edge ({i}, {j}) must join I to J")
        covered.update((i, j))
        b = g.edge_caps.get((i, j))
        if not isinstance(b, int) or b < 1:
            out.append(f"edge capacity of ({i}, {j}) must be a positive integer")
        elif inst.problem_kind == "bipartite_stable" and b != 1:
            out.append(f"bipartite_stable requires unit edge capacities, got {b} on ({i}, {j})")
    isolated = parts - covered
    if isolated:
        out.append(f"unbounded nominal problem: isolated vertex {sorted(isolated)[0]}")


def validate(inst: Instance) -> list:
    """Return the list of invariant violations (empty means valid)."""
    out = []
    if inst.problem_kind not in PROBLEM_KINDS:
        out.append(f"unknown problem kind '{inst.problem_kind}'")
        return out
    if len(set(inst.ground)) != len(inst.ground):
        out.append("duplicate element identifiers in ground set")
        return out
    if not inst.ground:
        out.append("empty ground set")
        return out
    if not isinstance(inst.budget, int) or inst.budget < 1:
        out.append("budget must be a positive integer")
    _validate_costs(inst, out)
    if out:
        return out
    if inst.problem_kind in MATROID_KINDS:
        _validate_matroid(inst, out)
    elif inst.problem_kind == "max_flow":
        _validate_flow(inst, out)
    else:
        _validate_bipartite(inst, out)
    return out
