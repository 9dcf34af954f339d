"""Signed multigraphs, half-edge orientations and flow verification.

Orientation convention
----------------------
Every edge ``(u, v)`` carries two half-edges, one at each endpoint.  A flow
stores, per edge, a pair ``(to_u, to_v)`` of booleans telling whether the
half-edge at ``u`` (resp. ``v``) points *toward* that endpoint.  A positive
edge needs exactly one half-edge pointing to its endvertex; a negative edge
needs both or neither.

The *contribution* of an edge at one of its endpoints is its value if the
half-edge there points away (outflow) and minus its value otherwise.  A
vertex conserves flow when its contributions sum to zero.

The canonical orientation used by every construction in this package
directs positive edges ``u -> v`` and makes negative edges extroverted
(both half-edges pointing away).  Under it the *canonical value* of an edge
equals its contribution at ``u``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Sequence

__all__ = [
    "GraphError",
    "LoopError",
    "Edge",
    "SignedGraph",
    "FlowAssignment",
    "Violation",
    "VerifyReport",
    "Balance",
    "switch",
    "switch_many",
    "cycle_sign",
    "verify_flow",
    "boundary",
    "switch_flow",
    "canonical_flow",
    "canonical_values",
    "contribution",
    "series_connection",
    "parallel_connection",
]

_TOKEN = re.compile(r"^[A-Za-z0-9_.]+$")


class GraphError(ValueError):
    """Malformed graph, unknown vertex/edge, or mismatched flow."""


class LoopError(GraphError):
    """Raised when an edge would join a vertex to itself."""


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    sign: int

    def other(self, w: str) -> str:
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        raise GraphError(f"vertex {w!r} is not an endpoint of {self.id}")


@dataclass(frozen=True)
class SignedGraph:
    """Loopless signed multigraph, optionally two-terminal.

    ``terminals`` is an ordered pair ``(source, target)`` or ``None``.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    terminals: tuple[str, str] | None = None

    def __post_init__(self) -> None:
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        seen: set[str] = set()
        for e in self.edges:
            if e.id in seen:
                raise GraphError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.sign not in (1, -1):
                raise GraphError(f"edge {e.id}: sign must be +1 or -1")
            if e.u == e.v:
                raise LoopError(f"edge {e.id} is a loop at {e.u!r}")
            if e.u not in vset or e.v not in vset:
                raise GraphError(f"edge {e.id} has an endpoint outside the vertex set")
        if self.terminals is not None:
            s, t = self.terminals
            if s == t:
                raise GraphError("terminals must be distinct")
            if s not in vset or t not in vset:
                raise GraphError("terminals must be vertices of the graph")

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str, int]],
        terminals: tuple[str, str] | None = None,
        ids: Sequence[str] | None = None,
    ) -> "SignedGraph":
        """Build a graph from ``(u, v, sign)`` triples; ids default to ``e0, e1, ...``."""
        triples = list(edges)
        if ids is None:
            ids = [f"e{i}" for i in range(len(triples))]
        verts: dict[str, None] = {}
        if terminals is not None:
            verts.update(dict.fromkeys(terminals))
        elist = []
        for eid, (u, v, sign) in zip(ids, triples):
            verts.setdefault(u)
            verts.setdefault(v)
            elist.append(Edge(eid, u, v, int(sign)))
        return cls(tuple(verts), tuple(elist), terminals)

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def incidence(self) -> dict[str, tuple[Edge, ...]]:
        inc: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.u].append(e)
            inc[e.v].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def edge(self, eid: str) -> Edge:
        try:
            return self.edge_map[eid]
        except KeyError:
            raise GraphError(f"unknown edge {eid!r}") from None

    def degree(self, v: str) -> int:
        return len(self.incidence[v])

    def neighbours(self, v: str) -> set[str]:
        return {e.other(v) for e in self.incidence[v]}

    def negative_edges(self) -> list[str]:
        return [e.id for e in self.edges if e.sign < 0]

    def without_edges(self, eids: Iterable[str]) -> "SignedGraph":
        drop = set(eids)
        return SignedGraph(
            self.vertices, tuple(e for e in self.edges if e.id not in drop), self.terminals
        )

    def closed(self) -> "SignedGraph":
        """The same graph with the terminal designation dropped."""
        return SignedGraph(self.vertices, self.edges, None)

    def edge_set(self) -> frozenset[tuple[str, str, str, int]]:
        return frozenset((e.id, e.u, e.v, e.sign) for e in self.edges)

    def same_as(self, other: "SignedGraph") -> bool:
        """Equality ignoring the order in which vertices and edges are listed."""
        return (
            set(self.vertices) == set(other.vertices)
            and self.edge_set() == other.edge_set()
            and self.terminals == other.terminals
        )

    def is_balanced(self) -> bool:
        """True iff every cycle has an even number of negative edges."""
        # 2-colour by potential: sign(e) must equal pot[u] * pot[v].
        pot: dict[str, int] = {}
        for root in self.vertices:
            if root in pot:
                continue
            pot[root] = 1
            stack = [root]
            while stack:
                x = stack.pop()
                for e in self.incidence[x]:
                    y = e.other(x)
                    want = pot[x] * e.sign
                    if y not in pot:
                        pot[y] = want
                        stack.append(y)
                    elif pot[y] != want:
                        return False
        return True


def switch(g: SignedGraph, v: str) -> SignedGraph:
    """Flip the sign of every edge incident with ``v``."""
    if v not in g.incidence:
        raise GraphError(f"unknown vertex {v!r}")
    edges = tuple(
        Edge(e.id, e.u, e.v, -e.sign) if v in (e.u, e.v) else e for e in g.edges
    )
    return SignedGraph(g.vertices, edges, g.terminals)


def switch_many(g: SignedGraph, vertices: Iterable[str]) -> SignedGraph:
    for v in vertices:
        g = switch(g, v)
    return g


class Balance(str, Enum):
    BALANCED = "balanced"
    UNBALANCED = "unbalanced"


def _check_cycle(g: SignedGraph, cycle: Sequence[str]) -> None:
    if len(cycle) < 2 or len(set(cycle)) != len(cycle):
        raise GraphError("a cycle needs at least two distinct edges")
    deg: dict[str, int] = {}
    for eid in cycle:
        e = g.edge(eid)
        deg[e.u] = deg.get(e.u, 0) + 1
        deg[e.v] = deg.get(e.v, 0) + 1
    if any(d != 2 for d in deg.values()):
        raise GraphError("edges do not form a cycle")
    # connectedness of the 2-regular edge set
    adj: dict[str, list[str]] = {}
    for eid in cycle:
        e = g.edge(eid)
        adj.setdefault(e.u, []).append(e.v)
        adj.setdefault(e.v, []).append(e.u)
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(adj):
        raise GraphError("edges do not form a single cycle")


def cycle_sign(g: SignedGraph, cycle: Sequence[str]) -> Balance:
    _check_cycle(g, cycle)
    neg = sum(1 for eid in cycle if g.edge(eid).sign < 0)
    return Balance.BALANCED if neg % 2 == 0 else Balance.UNBALANCED


@dataclass(frozen=True)
class FlowAssignment:
    """Orientation plus integer value per edge.

    ``orientation[eid] = (to_u, to_v)``.  With free terminals the same object
    is a pseudoflow.
    """

    orientation: Mapping[str, tuple[bool, bool]]
    value: Mapping[str, int]
    k: int = 6

    def __post_init__(self) -> None:
        if self.k < 2:
            raise GraphError("flow bound k must be at least 2")
        if set(self.orientation) != set(self.value):
            raise GraphError("orientation and value must cover the same edges")

    @property
    def edge_ids(self) -> set[str]:
        return set(self.value)

    def with_k(self, k: int) -> "FlowAssignment":
        return FlowAssignment(dict(self.orientation), dict(self.value), k)

    def negated(self) -> "FlowAssignment":
        """Reverse every half-edge and negate every value.

        The result describes the same flow: every contribution is unchanged,
        and legality of the orientation is preserved (both bits flip).
        """
        return FlowAssignment(
            {e: (not a, not b) for e, (a, b) in self.orientation.items()},
            {e: -x for e, x in self.value.items()},
            self.k,
        )

    def restricted(self, eids: Iterable[str]) -> "FlowAssignment":
        keep = set(eids)
        return FlowAssignment(
            {e: o for e, o in self.orientation.items() if e in keep},
            {e: x for e, x in self.value.items() if e in keep},
            self.k,
        )


def contribution(e: Edge, to_u: bool, to_v: bool, value: int, at: str) -> int:
    """Net outflow of edge ``e`` at endpoint ``at``."""
    if at == e.u:
        return -value if to_u else value
    if at == e.v:
        return -value if to_v else value
    raise GraphError(f"{at!r} is not an endpoint of {e.id}")


def canonical_orientation(e: Edge) -> tuple[bool, bool]:
    return (False, True) if e.sign > 0 else (False, False)


def canonical_flow(g: SignedGraph, values: Mapping[str, int], k: int = 6) -> FlowAssignment:
    """Wrap canonical values (contribution at ``u``) into a FlowAssignment."""
    if set(values) != set(g.edge_map):
        raise GraphError("values must cover exactly the edges of the graph")
    return FlowAssignment(
        {e.id: canonical_orientation(e) for e in g.edges},
        {e.id: int(values[e.id]) for e in g.edges},
        k,
    )


def canonical_values(g: SignedGraph, f: FlowAssignment) -> dict[str, int]:
    """Re-express ``f`` in the canonical orientation (values may change sign)."""
    out = {}
    for e in g.edges:
        to_u, to_v = f.orientation[e.id]
        out[e.id] = contribution(e, to_u, to_v, f.value[e.id], e.u)
    return out


@dataclass(frozen=True)
class Violation:
    kind: str  # "zero", "range", "orientation", "conservation"
    where: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind} at {self.where}" + (f": {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class VerifyReport:
    violations: tuple[Violation, ...]
    boundary: tuple[int, int] | None = None
    net: Mapping[str, int] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def _net_outflows(g: SignedGraph, f: FlowAssignment) -> dict[str, int]:
    net = dict.fromkeys(g.vertices, 0)
    for e in g.edges:
        to_u, to_v = f.orientation[e.id]
        x = f.value[e.id]
        net[e.u] += -x if to_u else x
        net[e.v] += -x if to_v else x
    return net


def verify_flow(
    g: SignedGraph, f: FlowAssignment, treat_terminals_as_free: bool = False
) -> VerifyReport:
    """Check nowhere-zero, range, orientation legality and conservation."""
    if set(f.value) != set(g.edge_map):
        missing = sorted(set(g.edge_map) - set(f.value))
        extra = sorted(set(f.value) - set(g.edge_map))
        raise GraphError(f"edge-id mismatch (missing={missing}, extra={extra})")
    problems: list[Violation] = []
    for e in g.edges:
        x = f.value[e.id]
        if x == 0:
            problems.append(Violation("zero", e.id))
        elif abs(x) >= f.k:
            problems.append(Violation("range", e.id, f"|{x}| >= {f.k}"))
        to_u, to_v = f.orientation[e.id]
        if e.sign > 0 and to_u == to_v:
            problems.append(Violation("orientation", e.id, "positive edge needs exactly one head"))
        if e.sign < 0 and to_u != to_v:
            problems.append(Violation("orientation", e.id, "negative edge needs zero or two heads"))
    net = _net_outflows(g, f)
    free = set(g.terminals) if (treat_terminals_as_free and g.terminals) else set()
    for v in g.vertices:
        if v not in free and net[v] != 0:
            problems.append(Violation("conservation", v, f"net outflow {net[v]}"))
    bnd = None
    if g.terminals is not None:
        s, t = g.terminals
        bnd = (net[s], -net[t])
    return VerifyReport(tuple(problems), bnd, net)


def boundary(g: SignedGraph, f: FlowAssignment) -> tuple[int, int]:
    """``(a, b)``: net outflow at the source, net inflow at the target."""
    if g.terminals is None:
        raise GraphError("graph has no terminals")
    net = _net_outflows(g, f)
    s, t = g.terminals
    return net[s], -net[t]


def switch_flow(g: SignedGraph, f: FlowAssignment, v: str) -> FlowAssignment:
    """Flow on ``switch(g, v)``: same values, half-edges at ``v`` reversed."""
    if v not in g.incidence:
        raise GraphError(f"unknown vertex {v!r}")
    orient = dict(f.orientation)
    for e in g.incidence[v]:
        to_u, to_v = orient[e.id]
        if e.u == v:
            to_u = not to_u
        else:
            to_v = not to_v
        orient[e.id] = (to_u, to_v)
    return FlowAssignment(orient, dict(f.value), f.k)


def _connect(graphs: Sequence[SignedGraph], mode: str) -> SignedGraph:
    if len(graphs) < 2:
        raise GraphError("need at least two graphs")
    ids = [e.id for g in graphs for e in g.edges]
    if len(ids) != len(set(ids)):
        raise GraphError("graphs must have disjoint edge ids")
    verts: dict[str, None] = {}
    edges: list[Edge] = []
    ends: list[tuple[str, str]] = []
    for i, g in enumerate(graphs):
        if g.terminals is None:
            raise GraphError("only two-terminal graphs can be connected")
        s, t = g.terminals
        if mode == "series":
            src = ends[-1][1] if ends else f"p{i}.{s}"
            ren = {s: src, t: f"p{i}.{t}"}
        else:
            ren = {s: ends[0][0], t: ends[0][1]} if ends else {s: f"p{i}.{s}", t: f"p{i}.{t}"}
        for v in g.vertices:
            ren.setdefault(v, f"p{i}.{v}")
            verts.setdefault(ren[v])
        edges.extend(Edge(e.id, ren[e.u], ren[e.v], e.sign) for e in g.edges)
        ends.append((ren[s], ren[t]))
    terms = (ends[0][0], ends[-1][1])
    return SignedGraph(tuple(verts), tuple(edges), terms)


def series_connection(*graphs: SignedGraph) -> SignedGraph:
    """Identify the target of each graph with the source of the next."""
    return _connect(graphs, "series")


def parallel_connection(*graphs: SignedGraph) -> SignedGraph:
    """Identify all sources and all targets."""
    return _connect(graphs, "parallel")


def valid_vertex_id(token: str) -> bool:
    return bool(_TOKEN.match(token))
