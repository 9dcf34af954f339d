"""Flow-admissibility: every edge must lie in a signed circuit.

A signed circuit is a balanced cycle or a barbell.  Witnesses are found by
exhaustive cycle enumeration, which is fine for the small graphs this
package targets.  ``admissible_fast`` is an independent structural test
(used for speed inside the flow engine and cross-checked in the tests).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .graph import Edge, GraphError, SignedGraph
from .sp import SERIES, SpTerm, compile, layout

__all__ = [
    "SignedCircuit",
    "AdmissibilityReport",
    "enumerate_cycles",
    "circuit_through",
    "is_flow_admissible",
    "admissible_fast",
    "endpart_witnesses",
    "bridges",
    "components",
]


@dataclass(frozen=True)
class SignedCircuit:
    kind: str  # "balanced_cycle" or "barbell"
    cycle: tuple[str, ...] = ()
    c1: tuple[str, ...] = ()
    c2: tuple[str, ...] = ()
    path: tuple[str, ...] = ()  # edges of the connecting path
    joint: str | None = None  # shared vertex when the path is trivial

    @property
    def edges(self) -> frozenset[str]:
        if self.kind == "balanced_cycle":
            return frozenset(self.cycle)
        return frozenset(self.c1) | frozenset(self.c2) | frozenset(self.path)

    def problems(self, g: SignedGraph) -> list[str]:
        """Invariant violations against ``g`` (empty when the witness is sound)."""
        try:
            if self.kind == "balanced_cycle":
                vs = _cycle_vertices(g, self.cycle)
                if vs is None:
                    return ["not a cycle"]
                if _neg(g, self.cycle) % 2:
                    return ["cycle is unbalanced"]
                return []
            if self.kind != "barbell":
                return [f"unknown kind {self.kind}"]
            out = []
            v1 = _cycle_vertices(g, self.c1)
            v2 = _cycle_vertices(g, self.c2)
            if v1 is None or v2 is None:
                return ["a barbell side is not a cycle"]
            if _neg(g, self.c1) % 2 == 0 or _neg(g, self.c2) % 2 == 0:
                out.append("a barbell cycle is balanced")
            if set(self.c1) & set(self.c2):
                out.append("barbell cycles share an edge")
            common = v1 & v2
            if common:
                if len(common) != 1 or self.path or self.joint not in common:
                    out.append("touching cycles must share exactly one vertex and have a trivial path")
            else:
                ends = _path_ends(g, self.path)
                if ends is None:
                    return out + ["connecting path is not a path"]
                x, y, inner = ends
                if not ((x in v1 and y in v2) or (x in v2 and y in v1)):
                    out.append("path does not join the two cycles")
                if inner & (v1 | v2):
                    out.append("path is not internally disjoint from the cycles")
                if set(self.path) & (set(self.c1) | set(self.c2)):
                    out.append("path shares an edge with a cycle")
            return out
        except GraphError as exc:
            return [str(exc)]

    def to_dict(self) -> dict:
        if self.kind == "balanced_cycle":
            return {"kind": self.kind, "cycle": list(self.cycle)}
        return {
            "kind": self.kind,
            "c1": list(self.c1),
            "c2": list(self.c2),
            "path": list(self.path),
            "joint": self.joint,
        }


def _neg(g: SignedGraph, eids: Iterable[str]) -> int:
    return sum(1 for e in eids if g.edge(e).sign < 0)


def _cycle_vertices(g: SignedGraph, eids: Sequence[str]) -> set[str] | None:
    if len(eids) < 2 or len(set(eids)) != len(eids):
        return None
    deg: dict[str, int] = {}
    adj: dict[str, list[str]] = {}
    for eid in eids:
        e = g.edge(eid)
        for a, b in ((e.u, e.v), (e.v, e.u)):
            deg[a] = deg.get(a, 0) + 1
            adj.setdefault(a, []).append(b)
    if any(d != 2 for d in deg.values()):
        return None
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen if len(seen) == len(adj) else None


def _path_ends(g: SignedGraph, eids: Sequence[str]) -> tuple[str, str, set[str]] | None:
    if not eids or len(set(eids)) != len(eids):
        return None
    deg: dict[str, int] = {}
    for eid in eids:
        e = g.edge(eid)
        deg[e.u] = deg.get(e.u, 0) + 1
        deg[e.v] = deg.get(e.v, 0) + 1
    ends = [v for v, d in deg.items() if d == 1]
    if len(ends) != 2 or any(d > 2 for d in deg.values()):
        return None
    if len(deg) != len(eids) + 1:  # a path plus a disjoint cycle
        return None
    return ends[0], ends[1], {v for v, d in deg.items() if d == 2}


@dataclass(frozen=True)
class _Cycle:
    edges: tuple[str, ...]
    vertices: frozenset[str]
    unbalanced: bool


def enumerate_cycles(g: SignedGraph) -> list[_Cycle]:
    """Every simple cycle once (multigraph 2-cycles included)."""
    idx = {e.id: i for i, e in enumerate(g.edges)}
    out: list[_Cycle] = []
    for i, e0 in enumerate(g.edges):
        # paths from e0.v back to e0.u through edges of larger index
        stack: list[tuple[str, list[str], set[str]]] = [(e0.v, [e0.id], {e0.u, e0.v})]
        while stack:
            x, path, seen = stack.pop()
            for e in g.incidence[x]:
                if idx[e.id] <= i:
                    continue
                y = e.other(x)
                if y == e0.u:
                    cyc = path + [e.id]
                    neg = sum(1 for c in cyc if g.edge(c).sign < 0)
                    out.append(_Cycle(tuple(cyc), frozenset(seen), neg % 2 == 1))
                elif y not in seen:
                    stack.append((y, path + [e.id], seen | {y}))
    return out


def _paths_between(
    g: SignedGraph, src: frozenset[str], dst: frozenset[str], banned: frozenset[str]
) -> Iterator[tuple[str, ...]]:
    """Simple paths from ``src`` to ``dst`` internally avoiding both sets."""
    blocked = src | dst
    for start in sorted(src):
        stack: list[tuple[str, tuple[str, ...], frozenset[str]]] = [(start, (), frozenset((start,)))]
        while stack:
            x, path, seen = stack.pop()
            for e in g.incidence[x]:
                if e.id in banned:
                    continue
                y = e.other(x)
                if y in dst:
                    yield path + (e.id,)
                elif y not in blocked and y not in seen:
                    stack.append((y, path + (e.id,), seen | {y}))


def _cover(
    g: SignedGraph,
    targets: set[str],
    cycles: list[_Cycle] | None = None,
    first: Sequence[_Cycle] | None = None,
    second: Sequence[_Cycle] | None = None,
) -> dict[str, SignedCircuit]:
    """Witness circuits for as many ``targets`` as possible."""
    found: dict[str, SignedCircuit] = {}
    todo = set(targets)
    if cycles is None:
        cycles = enumerate_cycles(g)

    def claim(c: SignedCircuit) -> None:
        for eid in c.edges & todo:
            found[eid] = c
        todo.difference_update(c.edges)

    if first is None:
        for c in cycles:
            if not c.unbalanced and todo & set(c.edges):
                claim(SignedCircuit("balanced_cycle", cycle=c.edges))
        if not todo:
            return found
    unb1 = [c for c in (first if first is not None else cycles) if c.unbalanced]
    unb2 = [c for c in (second if second is not None else cycles) if c.unbalanced]
    same = first is None and second is None
    for i, c1 in enumerate(unb1):
        for j, c2 in enumerate(unb2):
            if not todo:
                return found
            if same and j <= i:
                continue
            if set(c1.edges) & set(c2.edges):
                continue
            common = c1.vertices & c2.vertices
            if len(common) == 1:
                if todo & (set(c1.edges) | set(c2.edges)):
                    claim(SignedCircuit("barbell", c1=c1.edges, c2=c2.edges, joint=next(iter(common))))
                continue
            if common:
                continue
            banned = frozenset(c1.edges) | frozenset(c2.edges)
            need_cycles = bool(todo & banned)
            for p in _paths_between(g, c1.vertices, c2.vertices, banned):
                if need_cycles or todo & set(p):
                    claim(SignedCircuit("barbell", c1=c1.edges, c2=c2.edges, path=p))
                    need_cycles = False
                if not todo:
                    return found
    return found


def circuit_through(g: SignedGraph, eid: str) -> SignedCircuit | None:
    g.edge(eid)
    w = _cover(g, {eid}).get(eid)
    if w is not None and w.problems(g):  # pragma: no cover - internal consistency
        raise RuntimeError(f"invalid witness for {eid}: {w.problems(g)}")
    return w


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    witnesses: dict[str, SignedCircuit | None] = field(default_factory=dict)
    uncovered: tuple[str, ...] = ()
    method: str = "search"

    def __bool__(self) -> bool:
        return self.admissible

    def to_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "method": self.method,
            "uncovered": list(self.uncovered),
            "witnesses": {e: (w.to_dict() if w else None) for e, w in self.witnesses.items()},
        }


def is_flow_admissible(g: SignedGraph) -> AdmissibilityReport:
    """Witness search over all edges; admissible iff nothing is left uncovered."""
    ids = [e.id for e in g.edges]
    found = _cover(g, set(ids))
    for w in found.values():
        if w.problems(g):  # pragma: no cover - internal consistency
            raise RuntimeError(f"invalid witness: {w.problems(g)}")
    uncovered = tuple(e for e in ids if e not in found)
    return AdmissibilityReport(not uncovered, {e: found.get(e) for e in ids}, uncovered)


# ---------------------------------------------------------------- structural test


def components(g: SignedGraph, skip: str | None = None) -> list[set[str]]:
    seen: set[str] = set()
    out = []
    for root in g.vertices:
        if root in seen:
            continue
        comp = {root}
        stack = [root]
        while stack:
            x = stack.pop()
            for e in g.incidence[x]:
                if e.id == skip:
                    continue
                y = e.other(x)
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        out.append(comp)
    return out


def bridges(g: SignedGraph) -> list[str]:
    """Edges whose removal disconnects their endpoints (lowpoint search)."""
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    out: list[str] = []
    timer = 0
    for root in g.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack: list[tuple[str, str | None, Iterator[Edge]]] = [(root, None, iter(g.incidence[root]))]
        while stack:
            x, via, it = stack[-1]
            advanced = False
            for e in it:
                if e.id == via:
                    continue
                y = e.other(x)
                if y in disc:
                    low[x] = min(low[x], disc[y])
                else:
                    disc[y] = low[y] = timer
                    timer += 1
                    stack.append((y, e.id, iter(g.incidence[y])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[x])
                    if low[x] > disc[p]:
                        out.append(via)  # type: ignore[arg-type]
    return out


def _balanced_on(g: SignedGraph, verts: set[str], skip: frozenset[str]) -> bool:
    pot: dict[str, int] = {}
    for root in verts:
        if root in pot:
            continue
        pot[root] = 1
        stack = [root]
        while stack:
            x = stack.pop()
            for e in g.incidence[x]:
                if e.id in skip:
                    continue
                y = e.other(x)
                want = pot[x] * e.sign
                if y not in pot:
                    pot[y] = want
                    stack.append(y)
                elif pot[y] != want:
                    return False
    return True


def admissible_fast(g: SignedGraph) -> bool:
    """Structural test, per connected component.

    A component fails when it is unbalanced but one edge deletion balances
    it, or when it has a bridge leaving a balanced side.
    """
    br = set(bridges(g))
    for comp in components(g):
        cedges = [e for e in g.edges if e.u in comp]
        if not _balanced_on(g, comp, frozenset()):
            if any(_balanced_on(g, comp, frozenset((e.id,))) for e in cedges):
                return False
        for e in cedges:
            if e.id in br:
                for side in components(_component_graph(g, comp), skip=e.id):
                    if _balanced_on(g, side, frozenset((e.id,))):
                        return False
    return True


def _component_graph(g: SignedGraph, comp: set[str]) -> SignedGraph:
    return SignedGraph(
        tuple(v for v in g.vertices if v in comp),
        tuple(e for e in g.edges if e.u in comp),
    )


# ---------------------------------------------------------------- series fast path


def endpart_witnesses(t: SpTerm) -> AdmissibilityReport | None:
    """Barbell witnesses for a series term whose two endparts are unbalanced.

    Each barbell takes one unbalanced cycle from the first endpart and one
    from the last, so every edge is covered.  Returns None when the term is
    not of that shape.
    """
    if t.kind != SERIES:
        return None
    g = compile(t)
    lay = layout(t)
    ends = (0, len(t.children) - 1)
    part_edges: dict[int, set[str]] = {i: set() for i in ends}
    for p in lay.leaves:
        if p.path[0] in part_edges:
            part_edges[p.path[0]].add(p.id)
    cycles = enumerate_cycles(g)
    side = [[c for c in cycles if set(c.edges) <= part_edges[i]] for i in ends]
    if not any(c.unbalanced for c in side[0]) or not any(c.unbalanced for c in side[1]):
        return None
    ids = [e.id for e in g.edges]
    found = _cover(g, set(ids), cycles, first=side[0], second=side[1])
    uncovered = tuple(e for e in ids if e not in found)
    if uncovered:  # pragma: no cover - excluded by the structure
        raise RuntimeError(f"endpart witnesses missing for {uncovered}")
    return AdmissibilityReport(True, {e: found[e] for e in ids}, (), method="endparts")
