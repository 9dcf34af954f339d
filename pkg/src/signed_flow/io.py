"""Text, JSON and DOT formats for graphs and flows.

Edge-list format, one graph per file::

    # comment
    terminals s t          optional
    u v +                  sign '+' or '-', optional trailing edge id

Edges without an explicit id are named ``e0, e1, ...`` by line order.

Flow format, one edge per line::

    k 6                    optional, default 6
    terminals s t          optional
    free                   optional: terminals may violate conservation
    e0 u->v 3              positive edge, head at v
    e1 u<-v 3              positive edge, head at u
    e2 u<-x->v -1          negative edge, extroverted
    e3 u->x<-v 2           negative edge, introverted

A flow file names both endpoints and implies every sign, so it describes
its graph completely (up to isolated vertices).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Mapping

from .graph import Edge, FlowAssignment, GraphError, SignedGraph, valid_vertex_id

__all__ = [
    "FormatError",
    "parse_edge_list",
    "format_edge_list",
    "parse_flow",
    "format_flow",
    "FlowDocument",
    "graph_to_json",
    "graph_from_json",
    "flow_to_json",
    "flow_from_json",
    "to_dot",
]


class FormatError(ValueError):
    """Malformed input, with 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


def _tokens(raw: str) -> list[tuple[str, int]]:
    body = raw.split("#", 1)[0]
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]


def _vertex(tok: str, line: int, col: int) -> str:
    if not valid_vertex_id(tok):
        raise FormatError(f"invalid vertex id {tok!r}", line, col)
    return tok


# ---------------------------------------------------------------- edge lists


def parse_edge_list(text: str) -> SignedGraph:
    terminals: tuple[str, str] | None = None
    verts: dict[str, None] = {}
    edges: list[Edge] = []
    ids: set[str] = set()
    for n, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        head, col = toks[0]
        if head == "terminals":
            if len(toks) != 3:
                raise FormatError("expected 'terminals s t'", n, col)
            if terminals is not None:
                raise FormatError("terminals given twice", n, col)
            s = _vertex(toks[1][0], n, toks[1][1])
            t = _vertex(toks[2][0], n, toks[2][1])
            if s == t:
                raise FormatError("terminals must be distinct", n, toks[2][1])
            terminals = (s, t)
            verts.setdefault(s)
            verts.setdefault(t)
            continue
        if len(toks) not in (3, 4):
            raise FormatError("expected 'u v sign [id]'", n, col)
        u = _vertex(toks[0][0], n, toks[0][1])
        v = _vertex(toks[1][0], n, toks[1][1])
        sign_tok, sign_col = toks[2]
        if sign_tok not in ("+", "-"):
            raise FormatError(f"sign must be '+' or '-', got {sign_tok!r}", n, sign_col)
        if u == v:
            raise FormatError(f"loop at {u!r} is not allowed", n, toks[1][1])
        eid = toks[3][0] if len(toks) == 4 else f"e{len(edges)}"
        if eid in ids:
            raise FormatError(f"duplicate edge id {eid!r}", n, toks[3][1] if len(toks) == 4 else col)
        ids.add(eid)
        verts.setdefault(u)
        verts.setdefault(v)
        edges.append(Edge(eid, u, v, 1 if sign_tok == "+" else -1))
    if not edges:
        raise FormatError("no edges", max(1, len(text.splitlines())), 1)
    return SignedGraph(tuple(verts), tuple(edges), terminals)


def format_edge_list(g: SignedGraph) -> str:
    lines = []
    if g.terminals is not None:
        lines.append(f"terminals {g.terminals[0]} {g.terminals[1]}")
    for e in g.edges:
        lines.append(f"{e.u} {e.v} {'+' if e.sign > 0 else '-'} {e.id}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- flows


@dataclass(frozen=True)
class FlowDocument:
    graph: SignedGraph
    flow: FlowAssignment
    free: bool = False


# arrow pattern -> (sign, to_left, to_right)
_ARROWS = {
    "->": (1, False, True),
    "<-": (1, True, False),
    "<-x->": (-1, False, False),
    "->x<-": (-1, True, True),
}
_EDGE_RE = re.compile(r"^([A-Za-z0-9_.]+)(<-x->|->x<-|->|<-)([A-Za-z0-9_.]+)$")


def _arrow(e: Edge, to_u: bool, to_v: bool) -> str:
    for arrow, (sign, left, right) in _ARROWS.items():
        if sign == e.sign and (left, right) == (to_u, to_v):
            return f"{e.u}{arrow}{e.v}"
    raise GraphError(f"edge {e.id}: orientation {(to_u, to_v)} is illegal for its sign")


def format_flow(g: SignedGraph, f: FlowAssignment, free: bool = False) -> str:
    lines = [f"k {f.k}"]
    if g.terminals is not None:
        lines.append(f"terminals {g.terminals[0]} {g.terminals[1]}")
    if free:
        lines.append("free")
    for e in g.edges:
        to_u, to_v = f.orientation[e.id]
        lines.append(f"{e.id} {_arrow(e, to_u, to_v)} {f.value[e.id]}")
    return "\n".join(lines) + "\n"


def parse_flow(text: str) -> FlowDocument:
    k = 6
    terminals: tuple[str, str] | None = None
    free = False
    verts: dict[str, None] = {}
    edges: list[Edge] = []
    orient: dict[str, tuple[bool, bool]] = {}
    value: dict[str, int] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        head, col = toks[0]
        if head == "k":
            if len(toks) != 2 or not re.fullmatch(r"\d+", toks[1][0]) or int(toks[1][0]) < 2:
                raise FormatError("expected 'k N' with N >= 2", n, col)
            k = int(toks[1][0])
            continue
        if head == "terminals":
            if len(toks) != 3:
                raise FormatError("expected 'terminals s t'", n, col)
            terminals = (_vertex(toks[1][0], n, toks[1][1]), _vertex(toks[2][0], n, toks[2][1]))
            continue
        if head == "free":
            free = True
            continue
        if len(toks) != 3:
            raise FormatError("expected 'id u->v value'", n, col)
        eid = head
        if eid in value:
            raise FormatError(f"duplicate edge id {eid!r}", n, col)
        m = _EDGE_RE.match(toks[1][0])
        if not m:
            raise FormatError(f"cannot read edge {toks[1][0]!r}", n, toks[1][1])
        u, arrow, v = m.groups()
        if u == v:
            raise FormatError(f"loop at {u!r} is not allowed", n, toks[1][1])
        if not re.fullmatch(r"-?\d+", toks[2][0]):
            raise FormatError(f"value must be an integer, got {toks[2][0]!r}", n, toks[2][1])
        sign, to_u, to_v = _ARROWS[arrow]
        verts.setdefault(u)
        verts.setdefault(v)
        edges.append(Edge(eid, u, v, sign))
        orient[eid] = (to_u, to_v)
        value[eid] = int(toks[2][0])
    if not edges:
        raise FormatError("no edges", max(1, len(text.splitlines())), 1)
    if terminals is not None:
        for x in terminals:
            verts.setdefault(x)
    try:
        g = SignedGraph(tuple(verts), tuple(edges), terminals)
    except GraphError as exc:
        raise FormatError(str(exc), 1, 1) from exc
    return FlowDocument(g, FlowAssignment(orient, value, k), free)


# ---------------------------------------------------------------- JSON


def graph_to_json(g: SignedGraph) -> dict[str, Any]:
    return {
        "vertices": list(g.vertices),
        "terminals": list(g.terminals) if g.terminals else None,
        "edges": [{"id": e.id, "u": e.u, "v": e.v, "sign": e.sign} for e in g.edges],
    }


def graph_from_json(data: Mapping[str, Any]) -> SignedGraph:
    try:
        edges = tuple(Edge(str(d["id"]), str(d["u"]), str(d["v"]), int(d["sign"])) for d in data["edges"])
        terms = data.get("terminals")
        verts = tuple(data.get("vertices") or dict.fromkeys(x for e in edges for x in (e.u, e.v)))
        return SignedGraph(verts, edges, tuple(terms) if terms else None)  # type: ignore[arg-type]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from exc


def flow_to_json(g: SignedGraph, f: FlowAssignment, free: bool = False) -> dict[str, Any]:
    out = graph_to_json(g)
    out["k"] = f.k
    out["free"] = free
    for d in out["edges"]:
        to_u, to_v = f.orientation[d["id"]]
        d.update(to_u=to_u, to_v=to_v, value=f.value[d["id"]])
    return out


def flow_from_json(data: Mapping[str, Any]) -> FlowDocument:
    g = graph_from_json(data)
    try:
        orient = {str(d["id"]): (bool(d["to_u"]), bool(d["to_v"])) for d in data["edges"]}
        value = {str(d["id"]): int(d["value"]) for d in data["edges"]}
        f = FlowAssignment(orient, value, int(data.get("k", 6)))
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed flow JSON: {exc}") from exc
    return FlowDocument(g, f, bool(data.get("free", False)))


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True)


# ---------------------------------------------------------------- DOT


def _q(x: str) -> str:
    return '"' + x.replace('"', '\\"') + '"'


def to_dot(g: SignedGraph, f: FlowAssignment | None = None, name: str = "G") -> str:
    """Undirected DOT; negative edges dashed, flow values as labels."""
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        attrs = ' [shape=doublecircle]' if g.terminals and v in g.terminals else ""
        lines.append(f"  {_q(v)}{attrs};")
    for e in g.edges:
        attrs = []
        if f is not None:
            to_u, to_v = f.orientation[e.id]
            attrs.append(f"label={_q(f'{e.id} {_arrow(e, to_u, to_v)} {f.value[e.id]}')}")
        else:
            attrs.append(f"label={_q(e.id)}")
        if e.sign < 0:
            attrs.append("style=dashed")
        lines.append(f"  {_q(e.u)} -- {_q(e.v)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
