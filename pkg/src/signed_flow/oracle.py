"""Exhaustive ground truth for nowhere-zero flows on small signed graphs.

Nothing here depends on series-parallel structure.  The main search
assigns signed values under the canonical orientation, edge by edge in an
order that closes vertices early; the last edge at a vertex has its value
forced by conservation.  Failed frontier states are memoized.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import product
from typing import Iterable

from .graph import FlowAssignment, SignedGraph, canonical_flow, verify_flow

__all__ = [
    "OracleLimitError",
    "OracleResult",
    "default_limit",
    "oracle_flow",
    "oracle_flow_number",
    "brute_flow_exists",
    "brute_boundary_pairs",
    "digon_grid_pairs",
]

DEFAULT_LIMIT = 14


class OracleLimitError(ValueError):
    pass


def default_limit() -> int:
    raw = os.environ.get("SIGNED_FLOW_MAX_EDGES")
    return int(raw) if raw else DEFAULT_LIMIT


@dataclass(frozen=True)
class OracleResult:
    k: int
    found: bool
    witness: FlowAssignment | None
    nodes: int


def _edge_order(g: SignedGraph) -> list[int]:
    # grow a vertex sequence by always taking the vertex with most edges
    # back into the visited set, then order edges by their later endpoint
    verts = list(g.vertices)
    if not verts:
        return []
    pos: dict[str, int] = {}
    inc = g.incidence
    remaining = set(verts)
    while remaining:
        start = max(remaining, key=lambda v: (len(inc[v]), -verts.index(v)))
        frontier = {start}
        while frontier:
            best = max(
                frontier,
                key=lambda v: (sum(1 for e in inc[v] if e.other(v) in pos), -verts.index(v)),
            )
            frontier.discard(best)
            pos[best] = len(pos)
            remaining.discard(best)
            for e in inc[best]:
                w = e.other(best)
                if w not in pos:
                    frontier.add(w)
    idx = {e.id: i for i, e in enumerate(g.edges)}
    return sorted(
        range(len(g.edges)),
        key=lambda i: (max(pos[g.edges[i].u], pos[g.edges[i].v]), min(pos[g.edges[i].u], pos[g.edges[i].v]), idx[g.edges[i].id]),
    )


def oracle_flow(g: SignedGraph, k: int, limit: int | None = None) -> OracleResult:
    """Search for a nowhere-zero ``k``-flow (terminals conserve too)."""
    if k < 2:
        raise ValueError("k must be at least 2")
    limit = default_limit() if limit is None else limit
    m = len(g.edges)
    if m > limit:
        raise OracleLimitError(f"{m} edges exceed the oracle limit {limit}")
    if m == 0:
        return OracleResult(k, True, canonical_flow(g, {}, k), 0)

    if any(len(es) == 1 for es in g.incidence.values()):
        # the lone edge at a degree-1 vertex would have to carry 0
        return OracleResult(k, False, None, 0)

    order = _edge_order(g)
    vid = {v: i for i, v in enumerate(g.vertices)}
    us = [vid[g.edges[i].u] for i in order]
    vs = [vid[g.edges[i].v] for i in order]
    # coefficient of the canonical value in the contribution at v
    cv = [(-1 if g.edges[i].sign > 0 else 1) for i in order]
    nv = len(vid)
    remaining = [0] * nv
    for a, b in zip(us, vs):
        remaining[a] += 1
        remaining[b] += 1
    # frontier vertices before step j: touched earlier, still open
    frontier: list[tuple[int, ...]] = []
    touched: set[int] = set()
    left = remaining[:]
    for j in range(m):
        frontier.append(tuple(sorted(w for w in touched if left[w] > 0)))
        for w in (us[j], vs[j]):
            touched.add(w)
            left[w] -= 1

    bound = k - 1
    values = [0] * m
    part = [0] * nv
    rem = remaining[:]
    failed: set[tuple] = set()
    nodes = 0
    free_vals = [x for y in range(1, bound + 1) for x in (y, -y)]
    # negating a flow gives a flow, so the first free edge may stay positive
    first_vals = list(range(1, bound + 1))
    getters = [(lambda fr: (lambda: tuple([part[w] for w in fr])))(fr) for fr in frontier]

    def go(j: int) -> bool:
        nonlocal nodes
        if j == m:
            return True
        key = (j, getters[j]())
        if key in failed:
            return False
        nodes += 1
        u, v, c = us[j], vs[j], cv[j]
        rem[u] -= 1
        rem[v] -= 1
        ru, rv = rem[u], rem[v]
        pu, pv = part[u], part[v]
        if ru == 0:
            cands: Iterable[int] = (-pu,)
        elif rv == 0:
            cands = (-pv * c,)
        else:
            cands = first_vals if j == 0 else free_vals
        lim_u, lim_v = bound * ru, bound * rv
        ok = False
        for x in cands:
            if x == 0 or x > bound or x < -bound:
                continue
            nu = pu + x
            nw = pv + c * x
            if nu > lim_u or -nu > lim_u or nw > lim_v or -nw > lim_v:
                continue
            if (ru == 1 and nu == 0) or (rv == 1 and nw == 0):
                continue
            part[u] = nu
            part[v] = nw
            values[j] = x
            ok = go(j + 1)
            part[u] = pu
            part[v] = pv
            if ok:
                break
        rem[u] = ru + 1
        rem[v] = rv + 1
        if not ok:
            failed.add(key)
        return ok

    found = go(0)
    witness = None
    if found:
        vals = {g.edges[order[j]].id: values[j] for j in range(m)}
        witness = canonical_flow(g, vals, k)
        if not verify_flow(g, witness):  # pragma: no cover - internal consistency
            raise RuntimeError("oracle produced an invalid flow")
    return OracleResult(k, found, witness, nodes)


def oracle_flow_number(g: SignedGraph, k_max: int = 8, limit: int | None = None) -> float | int:
    """Least ``k <= k_max`` admitting a nowhere-zero k-flow, else ``math.inf``."""
    for k in range(2, k_max + 1):
        if oracle_flow(g, k, limit).found:
            return k
    return math.inf


_POS_ORIENT = ((False, True), (True, False))
_NEG_ORIENT = ((False, False), (True, True))


def brute_flow_exists(g: SignedGraph, k: int, max_edges: int = 5) -> bool:
    """Every legal orientation times every positive value in ``1..k-1``."""
    if len(g.edges) > max_edges:
        raise OracleLimitError(f"brute force is limited to {max_edges} edges")
    choices = []
    for e in g.edges:
        orients = _POS_ORIENT if e.sign > 0 else _NEG_ORIENT
        choices.append([(o, x) for o in orients for x in range(1, k)])
    ids = [e.id for e in g.edges]
    for combo in product(*choices):
        f = FlowAssignment(
            {eid: c[0] for eid, c in zip(ids, combo)},
            {eid: c[1] for eid, c in zip(ids, combo)},
            k,
        )
        if verify_flow(g, f):
            return True
    return False


def brute_boundary_pairs(g: SignedGraph, k: int) -> set[tuple[int, int]]:
    """All ``(a, b)`` realized by nowhere-zero k-valuations conserving off the terminals."""
    if g.terminals is None:
        raise ValueError("graph needs terminals")
    s, t = g.terminals
    vid = {v: i for i, v in enumerate(g.vertices)}
    si, ti = vid[s], vid[t]
    # process edges in order, keep the set of reachable net-outflow vectors
    states: set[tuple[int, ...]] = {tuple([0] * len(vid))}
    open_count = [g.degree(v) for v in g.vertices]
    vals = [x for y in range(1, k) for x in (y, -y)]
    for e in g.edges:
        u, v = vid[e.u], vid[e.v]
        c = -1 if e.sign > 0 else 1
        open_count[u] -= 1
        open_count[v] -= 1
        nxt = set()
        for st in states:
            for x in vals:
                lst = list(st)
                lst[u] += x
                lst[v] += c * x
                dead = False
                for w in (u, v):
                    if w not in (si, ti) and open_count[w] == 0 and lst[w] != 0:
                        dead = True
                if not dead:
                    nxt.add(tuple(lst))
        states = nxt
    return {(st[si], -st[ti]) for st in states}


def digon_grid_pairs(bound: int = 5) -> set[tuple[int, int]]:
    """Boundary pairs of the unbalanced digon over the full signed value grid."""
    vals = [x for x in range(-bound, bound + 1) if x != 0]
    out = set()
    for x, y in product(vals, vals):
        # positive edge s->t with value x, negative edge extroverted with value y
        out.add((x + y, x - y))
    return out
