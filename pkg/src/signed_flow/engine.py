"""Nowhere-zero flows on signed series-parallel terms.

Two strategies:

* ``dp_flow``: exact dynamic programming over the term.  Every node gets
  the set of boundary pairs ``(a, b)`` its edges can realize, with links
  for reconstruction.
* ``constructive_flow``: reduce the term, then either solve a string or
  necklace directly, or replace a necklace piece by a small gadget,
  recurse, and fill the piece back in with a matching pseudoflow.  Any
  step whose hypotheses fail falls back to the DP and is reported.

Internally flows are dicts of canonical values keyed by leaf label; the
frame of a leaf is its own source-to-target direction in the term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import count
from typing import Iterable, Mapping

from .admissibility import admissible_fast
from .graph import FlowAssignment, SignedGraph, canonical_flow, canonical_values, verify_flow
from .pseudoflow import PseudoflowError, necklace_pseudoflow, string_pseudoflow
from .sp import (
    NEG,
    PARALLEL,
    POS,
    SERIES,
    PieceRef,
    SpTerm,
    compile,
    digon,
    iter_paths,
    is_reduced,
    label_leaves,
    layout,
    leaf,
    necklace_candidates,
    normalize_to_string,
    parallel,
    pos,
    replace_piece,
    resolve,
    series,
    subterm,
)

__all__ = [
    "BoundaryPairSet",
    "dp_pairs",
    "dp_flow",
    "ReductionStep",
    "ReductionTrace",
    "NotAdmissibleError",
    "reduce",
    "lift",
    "ConstructiveResult",
    "constructive_flow",
    "flow_number_sp",
]

Values = dict[str, int]
Pair = tuple[int, int]


class NotAdmissibleError(ValueError):
    pass


# ---------------------------------------------------------------- dynamic programming


@dataclass
class BoundaryPairSet:
    """Per-node achievable boundary pairs with reconstruction links."""

    term: SpTerm
    k: int
    tables: dict[tuple[int, ...], dict[Pair, object]]
    steps: dict[tuple[int, ...], list[dict[Pair, object]]]
    ids: dict[tuple[int, ...], str]

    def pairs(self, path: tuple[int, ...] = ()) -> set[Pair]:
        return set(self.tables[path])

    def __contains__(self, pair: Pair) -> bool:
        return pair in self.tables[()]

    def values(self, pair: Pair) -> Values | None:
        if pair not in self.tables[()]:
            return None
        out: Values = {}
        self._realize((), pair, out)
        return out

    def realize(self, pair: Pair) -> FlowAssignment | None:
        vals = self.values(pair)
        if vals is None:
            return None
        return canonical_flow(compile(self.term), vals, self.k)

    def _realize(self, path: tuple[int, ...], pair: Pair, out: Values) -> None:
        node = subterm(self.term, path)
        if node.is_leaf:
            out[self.ids[path]] = self.tables[path][pair]  # type: ignore[assignment]
            return
        steps = self.steps[path]
        n = len(node.children)
        cur = pair
        for i in range(n - 1, 0, -1):
            prev, child = steps[i][cur]  # type: ignore[misc]
            self._realize(path + (i,), child, out)
            cur = prev
        self._realize(path + (0,), cur, out)


def _degree_map(t: SpTerm) -> tuple[dict[str, int], dict[tuple[int, ...], tuple[str, str]], dict[tuple[int, ...], str]]:
    lay = layout(t)
    deg: dict[str, int] = dict.fromkeys(lay.vertices, 0)
    for p in lay.leaves:
        deg[p.u] += 1
        deg[p.v] += 1
    return deg, lay.terminals, {p.path: p.id for p in lay.leaves}


def _build(t: SpTerm, k: int, closed: bool, context: bool) -> BoundaryPairSet:
    bound = k - 1
    deg, terms, ids = _degree_map(t)
    tables: dict[tuple[int, ...], dict[Pair, object]] = {}
    steps: dict[tuple[int, ...], list[dict[Pair, object]]] = {}

    def caps(path: tuple[int, ...], node: SpTerm) -> tuple[int, int]:
        if path == ():
            if closed:
                return 0, 0
            return bound * node.deg_s, bound * node.deg_t
        s, tt = terms[path]
        if not context:
            return bound * node.deg_s, bound * node.deg_t
        return (
            bound * min(node.deg_s, deg[s] - node.deg_s),
            bound * min(node.deg_t, deg[tt] - node.deg_t),
        )

    def go(path: tuple[int, ...], node: SpTerm) -> dict[Pair, object]:
        cs, ct = caps(path, node)
        if node.is_leaf:
            sg = 1 if node.kind == POS else -1
            tab: dict[Pair, object] = {}
            for y in range(1, bound + 1):
                for c in (y, -y):
                    if abs(c) <= cs and abs(c) <= ct:
                        tab[(c, sg * c)] = c
            tables[path] = tab
            return tab
        kids = [go(path + (i,), c) for i, c in enumerate(node.children)]
        hist: list[dict[Pair, object]] = [dict.fromkeys(kids[0])]
        if node.kind == SERIES:
            acc = {p: None for p in kids[0] if abs(p[0]) <= cs}
            hist[0] = acc
            for i in range(1, len(kids)):
                by_a: dict[int, list[Pair]] = {}
                for p in kids[i]:
                    by_a.setdefault(p[0], []).append(p)
                nxt: dict[Pair, object] = {}
                last = i == len(kids) - 1
                for p in acc:
                    for q in by_a.get(p[1], ()):
                        key = (p[0], q[1])
                        if last and abs(key[1]) > ct:
                            continue
                        if key not in nxt:
                            nxt[key] = (p, q)
                acc = nxt
                hist.append(acc)
        else:
            rem_s = [0] * len(kids)
            rem_t = [0] * len(kids)
            for i in range(len(kids) - 2, -1, -1):
                rem_s[i] = rem_s[i + 1] + node.children[i + 1].deg_s
                rem_t[i] = rem_t[i + 1] + node.children[i + 1].deg_t
            lim_a, lim_b = cs + bound * rem_s[0], ct + bound * rem_t[0]
            acc = {p: None for p in kids[0] if abs(p[0]) <= lim_a and abs(p[1]) <= lim_b}
            hist[0] = acc
            for i in range(1, len(kids)):
                lim_a, lim_b = cs + bound * rem_s[i], ct + bound * rem_t[i]
                nxt = {}
                child = list(kids[i])
                for p in acc:
                    pa, pb = p
                    for q in child:
                        a, b = pa + q[0], pb + q[1]
                        if -lim_a <= a <= lim_a and -lim_b <= b <= lim_b:
                            key = (a, b)
                            if key not in nxt:
                                nxt[key] = (p, q)
                acc = nxt
                hist.append(acc)
        steps[path] = hist
        tables[path] = acc
        return acc

    go((), t)
    return BoundaryPairSet(t, k, tables, steps, ids)


def dp_pairs(t: SpTerm, k: int) -> BoundaryPairSet:
    """Exact boundary pairs of nowhere-zero k-valuations with free terminals."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return _build(t, k, closed=False, context=False)


def _dp_values(t: SpTerm, k: int) -> Values | None:
    table = _build(t, k, closed=True, context=True)
    return table.values((0, 0))


def dp_flow(t: SpTerm, k: int = 6) -> FlowAssignment | None:
    """A nowhere-zero k-flow on ``compile(t)``, or None when none exists."""
    if k < 2:
        raise ValueError("k must be at least 2")
    vals = _dp_values(t, k)
    if vals is None:
        return None
    g = compile(t)
    f = canonical_flow(g, vals, k)
    if not verify_flow(g, f):  # pragma: no cover - internal consistency
        raise RuntimeError(f"dp produced an invalid flow on {t}")
    return f


def flow_number_sp(t: SpTerm, k_max: int = 6) -> float | int:
    """Least k with a nowhere-zero k-flow (``math.inf`` when none up to ``k_max``)."""
    for k in range(2, k_max + 1):
        if _dp_values(t, k) is not None:
            return k
    return math.inf


# ---------------------------------------------------------------- reductions


@dataclass(frozen=True)
class ReductionStep:
    kind: str  # "R1", "R1t", "R2", "R2b", "R3"
    location: str
    before: SpTerm
    after: SpTerm
    removed: tuple[str, ...] = ()  # labels of ``before`` missing from ``after``
    fresh: tuple[str, ...] = ()  # labels of ``after`` missing from ``before``
    subflow: Mapping[str, int] | None = None

    def describe(self) -> str:
        return f"{self.kind} at {self.location}: {self.before} -> {self.after}"


@dataclass
class ReductionTrace:
    original: SpTerm
    steps: list[ReductionStep] = field(default_factory=list)

    @property
    def result(self) -> SpTerm:
        return self.steps[-1].after if self.steps else self.original

    def __len__(self) -> int:
        return len(self.steps)


_fresh_ids = count()


def _fresh(prefix: str = "r") -> str:
    return f"_{prefix}{next(_fresh_ids)}"


def _fill_by_conservation(t: SpTerm, vals: Values, missing: Iterable[str]) -> Values:
    lay = layout(t)
    by_id = lay.leaf_by_id()
    todo = set(missing)
    net: dict[str, int] = dict.fromkeys(lay.vertices, 0)
    unknown: dict[str, set[str]] = {v: set() for v in lay.vertices}
    for p in lay.leaves:
        if p.id in todo:
            unknown[p.u].add(p.id)
            unknown[p.v].add(p.id)
            continue
        x = vals[p.id]
        net[p.u] += x
        net[p.v] += -x if p.sign > 0 else x
    out = dict(vals)
    while todo:
        v = next((w for w in lay.vertices if len(unknown[w]) == 1), None)
        if v is None:
            raise RuntimeError("conservation does not determine the missing values")
        (eid,) = unknown[v]
        p = by_id[eid]
        if v == p.u:
            x = -net[v]
        else:
            x = net[v] if p.sign > 0 else -net[v]
        out[eid] = x
        todo.discard(eid)
        for w in (p.u, p.v):
            unknown[w].discard(eid)
        net[p.u] += x
        net[p.v] += -x if p.sign > 0 else x
    return out


def _split_series_pair(step: ReductionStep, vals: Values) -> Values:
    """Undo a series merge of p then q into r, all oriented from the source side."""
    (r,) = step.fresh
    p_id, q_id = step.removed
    by_id = layout(step.before).leaf_by_id()
    p, q = by_id[p_id], by_id[q_id]
    assert p.v == q.u, "series pair must share its middle vertex"
    out = dict(vals)
    x = out.pop(r)
    # r leaves p.u exactly as p does; q takes over what p delivers to the middle
    out[p_id] = x
    out[q_id] = x if p.sign > 0 else -x
    return out


def _replace_at(t: SpTerm, path: tuple[int, ...], h: SpTerm) -> SpTerm:
    return replace_piece(t, PieceRef(path), h)


def _find_r1(t: SpTerm) -> ReductionStep | None:
    for path, node in iter_paths(t):
        if node.kind != SERIES:
            continue
        kids = node.children
        for i in range(len(kids) - 1):
            p, q = kids[i], kids[i + 1]
            if p.is_leaf and q.is_leaf:
                r = leaf(p.sign * q.sign, _fresh())
                new_kids = [*kids[:i], r, *kids[i + 2 :]]
                new_node = series(*new_kids)
                after = _replace_at(t, path, new_node)
                return ReductionStep(
                    "R1", f"{path}:{i}", t, after, (p.label, q.label), (r.label,)  # type: ignore[arg-type]
                )
    return None


def _find_r1t(t: SpTerm) -> ReductionStep | None:
    """Contract at a terminal of degree two with two distinct neighbours."""
    if t.kind != PARALLEL or len(t.children) != 2:
        return None
    for mirrored in (False, True):
        # handle the target side via source/target swap of the roles
        a, b = t.children
        first = (lambda c: c.children[-1]) if mirrored else (lambda c: c.children[0])
        rest = (lambda c: c.children[:-1]) if mirrored else (lambda c: c.children[1:])

        def starts_with_leaf(c: SpTerm) -> bool:
            return c.is_leaf or (c.kind == SERIES and first(c).is_leaf)

        if not (starts_with_leaf(a) and starts_with_leaf(b)):
            continue
        if a.is_leaf and b.is_leaf:
            continue  # the two edges form a 2-cycle
        if a.is_leaf:
            a, b = b, a
        # a is a series now
        p = first(a)
        a_rest = series(*rest(a))
        if b.is_leaf:
            q = b
            r = leaf(p.sign * q.sign, _fresh())
            # r joins the inner end of p to the far terminal
            after = parallel(a_rest, r)
        else:
            q = first(b)
            b_rest = series(*rest(b))
            r = leaf(p.sign * q.sign, _fresh())
            if mirrored:
                after = parallel(a_rest, series(b_rest, r))
            else:
                after = parallel(a_rest, series(r, b_rest))
        step = ReductionStep(
            "R1t", "target" if mirrored else "source", t, after, (p.label, q.label), (r.label,)  # type: ignore[arg-type]
        )
        return step
    return None


def _find_r2(t: SpTerm, closed: bool) -> ReductionStep | None:
    for path, node in iter_paths(t):
        if node.kind != PARALLEL:
            continue
        for sign in (POS, NEG):
            same = [i for i, c in enumerate(node.children) if c.kind == sign]
            if len(same) < 2:
                continue
            e, f = node.children[same[0]], node.children[same[1]]
            rest = [c for i, c in enumerate(node.children) if i != same[0]]
            after = _replace_at(t, path, parallel(*rest))
            if closed and not admissible_fast(compile(after).closed()):
                # the kept edge may lie in no signed circuit: drop the whole 2-cycle
                if len(node.children) < 3:
                    continue
                rest2 = [c for i, c in enumerate(node.children) if i not in same[:2]]
                after2 = _replace_at(t, path, parallel(*rest2))
                if not admissible_fast(compile(after2).closed()):
                    continue
                return ReductionStep("R2b", str(path), t, after2, (e.label, f.label))  # type: ignore[arg-type]
            return ReductionStep(
                "R2", str(path), t, after, (e.label,), (), {"keep": f.label}  # type: ignore[dict-item]
            )
    return None


def _find_r3(t: SpTerm) -> ReductionStep | None:
    if t.kind != SERIES:
        return None
    n = len(t.children)
    for idx in (0, n - 1):
        part = t.children[idx]
        if compile(part).is_balanced():
            rest = series(*(c for i, c in enumerate(t.children) if i != idx))
            sub = _dp_values(part, 3)
            if sub is None:
                sub = _dp_values(part, 6)
            if sub is None:
                raise NotAdmissibleError("balanced endpart has no flow")
            removed = tuple(x.label for x in part.leaves())  # type: ignore[misc]
            return ReductionStep("R3", "first" if idx == 0 else "last", t, rest, removed, (), sub)
    return None


def reduce(t: SpTerm, closed: bool = True) -> tuple[SpTerm, ReductionTrace]:
    """Apply reductions to a fixpoint.

    With ``closed`` the term is treated as a closed graph: it must be
    flow-admissible, and terminal contractions and balanced-endpart splits
    are allowed.  Otherwise only steps that preserve pseudoflow boundaries
    are used.
    """
    t = label_leaves(t)
    if closed and not admissible_fast(compile(t).closed()):
        raise NotAdmissibleError(f"{t} is not flow-admissible")
    trace = ReductionTrace(t)
    cur = t
    while True:
        step = _find_r1(cur)
        if step is None and closed:
            step = _find_r1t(cur)
        if step is None:
            step = _find_r2(cur, closed)
        if step is None and closed and cur.kind == SERIES:
            step = _find_r3(cur)
        if step is None:
            return cur, trace
        trace.steps.append(step)
        cur = step.after


def _lift_values(trace: ReductionTrace, vals: Values, k: int = 6) -> Values:
    for step in reversed(trace.steps):
        vals = dict(vals)
        if step.kind == "R1":
            vals = _split_series_pair(step, vals)
        elif step.kind == "R1t":
            for lbl in step.fresh:
                vals.pop(lbl)
            vals = _fill_by_conservation(step.before, vals, step.removed)
        elif step.kind == "R2":
            (e,) = step.removed
            f = step.subflow["keep"]  # type: ignore[index]
            xf = vals[f]
            for c in (y for m in range(1, k) for y in (m, -m)):
                if 1 <= abs(xf - c) <= k - 1:
                    vals[e] = c
                    vals[f] = xf - c  # type: ignore[index]
                    break
        elif step.kind == "R2b":
            e, f = step.removed
            vals[e], vals[f] = 1, -1
        elif step.kind == "R3":
            vals.update(step.subflow)  # type: ignore[arg-type]
        else:  # pragma: no cover
            raise ValueError(f"unknown step {step.kind}")
    return vals


def lift(trace: ReductionTrace, f: FlowAssignment) -> FlowAssignment:
    """Carry a flow (or pseudoflow) on the reduced term back to the original."""
    g_red = compile(trace.result)
    if set(f.value) != set(g_red.edge_map):
        raise ValueError("flow does not match the reduced term")
    vals = _lift_values(trace, canonical_values(g_red, f), f.k)
    return canonical_flow(compile(trace.original), vals, f.k)


# ---------------------------------------------------------------- constructive strategy


@dataclass
class ConstructiveResult:
    flow: FlowAssignment | None
    events: list[str] = field(default_factory=list)
    fallbacks: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.flow is not None


@dataclass
class _Ctx:
    events: list[str]
    fallbacks: list[str]
    budget: int


def _unswitch(t: SpTerm, switches: Iterable[str], vals: Values) -> Values:
    """Values in the frame of ``t`` from those of ``t`` switched at ``switches``."""
    lay = layout(t)
    parity: dict[str, int] = {}
    for v in switches:
        parity[v] = parity.get(v, 0) ^ 1
    return {p.id: (-vals[p.id] if parity.get(p.u) else vals[p.id]) for p in lay.leaves}


def _fallback(t: SpTerm, ctx: _Ctx, why: str) -> Values:
    ctx.fallbacks.append(f"{why} [{t}]")
    vals = _dp_values(t, 6)
    if vals is None:
        raise NotAdmissibleError(f"{t} has no nowhere-zero 6-flow")
    return vals


def _values_of(f: FlowAssignment, t: SpTerm) -> Values:
    return canonical_values(compile(t), f)


def _solve(t: SpTerm, ctx: _Ctx) -> Values:
    ctx.budget -= 1
    if ctx.budget < 0:
        return _fallback(t, ctx, "recursion budget exhausted")
    red, trace = reduce(t, closed=True)
    for s in trace.steps:
        ctx.events.append(f"{s.kind} {s.location}")
    vals = _solve_reduced(red, ctx)
    return _lift_values(trace, vals)


def _solve_reduced(r: SpTerm, ctx: _Ctx) -> Values:
    g = compile(r)
    if g.is_balanced():
        ctx.events.append("balanced: 3-flow")
        vals = _dp_values(r, 3)
        return vals if vals is not None else _fallback(r, ctx, "balanced graph without 3-flow")
    if not is_reduced(r):
        return _fallback(r, ctx, "term stays unreduced")
    if r.depth <= 2:
        norm = normalize_to_string(r)
        if not norm:
            return _fallback(r, ctx, f"string normalization failed: {norm.reason}")  # type: ignore[union-attr]
        try:
            f = string_pseudoflow(norm.profile, 0, 0)  # type: ignore[union-attr]
        except PseudoflowError as exc:
            return _fallback(r, ctx, f"string pair rejected: {exc}")
        if f is None:
            return _fallback(r, ctx, "string has no (0,0)-pseudoflow")
        ctx.events.append(f"string {norm.term}")  # type: ignore[union-attr]
        return _unswitch(r, norm.switches, _values_of(f, norm.term))  # type: ignore[union-attr]
    cands = list(necklace_candidates(r))
    whole = [c for c in cands if c.ref == PieceRef(())]
    if whole:
        c = whole[0]
        f = necklace_pseudoflow(c.profile, 0, 0)
        if f is None:
            return _fallback(r, ctx, "necklace has no (0,0)-pseudoflow")
        ctx.events.append(f"necklace {c.term}")
        return _unswitch(r, c.switches, _values_of(f, c.profile.term))
    if not cands:
        return _fallback(r, ctx, "no necklace piece")
    best = min(cands, key=lambda c: c.beta)
    tt, ref = best.term, best.ref
    n_root = len(tt.children) if tt.kind == SERIES else 0
    x, d_pos, d_neg = _fresh(), _fresh(), _fresh()
    if n_root and ref.members is None and ref.path in ((0,), (n_root - 1,)):
        first = ref.path == (0,)
        gadget = series(digon(d_pos, d_neg), pos(x)) if first else series(pos(x), digon(d_pos, d_neg))
        case = "B-first" if first else "B-last"
    else:
        y = _fresh()
        gadget = series(pos(x), digon(d_pos, d_neg), pos(y))
        case = "A"
    g2 = replace_piece(tt, ref, gadget)
    if not admissible_fast(compile(g2).closed()):
        return _fallback(r, ctx, f"case {case} replacement is not flow-admissible")
    ctx.events.append(f"case {case}: replace {resolve(tt, ref)} (beta={best.beta})")
    sub = _solve(g2, ctx)
    a, b = sub[d_pos] + sub[d_neg], sub[d_pos] - sub[d_neg]
    ok = (a - b) % 2 == 0 and a != b and a != -b and -5 <= a <= 5 and -5 <= b <= 5
    if case == "A":
        ok = ok and a != 0 and b != 0
    elif case == "B-first":
        ok = ok and a == 0
    else:
        ok = ok and b == 0
    if not ok:
        return _fallback(r, ctx, f"case {case} gadget boundary ({a},{b}) outside the covered range")
    piece = resolve(tt, ref)
    hf = necklace_pseudoflow(piece, a, b)
    if hf is None:
        return _fallback(r, ctx, f"necklace has no ({a},{b})-pseudoflow")
    ctx.events.append(f"necklace ({a},{b})-pseudoflow on {piece}")
    gadget_labels = {x.label for x in gadget.leaves()}
    merged = {e: v for e, v in sub.items() if e not in gadget_labels}
    merged.update(_values_of(hf, piece))
    vals = _unswitch(r, best.switches, merged)
    f = canonical_flow(g, vals)
    if not verify_flow(g, f):  # pragma: no cover - internal consistency
        raise RuntimeError(f"splice produced an invalid flow on {r}")
    return vals


def constructive_flow(t: SpTerm) -> ConstructiveResult:
    """Proof-following 6-flow construction; ``flow`` is None iff not admissible."""
    t = label_leaves(t)
    g = compile(t)
    if not admissible_fast(g.closed()):
        return ConstructiveResult(None, ["not flow-admissible"], [])
    ctx = _Ctx([], [], budget=4 * t.size + 4)
    vals = _solve(t, ctx)
    f = canonical_flow(g, vals)
    if not verify_flow(g, f):  # pragma: no cover - internal consistency
        raise RuntimeError(f"constructive flow failed to verify on {t}")
    return ConstructiveResult(f, ctx.events, ctx.fallbacks)
