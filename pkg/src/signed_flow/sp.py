"""Series-parallel expression terms over signed single edges.

Terms are built from ``e+`` and ``e-`` leaves with ``S(...)`` (series) and
``P(...)`` (parallel) nodes.  Constructors keep terms *normalized*: a series
node never has a series child, a parallel node never has a parallel child,
and parallel children are sorted by their printed form.  Series order is
significant (source/target asymmetry); parallel order is not.

Leaves may carry a ``label``.  Labels never take part in equality, hashing or
printing; ``compile`` uses them as edge ids so that flows computed on
transformed terms can be carried back to the original edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import count
from typing import Callable, Iterable, Iterator, Sequence

from .graph import Edge, SignedGraph

__all__ = [
    "POS",
    "NEG",
    "SERIES",
    "PARALLEL",
    "SpTerm",
    "SpSyntaxError",
    "leaf",
    "series",
    "parallel",
    "pos",
    "neg",
    "digon",
    "parse_sp",
    "compile",
    "layout",
    "Layout",
    "depth",
    "mirror",
    "PieceRef",
    "resolve",
    "pieces_of_depth",
    "replace_piece",
    "ReducedReport",
    "is_reduced",
    "StringProfile",
    "recognize_string",
    "NecklaceProfile",
    "recognize_necklace",
    "Unavailable",
    "Normalization",
    "normalize_to_string",
    "NecklacePiece",
    "necklace_candidates",
    "find_necklace_piece",
    "switch_term",
    "label_leaves",
    "leaf_labels",
    "recognize_sp",
    "match_vertices",
]

POS, NEG, SERIES, PARALLEL = "e+", "e-", "S", "P"


class SpSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


@dataclass(frozen=True, eq=False)
class SpTerm:
    kind: str
    children: tuple["SpTerm", ...] = ()
    label: str | None = field(default=None)

    def __post_init__(self) -> None:
        if self.kind in (POS, NEG):
            if self.children:
                raise ValueError("leaves have no children")
        elif self.kind in (SERIES, PARALLEL):
            if len(self.children) < 2:
                raise ValueError(f"{self.kind} node needs at least two children")
            if any(c.kind == self.kind for c in self.children):
                raise ValueError(f"{self.kind} node may not have a {self.kind} child")
        else:
            raise ValueError(f"unknown term kind {self.kind!r}")

    @property
    def is_leaf(self) -> bool:
        return self.kind in (POS, NEG)

    @property
    def sign(self) -> int:
        if self.kind == POS:
            return 1
        if self.kind == NEG:
            return -1
        raise ValueError("only leaves have a sign")

    @cached_property
    def key(self) -> str:
        if self.is_leaf:
            return self.kind
        if (
            self.kind == PARALLEL
            and len(self.children) == 2
            and self.children[0].kind == POS
            and self.children[1].kind == NEG
        ):
            return "D"
        return f"{self.kind}({','.join(c.key for c in self.children)})"

    @cached_property
    def size(self) -> int:
        return 1 if self.is_leaf else sum(c.size for c in self.children)

    @cached_property
    def depth(self) -> int:
        return 0 if self.is_leaf else 1 + max(c.depth for c in self.children)

    @cached_property
    def deg_s(self) -> int:
        if self.is_leaf:
            return 1
        if self.kind == SERIES:
            return self.children[0].deg_s
        return sum(c.deg_s for c in self.children)

    @cached_property
    def deg_t(self) -> int:
        if self.is_leaf:
            return 1
        if self.kind == SERIES:
            return self.children[-1].deg_t
        return sum(c.deg_t for c in self.children)

    @cached_property
    def n_vertices(self) -> int:
        # internal vertices of a series node: one per junction
        def internal(t: SpTerm) -> int:
            if t.is_leaf:
                return 0
            inner = sum(internal(c) for c in t.children)
            return inner + (len(t.children) - 1 if t.kind == SERIES else 0)

        return 2 + internal(self)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SpTerm) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return self.key

    def __repr__(self) -> str:
        return f"SpTerm({self.key!r})"

    def leaves(self) -> Iterator["SpTerm"]:
        if self.is_leaf:
            yield self
        else:
            for c in self.children:
                yield from c.leaves()


def leaf(sign: int, label: str | None = None) -> SpTerm:
    return SpTerm(POS if sign > 0 else NEG, (), label)


def pos(label: str | None = None) -> SpTerm:
    return SpTerm(POS, (), label)


def neg(label: str | None = None) -> SpTerm:
    return SpTerm(NEG, (), label)


def _flatten(kind: str, children: Iterable[SpTerm]) -> list[SpTerm]:
    out: list[SpTerm] = []
    for c in children:
        if c.kind == kind:
            out.extend(c.children)
        else:
            out.append(c)
    return out


def series(*children: SpTerm) -> SpTerm:
    kids = _flatten(SERIES, children)
    if not kids:
        raise ValueError("empty series connection")
    if len(kids) == 1:
        return kids[0]
    return SpTerm(SERIES, tuple(kids))


def parallel(*children: SpTerm) -> SpTerm:
    kids = sorted(_flatten(PARALLEL, children), key=lambda c: c.key)
    if not kids:
        raise ValueError("empty parallel connection")
    if len(kids) == 1:
        return kids[0]
    return SpTerm(PARALLEL, tuple(kids))


def digon(plus: str | None = None, minus: str | None = None) -> SpTerm:
    return parallel(pos(plus), neg(minus))


# ---------------------------------------------------------------- parsing


def parse_sp(text: str) -> SpTerm:
    """Parse the ``e+ | e- | D | S(...) | P(...)`` expression language."""
    src = "".join(text.split())
    pos_ = 0

    def expect(ch: str) -> None:
        nonlocal pos_
        if pos_ >= len(src) or src[pos_] != ch:
            found = src[pos_] if pos_ < len(src) else "end of input"
            raise SpSyntaxError(f"expected {ch!r}, found {found!r}", pos_)
        pos_ += 1

    def term() -> SpTerm:
        nonlocal pos_
        if src.startswith("e+", pos_):
            pos_ += 2
            return pos()
        if src.startswith("e-", pos_):
            pos_ += 2
            return neg()
        if src.startswith("D", pos_):
            pos_ += 1
            return digon()
        if src.startswith(("S(", "P("), pos_):
            kind = src[pos_]
            start = pos_
            pos_ += 2
            kids = [term()]
            while pos_ < len(src) and src[pos_] == ",":
                pos_ += 1
                kids.append(term())
            expect(")")
            if len(kids) < 2:
                raise SpSyntaxError(f"{kind}(...) needs at least two arguments", start)
            return series(*kids) if kind == SERIES else parallel(*kids)
        found = src[pos_] if pos_ < len(src) else "end of input"
        raise SpSyntaxError(f"unexpected {found!r}", pos_)

    if not src:
        raise SpSyntaxError("empty expression", 0)
    t = term()
    if pos_ != len(src):
        raise SpSyntaxError(f"trailing input {src[pos_:]!r}", pos_)
    return t


# ---------------------------------------------------------------- compilation


@dataclass(frozen=True)
class LeafPlace:
    index: int
    id: str
    u: str
    v: str
    sign: int
    path: tuple[int, ...]


@dataclass(frozen=True)
class Layout:
    """Vertex placement of a term: leaves with endpoints, node terminals."""

    leaves: tuple[LeafPlace, ...]
    terminals: dict[tuple[int, ...], tuple[str, str]]
    vertices: tuple[str, ...]

    def graph(self) -> SignedGraph:
        return SignedGraph(
            self.vertices,
            tuple(Edge(p.id, p.u, p.v, p.sign) for p in self.leaves),
            self.terminals[()],
        )

    def leaf_by_id(self) -> dict[str, LeafPlace]:
        return {p.id: p for p in self.leaves}


def layout(t: SpTerm) -> Layout:
    verts = ["v0", "v1"]
    leaves: list[LeafPlace] = []
    terms: dict[tuple[int, ...], tuple[str, str]] = {}
    fresh = count(2)

    def place(node: SpTerm, s: str, tt: str, path: tuple[int, ...]) -> None:
        terms[path] = (s, tt)
        if node.is_leaf:
            i = len(leaves)
            eid = node.label if node.label is not None else f"e{i}"
            leaves.append(LeafPlace(i, eid, s, tt, node.sign, path))
            return
        if node.kind == SERIES:
            n = len(node.children)
            junctions = []
            for _ in range(n - 1):
                vname = f"v{next(fresh)}"
                verts.append(vname)
                junctions.append(vname)
            ends = [s, *junctions, tt]
            for i, c in enumerate(node.children):
                place(c, ends[i], ends[i + 1], path + (i,))
        else:
            for i, c in enumerate(node.children):
                place(c, s, tt, path + (i,))

    place(t, "v0", "v1", ())
    return Layout(tuple(leaves), terms, tuple(verts))


def compile(t: SpTerm) -> SignedGraph:  # noqa: A001 - mirrors the operation name
    """Two-terminal signed graph of ``t``; source ``v0``, target ``v1``."""
    return layout(t).graph()


def depth(t: SpTerm) -> int:
    return t.depth


def mirror(t: SpTerm) -> SpTerm:
    """Swap the roles of source and target."""
    if t.is_leaf:
        return t
    if t.kind == SERIES:
        return series(*(mirror(c) for c in reversed(t.children)))
    return parallel(*(mirror(c) for c in t.children))


def leaf_labels(t: SpTerm) -> list[str | None]:
    return [x.label for x in t.leaves()]


def label_leaves(t: SpTerm, prefix: str = "e", force: bool = False) -> SpTerm:
    """Fill missing labels with ``e{i}`` (leaf index), i.e. ``compile``'s default ids.

    With ``force`` every leaf is relabelled.
    """
    if not force and all(lbl is not None for lbl in leaf_labels(t)):
        return t
    ctr = count()

    def go(node: SpTerm) -> SpTerm:
        if node.is_leaf:
            i = next(ctr)
            lbl = node.label if (node.label is not None and not force) else f"{prefix}{i}"
            return SpTerm(node.kind, (), lbl)
        return SpTerm(node.kind, tuple(go(c) for c in node.children))

    return go(t)


def _rebuild_signs(t: SpTerm, new_sign: Callable[[int, SpTerm], int]) -> SpTerm:
    ctr = count()

    def go(node: SpTerm) -> SpTerm:
        if node.is_leaf:
            return leaf(new_sign(next(ctr), node), node.label)
        kids = [go(c) for c in node.children]
        return series(*kids) if node.kind == SERIES else parallel(*kids)

    return go(t)


def switch_term(t: SpTerm, vertices: Sequence[str]) -> SpTerm:
    """Apply switchings at vertices of ``compile(t)`` and return the new term."""
    lay = layout(t)
    parity: dict[str, int] = {}
    for v in vertices:
        if v not in lay.vertices:
            raise ValueError(f"unknown vertex {v!r}")
        parity[v] = parity.get(v, 0) ^ 1
    flips = [parity.get(p.u, 0) ^ parity.get(p.v, 0) for p in lay.leaves]
    return _rebuild_signs(t, lambda i, node: -node.sign if flips[i] else node.sign)


# ---------------------------------------------------------------- pieces


@dataclass(frozen=True)
class PieceRef:
    """Path of child indices from the root.

    ``members`` optionally selects a subset of the children of a parallel
    node; the piece is then the parallel connection of those children.
    """

    path: tuple[int, ...] = ()
    members: tuple[int, ...] | None = None


def subterm(t: SpTerm, path: Sequence[int]) -> SpTerm:
    node = t
    for i in path:
        if node.is_leaf or not 0 <= i < len(node.children):
            raise ValueError(f"invalid piece path {tuple(path)}")
        node = node.children[i]
    return node


def resolve(t: SpTerm, ref: PieceRef) -> SpTerm:
    node = subterm(t, ref.path)
    if ref.members is None:
        return node
    if node.kind != PARALLEL or len(set(ref.members)) < 2:
        raise ValueError("members must select at least two children of a parallel node")
    if any(not 0 <= i < len(node.children) for i in ref.members):
        raise ValueError("member index out of range")
    return parallel(*(node.children[i] for i in sorted(set(ref.members))))


def iter_paths(t: SpTerm, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], SpTerm]]:
    yield path, t
    for i, c in enumerate(t.children):
        yield from iter_paths(c, path + (i,))


def pieces_of_depth(t: SpTerm, k: int) -> list[PieceRef]:
    if not 0 <= k <= t.depth:
        raise ValueError(f"depth {k} out of range 0..{t.depth}")
    return [PieceRef(p) for p, node in iter_paths(t) if node.depth == k]


def replace_piece(t: SpTerm, ref: PieceRef, h: SpTerm) -> SpTerm:
    """Replace the piece at ``ref`` by ``h`` (terminals identified), renormalized."""
    resolve(t, ref)

    def go(node: SpTerm, rest: tuple[int, ...]) -> SpTerm:
        if not rest:
            if ref.members is None:
                return h
            keep = [c for i, c in enumerate(node.children) if i not in set(ref.members)]
            return parallel(*keep, h)
        i = rest[0]
        kids = list(node.children)
        kids[i] = go(kids[i], rest[1:])
        return series(*kids) if node.kind == SERIES else parallel(*kids)

    return go(t, ref.path)


# ---------------------------------------------------------------- reducedness


@dataclass(frozen=True)
class ReducedReport:
    ok: bool
    witness: tuple[str, ...] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_reduced(t: SpTerm) -> ReducedReport:
    g = compile(t)
    terminals = set(g.terminals or ())
    for v in g.vertices:
        if v not in terminals and g.degree(v) < 3:
            return ReducedReport(False, (v,), f"non-terminal vertex {v} has degree {g.degree(v)}")
    seen: dict[tuple[frozenset[str], int], str] = {}
    for e in g.edges:
        key = (frozenset((e.u, e.v)), e.sign)
        if key in seen:
            return ReducedReport(False, (seen[key], e.id), "parallel edges of the same sign")
        seen[key] = e.id
    return ReducedReport(True)


# ---------------------------------------------------------------- strings / necklaces


def _is_digon_node(t: SpTerm) -> bool:
    return (
        t.kind == PARALLEL
        and len(t.children) == 2
        and {c.kind for c in t.children} == {POS, NEG}
    )


@dataclass(frozen=True)
class StringProfile:
    term: SpTerm
    blocks: tuple[SpTerm, ...]

    @property
    def beta(self) -> int:
        return sum(1 for b in self.blocks if not b.is_leaf)

    @property
    def pattern(self) -> str:
        return "".join("+" if b.is_leaf else "D" for b in self.blocks)

    @property
    def bridges(self) -> tuple[int, ...]:
        """Bridge positions; position ``i`` sits right after the ``i``-th digon."""
        out, seen = [], 0
        for b in self.blocks:
            if b.is_leaf:
                out.append(seen)
            else:
                seen += 1
        return tuple(out)

    @property
    def nontrivial(self) -> bool:
        return len(self.blocks) > 1

    @property
    def deg_s(self) -> int:
        return self.term.deg_s

    @property
    def deg_t(self) -> int:
        return self.term.deg_t


def recognize_string(t: SpTerm) -> StringProfile | None:
    """String profile of ``t`` if it is literally a string (no switching)."""
    if t.kind == POS or _is_digon_node(t):
        return StringProfile(t, (t,))
    if t.kind != SERIES:
        return None
    blocks = t.children
    for b in blocks:
        if not (b.kind == POS or _is_digon_node(b)):
            return None
    for x, y in zip(blocks, blocks[1:]):
        if x.is_leaf and y.is_leaf:
            return None
    return StringProfile(t, tuple(blocks))


@dataclass(frozen=True)
class NecklaceProfile:
    term: SpTerm
    g1: StringProfile
    g2: StringProfile

    @property
    def type(self) -> str:
        return "I" if self.g2.beta % 2 == 1 else "II"

    @property
    def beta(self) -> int:
        return self.g1.beta + self.g2.beta


def _order_strings(a: StringProfile, b: StringProfile) -> tuple[StringProfile, StringProfile]:
    # G2 gets beta == 0 if possible, otherwise odd beta if possible.
    if b.beta == 0:
        return a, b
    if a.beta == 0:
        return b, a
    if b.beta % 2 == 1:
        return a, b
    if a.beta % 2 == 1:
        return b, a
    return a, b


def _string_groups(t: SpTerm) -> tuple[SpTerm, SpTerm] | None:
    """Split the children of a parallel node into two string terms."""
    if t.kind != PARALLEL:
        return None
    kids = t.children
    if len(kids) == 2:
        return kids[0], kids[1]
    if len(kids) == 3:
        big = [c for c in kids if not c.is_leaf]
        small = [c for c in kids if c.is_leaf]
        if len(big) == 1 and sorted(c.kind for c in small) == [POS, NEG]:
            return big[0], parallel(*small)
    return None


def recognize_necklace(t: SpTerm) -> NecklaceProfile | None:
    groups = _string_groups(t)
    if groups is None:
        return None
    a, b = (recognize_string(x) for x in groups)
    if a is None or b is None or not (a.nontrivial or b.nontrivial):
        return None
    g1, g2 = _order_strings(a, b)
    return NecklaceProfile(t, g1, g2)


# ---------------------------------------------------------------- switching to normal forms


@dataclass(frozen=True)
class Unavailable:
    """Falsy 'none' result that says why."""

    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Normalization:
    term: SpTerm
    switches: tuple[str, ...]
    profile: StringProfile


def normalize_to_string(t: SpTerm) -> Normalization | Unavailable:
    """Switch a reduced term of depth <= 2 into a string.

    Switches at the target vertex of every negative single-edge part.
    """
    if t.depth > 2:
        return Unavailable(f"depth {t.depth} > 2")
    rep = is_reduced(t)
    if not rep:
        return Unavailable(f"not reduced: {rep.reason}")
    lay = layout(t)
    if t.is_leaf:
        leaves = [lay.leaves[0]] if t.sign < 0 else []
    elif t.kind == SERIES:
        leaves = [p for p in lay.leaves if len(p.path) == 1 and p.sign < 0]
    else:
        leaves = []
    switches = tuple(p.v for p in leaves)
    new = switch_term(t, switches)
    prof = recognize_string(new)
    if prof is None:
        return Unavailable("switching did not produce a string")
    return Normalization(new, switches, prof)


@dataclass(frozen=True)
class NecklacePiece:
    ref: PieceRef  # resolves in ``term`` (the switched whole term)
    switches: tuple[str, ...]  # vertices of compile(original term)
    term: SpTerm
    profile: NecklaceProfile

    @property
    def beta(self) -> int:
        return self.profile.beta


def _labels_of(t: SpTerm) -> frozenset[str]:
    return frozenset(x.label for x in t.leaves())  # type: ignore[misc]


def _locate(t: SpTerm, groups: list[frozenset[str]]) -> PieceRef | None:
    for path, node in iter_paths(t):
        if node.kind != PARALLEL:
            continue
        idx = {_labels_of(c): i for i, c in enumerate(node.children)}
        if all(g in idx for g in groups):
            members = tuple(sorted(idx[g] for g in groups))
            if len(members) == len(node.children):
                return PieceRef(path)
            return PieceRef(path, members)
    return None


def necklace_candidates(t: SpTerm) -> Iterator[NecklacePiece]:
    """Every piece of a depth-3 parallel node that switches into a necklace.

    A candidate is a parallel connection of a depth-2 part with one other
    part (or with an opposite-signed pair of single edges).  Negative
    single-edge partners are fixed by switching at the source terminal;
    remaining negative bridges by switching at their endvertex inside the
    series part.
    """
    t = label_leaves(t)
    lay = layout(t)
    by_path = {p.path: p for p in lay.leaves}
    if t.depth < 3:
        return
    for path, node in iter_paths(t):
        if node.kind != PARALLEL or node.depth != 3:
            continue
        s, _ = lay.terminals[path]
        kids = node.children
        options: list[tuple[int, ...]] = []
        for i, a in enumerate(kids):
            if a.kind != SERIES or a.depth != 2:
                continue
            for j, b in enumerate(kids):
                if j == i or (b.kind == SERIES and b.depth == 2 and j < i):
                    continue
                options.append((i, j))
            plus = [j for j, b in enumerate(kids) if b.kind == POS]
            minus = [j for j, b in enumerate(kids) if b.kind == NEG]
            if plus and minus:
                options.append((i, plus[0], minus[0]))
        for opt in options:
            switches: list[str] = []
            if len(opt) == 2 and kids[opt[1]].kind == NEG:
                switches.append(s)
            flipped = set(switches)
            for m in opt:
                part = kids[m]
                if part.kind != SERIES:
                    continue
                last = len(part.children) - 1
                for ci, c in enumerate(part.children):
                    if not c.is_leaf:
                        continue
                    p = by_path[path + (m, ci)]
                    sign = p.sign * (-1 if (p.u in flipped) != (p.v in flipped) else 1)
                    if sign < 0:
                        w = p.u if ci == last else p.v
                        switches.append(w)
                        flipped ^= {w}
            new = switch_term(t, switches)
            if len(opt) == 2:
                groups = [_labels_of(kids[m]) for m in opt]
            else:
                groups = [_labels_of(kids[opt[0]]), _labels_of(kids[opt[1]]), _labels_of(kids[opt[2]])]
            ref = _locate(new, groups)
            if ref is None:
                continue
            prof = recognize_necklace(resolve(new, ref))
            if prof is None:
                continue
            yield NecklacePiece(ref, tuple(switches), new, prof)


def find_necklace_piece(t: SpTerm) -> NecklacePiece | Unavailable:
    """Necklace piece of least beta (first in term order on ties)."""
    if t.depth < 3:
        return Unavailable(f"depth {t.depth} < 3")
    rep = is_reduced(t)
    if not rep:
        return Unavailable(f"not reduced: {rep.reason}")
    best: NecklacePiece | None = None
    for cand in necklace_candidates(t):
        if best is None or cand.beta < best.beta:
            best = cand
    if best is None:
        return Unavailable("no depth-3 piece switches into a necklace")
    return best


# ---------------------------------------------------------------- recognition from graphs


def recognize_sp(g: SignedGraph) -> SpTerm | None:
    """Series-parallel term for a two-terminal graph, or None.

    Leaves are labelled with the graph's edge ids.
    """
    if g.terminals is None:
        raise ValueError("recognize_sp needs a two-terminal graph")
    s, t = g.terminals
    if not g.edges:
        return None
    # virtual edges: id -> (x, y, term oriented x -> y)
    virt: dict[int, tuple[str, str, SpTerm]] = {}
    for i, e in enumerate(g.edges):
        virt[i] = (e.u, e.v, leaf(e.sign, e.id))
    fresh = count(len(virt))
    inc: dict[str, set[int]] = {v: set() for v in g.vertices}
    for i, (x, y, _) in virt.items():
        inc[x].add(i)
        inc[y].add(i)
    if any(not ids for v, ids in inc.items()):
        return None

    def oriented(i: int, x: str) -> SpTerm:
        a, b, term = virt[i]
        return term if a == x else mirror(term)

    def remove(i: int) -> None:
        a, b, _ = virt.pop(i)
        inc[a].discard(i)
        inc[b].discard(i)

    def add(x: str, y: str, term: SpTerm) -> None:
        i = next(fresh)
        virt[i] = (x, y, term)
        inc[x].add(i)
        inc[y].add(i)

    changed = True
    while changed and len(virt) > 1:
        changed = False
        groups: dict[frozenset[str], list[int]] = {}
        for i, (x, y, _) in virt.items():
            groups.setdefault(frozenset((x, y)), []).append(i)
        for ends, ids in groups.items():
            if len(ids) < 2:
                continue
            x, y = sorted(ends)
            merged = parallel(*(oriented(i, x) for i in ids))
            for i in ids:
                remove(i)
            add(x, y, merged)
            changed = True
        for w in list(inc):
            if w in (s, t) or len(inc[w]) != 2:
                continue
            i, j = sorted(inc[w])
            xi = virt[i][0] if virt[i][1] == w else virt[i][1]
            xj = virt[j][0] if virt[j][1] == w else virt[j][1]
            if xi == xj:
                continue
            left = mirror(oriented(i, w))  # xi -> w
            right = oriented(j, w)  # w -> xj
            remove(i)
            remove(j)
            add(xi, xj, series(left, right))
            changed = True
            break
    if len(virt) != 1:
        return None
    (i,) = virt
    a, b, _ = virt[i]
    if {a, b} != {s, t}:
        return None
    if any(inc[v] for v in inc if v not in (s, t)):
        return None
    return oriented(i, s)


def match_vertices(compiled: SignedGraph, g: SignedGraph) -> dict[str, str]:
    """Vertex map ``compiled -> g`` for graphs sharing edge ids and terminals."""
    if compiled.terminals is None or g.terminals is None:
        raise ValueError("both graphs need terminals")
    vmap = dict(zip(compiled.terminals, g.terminals))
    pending = list(compiled.edges)
    progress = True
    while pending and progress:
        progress = False
        rest = []
        for e in pending:
            f = g.edge(e.id)
            if e.u in vmap or e.v in vmap:
                if e.u in vmap:
                    other = f.other(vmap[e.u])
                    vmap.setdefault(e.v, other)
                else:
                    other = f.other(vmap[e.v])
                    vmap.setdefault(e.u, other)
                if {vmap[e.u], vmap[e.v]} != {f.u, f.v}:
                    raise ValueError(f"edge {e.id} does not match")
                progress = True
            else:
                rest.append(e)
        pending = rest
    if pending:
        raise ValueError("graphs are not connected consistently")
    return vmap
