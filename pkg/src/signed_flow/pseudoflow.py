"""Pseudoflows on digons, strings and necklaces.

A pseudoflow relaxes conservation at the two terminals.  All constructions
here work with *canonical values* (see :mod:`signed_flow.graph`) keyed by
edge id, and return a :class:`FlowAssignment` on ``compile(term)``.

Boundary pairs ``(a, b)`` live in ``I5 = {-5, ..., 5}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .graph import (
    FlowAssignment,
    GraphError,
    SignedGraph,
    boundary,
    canonical_flow,
    series_connection,
    verify_flow,
)
from .sp import (
    NecklaceProfile,
    SpTerm,
    StringProfile,
    compile,
    digon,
    label_leaves,
    layout,
    mirror,
    recognize_necklace,
    recognize_string,
)

__all__ = [
    "I5",
    "PseudoflowError",
    "NECKLACE_TABLE",
    "check_table",
    "digon_values",
    "digon_pseudoflow",
    "string_conditions",
    "string_sequence",
    "SequencePlan",
    "string_pseudoflow",
    "necklace_split",
    "necklace_pseudoflow",
    "pseudoflow_sum",
    "series_compose",
    "valid_pair",
]

I5 = range(-5, 6)


class PseudoflowError(ValueError):
    """Precondition violated (as opposed to a pair that is merely infeasible)."""


def _in_i5(*xs: int) -> bool:
    return all(-5 <= x <= 5 for x in xs)


# ---------------------------------------------------------------- digon


def digon_values(a: int, b: int) -> tuple[int, int] | None:
    """``(x, y)``: positive edge s->t value, extroverted negative edge value."""
    if (a - b) % 2 or a == b or a == -b or not _in_i5(a, b):
        return None
    return (a + b) // 2, (a - b) // 2


def digon_pseudoflow(a: int, b: int, term: SpTerm | None = None) -> FlowAssignment | None:
    """(a, b)-pseudoflow on ``D`` (or on the given digon term)."""
    t = term if term is not None else digon()
    vals = digon_values(a, b)
    if vals is None:
        return None
    lay = layout(t)
    out = {p.id: (vals[0] if p.sign > 0 else vals[1]) for p in lay.leaves}
    return canonical_flow(lay.graph(), out)


# ---------------------------------------------------------------- strings


def valid_pair(a: int, b: int, deg_s: int, deg_t: int) -> bool:
    return (a != 0 or deg_s >= 2) and (b != 0 or deg_t >= 2)


def string_conditions(beta: int, a: int, b: int) -> tuple[str, ...]:
    """Which of the conditions (a), (b), (c) hold."""
    out = []
    if beta % 2 == 1 and a != b and a != -b:
        out.append("a")
    if beta % 2 == 0 and (a == b or a == -b):
        out.append("b")
    if beta >= 2 and (a % 2 == 1 or a == 0 or b == 0):
        out.append("c")
    return tuple(out)


@dataclass(frozen=True)
class SequencePlan:
    values: tuple[int, ...]
    case: str  # "a", "b", "c" or "search"
    repaired: bool = False


def _sequence_ok(seq: Sequence[int]) -> bool:
    if not seq or not _in_i5(*seq):
        return False
    if len({x % 2 for x in seq}) != 1:
        return False
    if any(x == y or x == -y for x, y in zip(seq, seq[1:])):
        return False
    return all(x != 0 for x in seq[1:-1])


def _alternate(x: int, y: int, length: int) -> list[int]:
    return [x if i % 2 == 0 else y for i in range(length)]


def _other_odds(*avoid: int) -> list[int]:
    return [d for d in (1, 3, 5) if d not in {abs(v) for v in avoid}]


def _other_evens(*avoid: int) -> list[int]:
    return [d for d in (2, 4) if d not in {abs(v) for v in avoid}]


def _interior_pair(n_inner: int, first: Sequence[int], last_avoid: int) -> list[int]:
    # alternate two distinct magnitudes so that the final one avoids +-last_avoid
    x, y = first
    seq = _alternate(x, y, n_inner)
    if seq and abs(seq[-1]) == abs(last_avoid):
        seq = _alternate(y, x, n_inner)
    return seq


def _recipe(case: str, n: int, a: int, b: int) -> tuple[list[int], list[int] | None]:
    """Proof recipe for one case and, when it is defective here, a repair."""
    m = n + 1
    if case in ("a", "b"):
        plain = _alternate(a, b, m)
        if _sequence_ok(plain) and plain[-1] == b:
            return plain, None
        if case == "a":
            return plain, None  # interior zero: leave it to case (c)
        # a = +-b: alternate a with a third value, finish with b
        if a == 0:
            inner = _interior_pair(n - 1, (2, 4), b)
        else:
            (d, *_) = (_other_odds if a % 2 else _other_evens)(a)
            inner = [d if i % 2 == 0 else a for i in range(n - 1)]
        return plain, [a, *inner, b]
    # case (c)
    if b == 0 and a != 0:
        plain, fix = _recipe("c", n, b, a)
        return plain[::-1], (fix[::-1] if fix else None)
    if a % 2:
        ds = _other_odds(a, b)
        d = ds[0]
        if n % 2:
            plain = _alternate(a, b, m)
        else:
            plain = [a, d, *_alternate(b, a, m)][:m]
        if _sequence_ok(plain) and plain[-1] == b:
            return plain, None
        inner = _interior_pair(n - 1, tuple(_other_odds(a))[:2], b)
        return plain, [a, *inner, b]
    # a == 0
    ds = _other_evens(b) or [2]
    d = ds[0]
    plain = _alternate(0, b, m) if n % 2 else [0, d, *_alternate(b, 0, m)][:m]
    if _sequence_ok(plain) and plain[-1] == b:
        return plain, None
    inner = _interior_pair(n - 1, (2, 4), b)
    return plain, [0, *inner, b]


def _search(n: int, a: int, b: int) -> list[int] | None:
    pool = [x for x in I5 if x % 2 == a % 2 and x != 0]

    def go(seq: list[int]) -> list[int] | None:
        if len(seq) == n:
            last = seq[-1]
            return seq + [b] if last not in (b, -b) else None
        for x in pool:
            if x != seq[-1] and x != -seq[-1]:
                r = go(seq + [x])
                if r:
                    return r
        return None

    if (a - b) % 2:
        return None
    if n == 1:
        return [a, b] if a not in (b, -b) else None
    return go([a])


def string_sequence(n: int, a: int, b: int, search: bool = False) -> SequencePlan | None:
    """Values ``c_1..c_{n+1}`` with ``c_1 = a``, ``c_{n+1} = b`` (see module doc).

    Cases are tried in the order (a), (b), (c).  A recipe that does not
    produce a valid sequence for this input is replaced by its repaired
    form.  With ``search`` a backtracking search is the last resort.
    """
    if n < 1:
        raise PseudoflowError("a sequence needs at least one digon")
    for case in string_conditions(n, a, b):
        plain, fix = _recipe(case, n, a, b)
        if _sequence_ok(plain) and plain[0] == a and plain[-1] == b:
            return SequencePlan(tuple(plain), case)
        if fix is not None and _sequence_ok(fix) and fix[0] == a and fix[-1] == b:
            return SequencePlan(tuple(fix), case, repaired=True)
    if search:
        found = _search(n, a, b)
        if found is not None and _sequence_ok(found):
            return SequencePlan(tuple(found), "search")
    return None


def _string_values(prof: StringProfile, a: int, b: int, search: bool) -> dict[str, int] | None:
    lay = layout(prof.term)
    n = prof.beta
    if n == 0:
        if a != b or a == 0:
            return None
        return {lay.leaves[0].id: a}
    if prof.term.kind != "S":  # a lone digon
        vals = digon_values(a, b)
        if vals is None:
            return None
        return {p.id: (vals[0] if p.sign > 0 else vals[1]) for p in lay.leaves}
    plan = string_sequence(n, a, b, search=search)
    if plan is None:
        return None
    c = plan.values
    out: dict[str, int] = {}
    by_block: dict[int, list] = {}
    for p in lay.leaves:
        by_block.setdefault(p.path[0], []).append(p)
    seen = 0
    for j, blk in enumerate(prof.blocks):
        places = by_block[j]
        if blk.is_leaf:
            out[places[0].id] = c[seen]
        else:
            x, y = digon_values(c[seen], c[seen + 1])  # type: ignore[misc]
            for p in places:
                out[p.id] = x if p.sign > 0 else y
            seen += 1
    return out


def _check_pair(a: int, b: int, deg_s: int, deg_t: int) -> None:
    if (a - b) % 2:
        raise PseudoflowError(f"({a},{b}): a and b must have the same parity")
    if not _in_i5(a, b):
        raise PseudoflowError(f"({a},{b}) is outside I5")
    if not valid_pair(a, b, deg_s, deg_t):
        raise PseudoflowError(f"({a},{b}) is not valid for terminal degrees ({deg_s},{deg_t})")


def _as_string(x: StringProfile | SpTerm) -> StringProfile:
    if isinstance(x, StringProfile):
        return x
    prof = recognize_string(x)
    if prof is None:
        raise PseudoflowError(f"{x} is not a string")
    return prof


def string_pseudoflow(
    profile: StringProfile | SpTerm, a: int, b: int, search: bool = False
) -> FlowAssignment | None:
    """(a, b)-pseudoflow on a string when one of the sufficient conditions holds.

    Trivial strings (``e+`` and ``D``) are accepted too and handled directly.
    Raises :class:`PseudoflowError` for parity, range or validity violations.
    """
    prof = _as_string(profile)
    _check_pair(a, b, prof.deg_s, prof.deg_t)
    if prof.nontrivial and not string_conditions(prof.beta, a, b) and not search:
        return None
    vals = _string_values(prof, a, b, search)
    if vals is None:
        return None
    return canonical_flow(compile(prof.term), vals)


# ---------------------------------------------------------------- necklaces

Pair = tuple[int, int]

# (a, b) -> {type: ((a1, b1), (a2, b2))}; normalized a >= 0, |a| <= |b|.
NECKLACE_TABLE: dict[Pair, dict[str, tuple[Pair, Pair]]] = {
    (0, 2): {"I": ((1, 5), (-1, -3)), "II": ((1, 3), (-1, -1))},
    (0, 4): {"I": ((3, 5), (-3, -1)), "II": ((1, 5), (-1, -1))},
    (2, 4): {"I": ((-1, 5), (3, -1)), "II": ((1, 3), (1, 1))},
    (2, -4): {"I": ((-1, -5), (3, 1)), "II": ((1, -5), (1, 1))},
    (1, 3): {"I": ((3, -1), (-2, 4)), "II": ((3, 5), (-2, -2))},
    (1, -3): {"I": ((3, 1), (-2, -4)), "II": ((3, -1), (-2, -2))},
    (1, 5): {"I": ((3, 1), (-2, 4)), "II": ((-1, 3), (2, 2))},
    (1, -5): {"I": ((3, -1), (-2, -4)), "II": ((5, -1), (-4, -4))},
    (3, 5): {"I": ((5, 1), (-2, 4)), "II": ((1, 3), (2, 2))},
    (3, -5): {"I": ((5, -1), (-2, -4)), "II": ((5, -3), (-2, -2))},
}


def first_condition(a1: int, b1: int) -> bool:
    return a1 % 2 == 1 and b1 % 2 == 1 and a1 != b1 and a1 != -b1


def second_condition(kind: str, a2: int, b2: int) -> bool:
    if kind == "I":
        return a2 != b2 and a2 != -b2
    return a2 == b2 or a2 == -b2


def check_table(table: Mapping[Pair, Mapping[str, tuple[Pair, Pair]]] = NECKLACE_TABLE) -> list[str]:
    """Problems found in the table (empty when it is sound)."""
    problems = []
    for (a, b), row in table.items():
        for kind in ("I", "II"):
            (a1, b1), (a2, b2) = row[kind]
            if not _in_i5(a, b, a1, b1, a2, b2):
                problems.append(f"({a},{b}) {kind}: value outside I5")
            if (a1 + a2, b1 + b2) != (a, b):
                problems.append(f"({a},{b}) {kind}: components do not sum")
            if not first_condition(a1, b1):
                problems.append(f"({a},{b}) {kind}: first component fails condition (1)")
            if not second_condition(kind, a2, b2):
                problems.append(f"({a},{b}) {kind}: second component fails condition (2)")
            if a2 == 0 or b2 == 0:
                problems.append(f"({a},{b}) {kind}: zero end on the second string")
    return problems


_TABLE_PROBLEMS = check_table()
if _TABLE_PROBLEMS:
    raise RuntimeError("necklace table is inconsistent: " + "; ".join(_TABLE_PROBLEMS))


def necklace_split(profile: NecklaceProfile, a: int, b: int) -> tuple[Pair, Pair] | None:
    """Component pairs for G1, G2 when ``(a, b)`` is already normalized, or (0, 0)."""
    if a == 0 and b == 0:
        if profile.beta < 2:
            return None
        if profile.g2.beta == 0:
            return (1, 1), (-1, -1)
        return (1, 3), (-1, -3)
    return NECKLACE_TABLE[(a, b)][profile.type]


def _as_necklace(x: NecklaceProfile | SpTerm) -> NecklaceProfile:
    if isinstance(x, NecklaceProfile):
        return x
    prof = recognize_necklace(x)
    if prof is None:
        raise PseudoflowError(f"{x} is not a necklace")
    return prof


def _necklace_values(term: SpTerm, a: int, b: int) -> dict[str, int] | None:
    if abs(a) > abs(b):
        # solve (-b, -a) on the mirror image; positive leaves flip sign back
        mt = mirror(term)
        sub = _necklace_values(mt, -b, -a)
        if sub is None:
            return None
        signs = {x.label: x.sign for x in term.leaves()}
        return {e: (-v if signs[e] > 0 else v) for e, v in sub.items()}
    if a < 0 or (a == 0 and b < 0):
        sub = _necklace_values(term, -a, -b)
        return None if sub is None else {e: -v for e, v in sub.items()}
    prof = recognize_necklace(term)
    if prof is None:  # pragma: no cover - recognizer is closed under the transforms
        raise PseudoflowError(f"{term} is not a necklace")
    if a != 0 and (a == b or a == -b):
        return None
    split = necklace_split(prof, a, b)
    if split is None:
        return None
    (a1, b1), (a2, b2) = split
    v1 = _string_values(prof.g1, a1, b1, search=False)
    v2 = _string_values(prof.g2, a2, b2, search=False)
    if v1 is None or v2 is None:
        raise RuntimeError(f"necklace split ({a1},{b1})+({a2},{b2}) not realizable on {term}")
    return {**v1, **v2}


def necklace_pseudoflow(profile: NecklaceProfile | SpTerm, a: int, b: int) -> FlowAssignment | None:
    """(a, b)-pseudoflow on a necklace when ``a != +-b`` or ``a = b = 0`` with beta >= 2."""
    prof = _as_necklace(profile)
    if (a - b) % 2:
        raise PseudoflowError(f"({a},{b}): a and b must have the same parity")
    if not _in_i5(a, b):
        raise PseudoflowError(f"({a},{b}) is outside I5")
    term = label_leaves(prof.term)
    vals = _necklace_values(term, a, b)
    if vals is None:
        return None
    g = compile(term)
    f = canonical_flow(g, vals)
    rep = verify_flow(g, f, treat_terminals_as_free=True)
    if not rep or rep.boundary != (a, b):
        raise RuntimeError(f"necklace construction failed on {prof.term} for ({a},{b})")
    return f


# ---------------------------------------------------------------- composition


def pseudoflow_sum(f1: FlowAssignment, f2: FlowAssignment) -> FlowAssignment:
    overlap = f1.edge_ids & f2.edge_ids
    if overlap:
        raise GraphError(f"overlapping edge ids: {sorted(overlap)}")
    return FlowAssignment(
        {**f1.orientation, **f2.orientation},
        {**f1.value, **f2.value},
        max(f1.k, f2.k),
    )


def series_compose(
    parts: Sequence[tuple[SignedGraph, FlowAssignment]],
) -> tuple[SignedGraph, FlowAssignment]:
    """Series connection of pseudoflow-carrying pieces; boundaries must chain."""
    if not parts:
        raise GraphError("nothing to compose")
    bounds = [boundary(g, f) for g, f in parts]
    for i, ((_, b), (a, _)) in enumerate(zip(bounds, bounds[1:])):
        if b != a:
            raise GraphError(f"boundary mismatch at junction {i}: inflow {b} vs outflow {a}")
    if len(parts) == 1:
        return parts[0]
    g = series_connection(*(p[0] for p in parts))
    f = parts[0][1]
    for _, fi in parts[1:]:
        f = pseudoflow_sum(f, fi)
    return g, f
