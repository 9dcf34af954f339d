import pytest
from hypothesis import given, strategies as st

from helpers import terms
from signed_flow.generators import enumerate_terms, gen_necklace, gen_string
from signed_flow.graph import SignedGraph, switch_many
from signed_flow.sp import (
    PieceRef,
    SpSyntaxError,
    compile,
    depth,
    find_necklace_piece,
    is_reduced,
    label_leaves,
    mirror,
    normalize_to_string,
    parse_sp,
    pieces_of_depth,
    recognize_necklace,
    recognize_sp,
    recognize_string,
    replace_piece,
    resolve,
)


# ---------------------------------------------------------------- parsing


def test_digon_sugar_and_parallel():
    d = parse_sp("P(e+,e-)")
    assert d == parse_sp("D") == parse_sp("P(e-, e+)")
    assert str(d) == "D"


def test_series_is_flattened():
    t = parse_sp("S(e+,S(e+,e+))")
    assert t.kind == "S" and len(t.children) == 3 and all(c.kind == "e+" for c in t.children)


@pytest.mark.parametrize("bad", ["S(e+)", "P(D)", "S(e+,", "X", "e*", "S(e+,e-))", ""])
def test_syntax_errors_carry_position(bad):
    with pytest.raises(SpSyntaxError, match="position"):
        parse_sp(bad)


def test_whitespace_is_ignored():
    assert parse_sp(" S ( e+ , D ) ") == parse_sp("S(e+,D)")


@given(terms())
def test_printer_round_trip_is_idempotent(t):
    once = str(parse_sp(str(t)))
    assert once == str(t) == str(parse_sp(once))


# ---------------------------------------------------------------- compile


def test_compile_single_edge():
    g = compile(parse_sp("e+"))
    assert len(g.vertices) == 2 and [e.sign for e in g.edges] == [1]
    assert g.terminals == ("v0", "v1")


def test_compile_digon():
    g = compile(parse_sp("P(e+,e-)"))
    assert len(g.vertices) == 2 and sorted(e.sign for e in g.edges) == [-1, 1]


def test_compile_d_prime():
    g = compile(parse_sp("S(e+,D,e+)"))
    assert len(g.vertices) == 4 and len(g.edges) == 4


@given(terms())
def test_every_non_terminal_vertex_has_two_distinct_neighbours(t):
    g = compile(t)
    for v in g.vertices:
        if v not in g.terminals:
            assert len(g.neighbours(v)) >= 2


@given(terms())
def test_compiled_edge_count_matches_leaves(t):
    assert len(compile(t).edges) == t.size


# ---------------------------------------------------------------- depth and pieces


@pytest.mark.parametrize("text,d", [("e+", 0), ("e-", 0), ("D", 1), ("P(S(e+,D,e+),e-)", 3)])
def test_depth(text, d):
    assert depth(parse_sp(text)) == d


@given(terms(), st.data())
def test_pieces_of_every_depth_exist(t, data):
    k = data.draw(st.integers(0, t.depth))
    refs = pieces_of_depth(t, k)
    assert refs and all(resolve(t, r).depth == k for r in refs)


@given(terms())
def test_top_and_bottom_pieces(t):
    assert pieces_of_depth(t, t.depth) == [PieceRef(())]
    assert len(pieces_of_depth(t, 0)) == t.size


def test_pieces_of_depth_out_of_range():
    with pytest.raises(ValueError):
        pieces_of_depth(parse_sp("D"), 2)


# ---------------------------------------------------------------- replacement


@given(terms())
def test_replace_root(t):
    h = parse_sp("S(e+,D)")
    assert replace_piece(t, PieceRef(()), h) == h


@given(terms(), st.data())
def test_replace_leaf_by_same_leaf(t, data):
    refs = pieces_of_depth(t, 0)
    r = data.draw(st.sampled_from(refs))
    assert replace_piece(t, r, resolve(t, r)) == t


def test_replace_necklace_piece_changes_edge_count():
    t = parse_sp("S(D,P(S(e+,D),S(D,e+)),D)")
    ref = PieceRef((1,))
    piece = resolve(t, ref)
    out = replace_piece(t, ref, parse_sp("S(e+,D,e+)"))
    assert out.size - t.size == 4 - piece.size == -2  # [DERIVED] leaf count
    assert out == parse_sp("S(D,e+,D,e+,D)")


def test_replace_invalid_ref():
    with pytest.raises(ValueError):
        replace_piece(parse_sp("D"), PieceRef((5,)), parse_sp("e+"))


# ---------------------------------------------------------------- reducedness


def test_reduced_examples():
    assert is_reduced(parse_sp("D"))
    rep = is_reduced(parse_sp("P(e+,e+)"))
    assert not rep and len(rep.witness) == 2
    rep = is_reduced(parse_sp("S(e+,e+)"))
    assert not rep and rep.witness == ("v2",)


def test_only_reduced_depth_one_term_is_the_digon():
    found = [t for t in enumerate_terms(6) if t.depth == 1 and is_reduced(t)]
    assert [str(t) for t in found] == ["D"]


# ---------------------------------------------------------------- strings


def test_digon_is_a_trivial_string():
    p = recognize_string(parse_sp("D"))
    assert p is not None and p.beta == 1 and not p.nontrivial


def test_string_with_bridges():
    p = recognize_string(parse_sp("S(e+,D,D,e+)"))
    assert p.beta == 2 and p.nontrivial and p.bridges == (0, 2)


def test_non_strings():
    assert recognize_string(parse_sp("S(e+,e+)")) is None
    assert recognize_string(parse_sp("S(e-,D)")) is None  # literal, no switching


# ---------------------------------------------------------------- normalization


def test_normalize_negative_edge():
    n = normalize_to_string(parse_sp("e-"))
    assert n and str(n.term) == "e+" and len(n.switches) == 1


def test_normalize_negative_bridges():
    t = parse_sp("S(e-,D,e-)")
    n = normalize_to_string(t)
    assert n and str(n.term) == "S(e+,D,e+)" and len(n.switches) == 2
    assert recognize_string(n.term) is not None


def test_normalize_rejects_deep_terms():
    n = normalize_to_string(parse_sp("P(S(e+,D,e+),e-)"))
    assert not n and "depth" in n.reason


@given(terms(max_edges=8))
def test_normalization_output_is_a_string_and_matches_switching(t):
    n = normalize_to_string(t)
    if not n:
        return
    assert recognize_string(n.term) is not None
    lt = label_leaves(t)
    switched = switch_many(compile(lt), n.switches)
    assert switched.same_as(compile(label_leaves(n.term)))


def test_every_reduced_shallow_term_normalizes():
    for t in enumerate_terms(7):
        if t.depth <= 2 and is_reduced(t):
            assert normalize_to_string(t), t


# ---------------------------------------------------------------- necklaces


def test_necklace_type_two_with_bridge_partner():
    p = recognize_necklace(parse_sp("P(S(e+,D),e+)"))
    assert p.g2.beta == 0 and p.type == "II"


def test_necklace_type_one():
    p = recognize_necklace(parse_sp("P(S(D,D),D)"))
    assert p.g2.beta == 1 and p.type == "I" and p.beta == 3


def test_digon_is_not_a_necklace():
    assert recognize_necklace(parse_sp("P(e+,e-)")) is None


@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_generated_necklaces_round_trip(b1, b2, data):
    from signed_flow.generators import string_patterns

    if b1 + b2 == 0:
        return
    p1 = data.draw(st.sampled_from(list(string_patterns(b1))))
    p2 = data.draw(st.sampled_from(list(string_patterns(b2))))
    try:
        t = gen_necklace((b1, p1), (b2, p2))
    except ValueError:
        assert gen_string(b1, p1).size <= 2 and gen_string(b2, p2).size <= 2
        return
    prof = recognize_necklace(t)
    assert prof.beta == b1 + b2


def test_find_necklace_piece_in_series_context():
    t = parse_sp("S(D,P(S(e+,D),S(D,e+)),D)")
    found = find_necklace_piece(t)
    assert found and found.ref == PieceRef((1,)) and found.beta == 2


def test_find_necklace_piece_after_switching():
    t = parse_sp("S(D,P(S(e-,D,e+),e-),D)")
    found = find_necklace_piece(t)
    assert found
    assert recognize_necklace(resolve(found.term, found.ref)) is not None


def test_find_necklace_piece_rejects_shallow_terms():
    assert not find_necklace_piece(parse_sp("S(D,D)"))


def test_every_reduced_deep_term_has_a_necklace_piece():
    for t in enumerate_terms(7):
        if t.depth >= 3 and is_reduced(t):
            found = find_necklace_piece(t)
            assert found, t
            assert recognize_necklace(resolve(found.term, found.ref)) is not None


# ---------------------------------------------------------------- recognition from graphs


def test_recognize_sp_round_trip_over_corpus(corpus5):
    for t in corpus5:
        g = compile(label_leaves(t))
        back = recognize_sp(g)
        assert back == t, (t, back)


@given(terms(max_edges=9))
def test_recognize_sp_round_trip_random(t):
    assert recognize_sp(compile(label_leaves(t))) == t


def test_recognize_sp_rejects_k4():
    edges = [("a", "b", 1), ("a", "c", -1), ("a", "d", 1), ("b", "c", 1), ("b", "d", -1), ("c", "d", 1)]
    for s, tt in [("a", "b"), ("a", "c"), ("c", "d")]:
        assert recognize_sp(SignedGraph.from_edges(edges, terminals=(s, tt))) is None


def test_recognize_single_edge():
    g = SignedGraph.from_edges([("x", "y", 1)], terminals=("x", "y"))
    assert str(recognize_sp(g)) == "e+"


def test_recognize_respects_terminal_order():
    g = SignedGraph.from_edges([("s", "m", 1), ("m", "t", 1), ("m", "t", -1)], terminals=("s", "t"))
    assert str(recognize_sp(g)) == "S(e+,D)"
    h = SignedGraph(g.vertices, g.edges, ("t", "s"))
    assert recognize_sp(h) == mirror(parse_sp("S(e+,D)"))
