import pytest
from hypothesis import given, strategies as st

from helpers import closed, terms
from signed_flow.graph import (
    Balance,
    FlowAssignment,
    GraphError,
    LoopError,
    SignedGraph,
    boundary,
    canonical_flow,
    cycle_sign,
    series_connection,
    parallel_connection,
    switch,
    switch_flow,
    switch_many,
    verify_flow,
)
from signed_flow.oracle import oracle_flow, oracle_flow_number
from signed_flow.sp import compile, parse_sp


def two_cycle(sign1=1, sign2=1):
    return SignedGraph.from_edges([("a", "b", sign1), ("a", "b", sign2)], terminals=("a", "b"))


def triangle(signs=(1, 1, 1)):
    return SignedGraph.from_edges(
        [("a", "b", signs[0]), ("b", "c", signs[1]), ("c", "a", signs[2])]
    )


# ---------------------------------------------------------------- construction


def test_loops_are_rejected_with_their_own_error():
    with pytest.raises(LoopError):
        SignedGraph.from_edges([("a", "a", 1)])


def test_duplicate_edge_ids_rejected():
    with pytest.raises(GraphError):
        SignedGraph.from_edges([("a", "b", 1), ("b", "c", 1)], ids=["x", "x"])


def test_terminals_must_be_distinct_vertices():
    with pytest.raises(GraphError):
        SignedGraph.from_edges([("a", "b", 1)], terminals=("a", "a"))
    with pytest.raises(GraphError):
        SignedGraph(("a", "b"), (), ("a", "z"))


def test_parallel_edges_allowed():
    g = two_cycle()
    assert len(g.edges) == 2 and g.degree("a") == 2


# ---------------------------------------------------------------- switching


@given(terms(max_edges=6), st.data())
def test_switch_is_an_involution(t, data):
    g = compile(t)
    v = data.draw(st.sampled_from(list(g.vertices)))
    assert switch(switch(g, v), v).same_as(g)


def test_switching_positive_two_cycle_keeps_it_balanced():
    for v in ("a", "b"):
        h = switch(two_cycle(), v)
        assert [e.sign for e in h.edges] == [-1, -1]
        assert h.is_balanced()


def test_unbalanced_two_cycle_keeps_one_negative_edge_under_all_switchings():
    # [DERIVED] all four subsets of {a, b}
    g = two_cycle(1, -1)
    for subset in ([], ["a"], ["b"], ["a", "b"]):
        h = switch_many(g, subset)
        assert sum(e.sign < 0 for e in h.edges) == 1


def test_switch_unknown_vertex():
    with pytest.raises(GraphError):
        switch(two_cycle(), "zz")


# ---------------------------------------------------------------- cycle sign


def test_cycle_sign_examples():
    assert cycle_sign(triangle(), ["e0", "e1", "e2"]) is Balance.BALANCED
    assert cycle_sign(two_cycle(1, -1), ["e0", "e1"]) is Balance.UNBALANCED


def test_cycle_sign_rejects_non_cycles():
    with pytest.raises(GraphError):
        cycle_sign(triangle(), ["e0", "e1"])


@given(st.lists(st.sampled_from([1, -1]), min_size=3, max_size=3), st.lists(st.sampled_from("abc"), max_size=8))
def test_cycle_sign_invariant_under_switching(signs, seq):
    g = triangle(tuple(signs))
    assert cycle_sign(switch_many(g, seq), ["e0", "e1", "e2"]) == cycle_sign(g, ["e0", "e1", "e2"])


# ---------------------------------------------------------------- verification


def test_directed_two_cycle_is_a_2_flow():
    g = two_cycle()
    # e0 a->b, e1 b->a: half-edge at a of e1 points toward a
    f = FlowAssignment({"e0": (False, True), "e1": (True, False)}, {"e0": 1, "e1": 1}, 2)
    rep = verify_flow(g, f)
    assert rep.valid and rep.boundary == (0, 0)


def test_zero_value_is_flagged():
    g = two_cycle()
    f = FlowAssignment({"e0": (False, True), "e1": (True, False)}, {"e0": 0, "e1": 1}, 2)
    rep = verify_flow(g, f)
    assert not rep and any(v.kind == "zero" for v in rep.violations)


def test_out_of_range_and_orientation_flags():
    g = two_cycle(1, -1)
    f = FlowAssignment({"e0": (True, True), "e1": (False, True)}, {"e0": 6, "e1": 1}, 6)
    kinds = {v.kind for v in verify_flow(g, f, treat_terminals_as_free=True).violations}
    assert kinds == {"range", "orientation"}


def test_digon_pseudoflow_2_4():
    # [DERIVED] x = (a+b)/2 = 3 on e+, y = (a-b)/2 = -1 on e- extroverted
    g = compile(parse_sp("D"))
    pos_id = next(e.id for e in g.edges if e.sign > 0)
    neg_id = next(e.id for e in g.edges if e.sign < 0)
    f = canonical_flow(g, {pos_id: 3, neg_id: -1})
    rep = verify_flow(g, f, treat_terminals_as_free=True)
    assert rep.valid and rep.boundary == (2, 4)
    assert not verify_flow(g, f)  # not a flow: terminals do not conserve


def test_verify_requires_matching_edges():
    g = two_cycle()
    f = FlowAssignment({"e0": (False, True)}, {"e0": 1}, 2)
    with pytest.raises(GraphError):
        verify_flow(g, f)


def test_boundary_requires_terminals():
    g = triangle()
    f = canonical_flow(g, {"e0": 1, "e1": 1, "e2": 1})
    with pytest.raises(GraphError):
        boundary(g, f)


@given(terms(max_edges=7))
def test_zero_zero_pseudoflows_are_flows(t):
    g = closed(t)
    r = oracle_flow(g, 6)
    if r.found:
        gt = compile(t)
        rep = verify_flow(gt, r.witness, treat_terminals_as_free=True)
        assert rep.boundary == (0, 0) and verify_flow(gt, r.witness)


@given(terms(max_edges=7))
def test_negating_every_half_edge_and_value_keeps_the_pseudoflow(t):
    g = compile(t)
    r = oracle_flow(g.closed(), 6)
    if r.found:
        f = r.witness
        assert boundary(g, f.negated()) == boundary(g, f)
        assert verify_flow(g, f.negated())


@given(terms(max_edges=7), st.data())
def test_single_mutations_are_flagged(t, data):
    g = closed(t)
    r = oracle_flow(g, 6)
    if not r.found:
        return
    f = r.witness
    eid = data.draw(st.sampled_from(sorted(f.value)))
    mode = data.draw(st.sampled_from(["zero", "flip"]))
    if mode == "zero":
        mutated = FlowAssignment(f.orientation, {**f.value, eid: 0}, f.k)
    else:
        a, b = f.orientation[eid]
        mutated = FlowAssignment({**f.orientation, eid: (not a, b)}, f.value, f.k)
    assert not verify_flow(g, mutated)


# ---------------------------------------------------------------- switch_flow


@given(terms(max_edges=7), st.data())
def test_switch_flow_preserves_validity_and_is_an_involution(t, data):
    g = compile(t)
    r = oracle_flow(g.closed(), 6)
    if not r.found:
        return
    v = data.draw(st.sampled_from(list(g.vertices)))
    f2 = switch_flow(g, r.witness, v)
    assert verify_flow(switch(g, v), f2)
    assert switch_flow(switch(g, v), f2, v) == r.witness
    if v not in g.terminals:
        assert boundary(switch(g, v), f2) == boundary(g, r.witness)


@given(terms(max_edges=7), st.lists(st.integers(0, 20), max_size=5))
def test_flow_number_is_switching_invariant(t, picks):
    g = closed(t)
    vs = [g.vertices[i % len(g.vertices)] for i in picks]
    assert oracle_flow_number(switch_many(g, vs), 6) == oracle_flow_number(g, 6)


# ---------------------------------------------------------------- connections


def test_series_and_parallel_connection_shapes():
    d1 = compile(parse_sp("D"))
    d2 = SignedGraph.from_edges([("s", "t", 1), ("s", "t", -1)], terminals=("s", "t"), ids=["f0", "f1"])
    s = series_connection(d1, d2)
    p = parallel_connection(d1, d2)
    assert len(s.vertices) == 3 and len(p.vertices) == 2
    assert s.degree(s.terminals[0]) == 2 and p.degree(p.terminals[0]) == 4
