import random

import pytest
from hypothesis import given, strategies as st

from signed_flow.generators import all_necklaces, all_strings, gen_string
from signed_flow.graph import GraphError, boundary, verify_flow
from signed_flow.oracle import brute_boundary_pairs, digon_grid_pairs
from signed_flow.pseudoflow import (
    I5,
    NECKLACE_TABLE,
    PseudoflowError,
    check_table,
    digon_pseudoflow,
    first_condition,
    string_conditions,
    necklace_pseudoflow,
    necklace_split,
    pseudoflow_sum,
    second_condition,
    series_compose,
    string_pseudoflow,
    string_sequence,
    valid_pair,
)
from signed_flow.sp import compile, label_leaves, parse_sp, recognize_necklace, recognize_string

PAIRS = [(a, b) for a in I5 for b in I5]
SAME_PARITY = [(a, b) for a, b in PAIRS if (a - b) % 2 == 0]


def check(term, f, a, b):
    g = compile(label_leaves(term))
    rep = verify_flow(g, f, treat_terminals_as_free=True)
    assert rep.valid, rep.violations
    assert rep.boundary == (a, b)


# ---------------------------------------------------------------- digon


def test_digon_2_4():
    f = digon_pseudoflow(2, 4)
    assert sorted(f.value.values()) == [-1, 3]
    check(parse_sp("D"), f, 2, 4)


def test_digon_rejects_equal_magnitudes_and_parity():
    assert digon_pseudoflow(2, 2) is None
    assert digon_pseudoflow(2, -2) is None
    assert digon_pseudoflow(1, 2) is None
    assert digon_pseudoflow(7, 1) is None


def test_digon_region_equals_brute_force_grid():
    grid = digon_grid_pairs(5)
    mismatches = [(a, b) for a, b in PAIRS if (digon_pseudoflow(a, b) is not None) != ((a, b) in grid)]
    assert mismatches == []


def test_digon_region_equals_exhaustive_boundary_search():
    found = brute_boundary_pairs(compile(parse_sp("D")), 6)
    for a, b in PAIRS:
        assert (digon_pseudoflow(a, b) is not None) == ((a, b) in found)


# ---------------------------------------------------------------- sequences


def test_conditions():
    assert string_conditions(1, 2, 4) == ("a",)
    assert string_conditions(2, 3, 3) == ("b", "c")
    assert string_conditions(2, 0, 4) == ("c",)
    assert string_conditions(1, 2, 2) == ()


@given(st.integers(1, 6), st.sampled_from(SAME_PARITY))
def test_sequences_are_valid_whenever_a_condition_holds(n, pair):
    a, b = pair
    plan = string_sequence(n, a, b)
    if not string_conditions(n, a, b):
        assert plan is None
        return
    assert plan is not None
    c = plan.values
    assert len(c) == n + 1 and c[0] == a and c[-1] == b
    assert len({x % 2 for x in c}) == 1
    assert all(x != y and x != -y for x, y in zip(c, c[1:]))
    assert all(x != 0 for x in c[1:-1])


def test_alternating_recipe_is_used_verbatim_when_it_works():
    plan = string_sequence(3, 1, 3)
    assert plan.values == (1, 3, 1, 3) and plan.case == "a" and not plan.repaired


def test_equal_magnitudes_need_a_repaired_alternation():
    # plain alternation a, b, a with a = b repeats a value
    plan = string_sequence(2, 3, 3)
    assert plan.case == "b" and plan.repaired
    assert plan.values[0] == plan.values[-1] == 3


def test_backtracking_never_beats_the_three_conditions():
    # [DERIVED] exhaustive sequence search: even magnitudes must alternate 2, 4
    for n in range(1, 7):
        for a, b in SAME_PARITY:
            found = string_sequence(n, a, b, search=True) is not None
            assert found == bool(string_conditions(n, a, b)), (n, a, b)


# ---------------------------------------------------------------- strings


def test_string_examples():
    check(parse_sp("D"), string_pseudoflow(parse_sp("D"), 2, 4), 2, 4)
    s2 = gen_string(2, ())
    check(s2, string_pseudoflow(s2, 3, 3), 3, 3)
    check(s2, string_pseudoflow(s2, 0, 4), 0, 4)
    assert string_pseudoflow(parse_sp("D"), 2, 2) is None
    assert (2, 2) not in brute_boundary_pairs(compile(parse_sp("D")), 6)


def test_string_precondition_errors_are_distinct_from_infeasibility():
    s = parse_sp("S(D,D)")
    with pytest.raises(PseudoflowError, match="parity"):
        string_pseudoflow(s, 1, 2)
    with pytest.raises(PseudoflowError, match="I5"):
        string_pseudoflow(s, 7, 1)
    with pytest.raises(PseudoflowError, match="valid"):
        string_pseudoflow(parse_sp("S(e+,D)"), 0, 2)  # source has degree 1
    with pytest.raises(PseudoflowError, match="not a string"):
        string_pseudoflow(parse_sp("S(e+,e+)"), 1, 1)


def test_bridge_only_string():
    f = string_pseudoflow(parse_sp("e+"), 3, 3)
    check(parse_sp("e+"), f, 3, 3)
    assert string_pseudoflow(parse_sp("e+"), 3, 1) is None


@pytest.mark.parametrize("beta", [1, 2, 3])
def test_string_constructions_lie_inside_the_exhaustive_region(beta):
    for t in all_strings(beta):
        prof = recognize_string(t)
        if prof.beta != beta or not prof.nontrivial:
            continue
        region = brute_boundary_pairs(compile(t), 6)
        for a, b in SAME_PARITY:
            if not valid_pair(a, b, prof.deg_s, prof.deg_t):
                continue
            f = string_pseudoflow(prof, a, b)
            if f is not None:
                check(t, f, a, b)
                assert (a, b) in region


# ---------------------------------------------------------------- necklace table

# (a, b): type I ((a1, b1), (a2, b2)), type II ((a1, b1), (a2, b2)), read row by row
REFERENCE_ROWS = [
    ((0, 2), ((1, 5), (-1, -3)), ((1, 3), (-1, -1))),
    ((0, 4), ((3, 5), (-3, -1)), ((1, 5), (-1, -1))),
    ((2, 4), ((-1, 5), (3, -1)), ((1, 3), (1, 1))),
    ((2, -4), ((-1, -5), (3, 1)), ((1, -5), (1, 1))),
    ((1, 3), ((3, -1), (-2, 4)), ((3, 5), (-2, -2))),
    ((1, -3), ((3, 1), (-2, -4)), ((3, -1), (-2, -2))),
    ((1, 5), ((3, 1), (-2, 4)), ((-1, 3), (2, 2))),
    ((1, -5), ((3, -1), (-2, -4)), ((5, -1), (-4, -4))),
    ((3, 5), ((5, 1), (-2, 4)), ((1, 3), (2, 2))),
    ((3, -5), ((5, -1), (-2, -4)), ((5, -3), (-2, -2))),
]


def test_embedded_table_matches_reference_rows():
    assert len(NECKLACE_TABLE) == 10
    for pair, one, two in REFERENCE_ROWS:
        assert NECKLACE_TABLE[pair] == {"I": one, "II": two}


@pytest.mark.parametrize("pair", sorted(NECKLACE_TABLE))
@pytest.mark.parametrize("kind", ["I", "II"])
def test_table_rows_satisfy_both_conditions(pair, kind):
    (a1, b1), (a2, b2) = NECKLACE_TABLE[pair][kind]
    assert (a1 + a2, b1 + b2) == pair
    assert first_condition(a1, b1)
    assert second_condition(kind, a2, b2)


def test_table_self_check_catches_a_bad_row():
    bad = dict(NECKLACE_TABLE)
    bad[(0, 2)] = {"I": ((1, 5), (-1, -3)), "II": ((1, 1), (-1, 1))}
    assert check_table(bad)
    assert check_table() == []


# ---------------------------------------------------------------- necklaces


def test_necklace_components_for_0_2():
    two = recognize_necklace(parse_sp("P(S(e+,D),e+)"))
    assert necklace_split(two, 0, 2) == ((1, 3), (-1, -1))
    one = recognize_necklace(parse_sp("P(S(D,D),D)"))
    assert necklace_split(one, 0, 2) == ((1, 5), (-1, -3))


def test_necklace_zero_zero_splits():
    both = recognize_necklace(parse_sp("P(S(D,e+),S(e+,D))"))
    assert necklace_split(both, 0, 0) == ((1, 3), (-1, -3))
    bridge = recognize_necklace(parse_sp("P(S(D,D),e+)"))
    assert necklace_split(bridge, 0, 0) == ((1, 1), (-1, -1))
    assert necklace_split(recognize_necklace(parse_sp("P(S(e+,D),e+)")), 0, 0) is None


def test_necklace_examples():
    t = parse_sp("P(S(e+,D),e+)")
    check(t, necklace_pseudoflow(t, 0, 2), 0, 2)
    t = parse_sp("P(S(D,e+),S(e+,D))")
    check(t, necklace_pseudoflow(t, 0, 0), 0, 0)
    assert necklace_pseudoflow(t, 3, 3) is None


def test_necklace_precondition_errors():
    t = parse_sp("P(S(D,D),D)")
    with pytest.raises(PseudoflowError):
        necklace_pseudoflow(t, 1, 2)
    with pytest.raises(PseudoflowError):
        necklace_pseudoflow(parse_sp("S(D,D)"), 0, 2)


def test_every_small_necklace_covers_every_unequal_pair():
    covered = [(a, b) for a, b in SAME_PARITY if a != b and a != -b]
    for t in all_necklaces(3):
        for a, b in covered:
            f = necklace_pseudoflow(t, a, b)
            assert f is not None, (t, a, b)
            check(t, f, a, b)


# ---------------------------------------------------------------- composition


def test_sum_of_opposite_components_is_a_flow():
    t = label_leaves(parse_sp("P(S(D,e+),S(e+,D))"))
    a_part, b_part = t.children
    f1 = string_pseudoflow(a_part, 1, 3)
    f2 = string_pseudoflow(b_part, -1, -3)
    both = pseudoflow_sum(f1, f2)
    rep = verify_flow(compile(t), both)
    assert rep.valid and rep.boundary == (0, 0)


def test_sum_with_empty_is_identity():
    f = digon_pseudoflow(2, 4)
    empty = type(f)({}, {}, 6)
    assert pseudoflow_sum(f, empty) == f


def test_sum_rejects_overlaps():
    f = digon_pseudoflow(2, 4)
    with pytest.raises(GraphError):
        pseudoflow_sum(f, f)


def test_boundaries_add_over_random_component_pairs():
    rng = random.Random(11)
    strings = [t for t in all_strings(3) if recognize_string(t).nontrivial]
    done = 0
    while done < 100:
        t1, t2 = rng.choice(strings), rng.choice(strings)
        t = label_leaves(parse_sp(f"P({t1},{t2})"))
        if t.kind != "P" or len(t.children) != 2:
            continue
        p1, p2 = t.children
        (a1, b1), (a2, b2) = rng.choice(SAME_PARITY), rng.choice(SAME_PARITY)
        try:
            f1, f2 = string_pseudoflow(p1, a1, b1), string_pseudoflow(p2, a2, b2)
        except PseudoflowError:
            continue
        if f1 is None or f2 is None:
            continue
        rep = verify_flow(compile(t), pseudoflow_sum(f1, f2), treat_terminals_as_free=True)
        assert rep.valid and rep.boundary == (a1 + a2, b1 + b2)
        done += 1


def _edge(eid, value):
    from signed_flow.graph import SignedGraph, canonical_flow

    g = SignedGraph.from_edges([("s", "t", 1)], terminals=("s", "t"), ids=[eid])
    return g, canonical_flow(g, {eid: value})


def test_series_compose_bridges():
    g, f = series_compose([_edge("x", 3), _edge("y", 3)])
    rep = verify_flow(g, f, treat_terminals_as_free=True)
    assert rep.valid and rep.boundary == (3, 3)


def test_series_compose_digons():
    from signed_flow.graph import SignedGraph, canonical_flow

    def dig(prefix, a, b):
        g = SignedGraph.from_edges([("s", "t", 1), ("s", "t", -1)], terminals=("s", "t"), ids=[prefix + "p", prefix + "n"])
        x, y = (a + b) // 2, (a - b) // 2
        return g, canonical_flow(g, {prefix + "p": x, prefix + "n": y})

    g, f = series_compose([dig("a", 2, 4), dig("b", 4, 2)])
    rep = verify_flow(g, f, treat_terminals_as_free=True)
    assert rep.valid and rep.boundary == (2, 2) and boundary(g, f) == (2, 2)


def test_series_compose_mismatch():
    with pytest.raises(GraphError, match="mismatch"):
        series_compose([_edge("x", 2), _edge("y", 4)])
