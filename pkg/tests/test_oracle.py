import math

import pytest
from hypothesis import given

from helpers import closed, terms
from signed_flow.generators import enumerate_terms
from signed_flow.graph import SignedGraph, verify_flow
from signed_flow.oracle import (
    OracleLimitError,
    brute_boundary_pairs,
    brute_flow_exists,
    oracle_flow,
    oracle_flow_number,
)
from signed_flow.sp import compile, parse_sp


# [DERIVED] independent search over every orientation and value
FLOW_NUMBERS = [
    ("S(D,e+,D)", 3),
    ("S(D,D)", 2),
    ("P(S(D,D),e+)", 3),
    ("P(e+,e+)", 2),
    ("P(e+,e+,e-)", math.inf),
    ("P(S(e+,D),S(D,e+))", 4),
    ("S(D,P(S(e+,D),S(D,e+)),D)", 3),
    ("S(D,e+,D,e+,D)", 5),
]


@pytest.mark.parametrize("text,k", FLOW_NUMBERS)
def test_flow_numbers(text, k):
    assert oracle_flow_number(closed(parse_sp(text)), 6) == k


def test_witness_is_valid():
    g = closed(parse_sp("P(S(e+,D),S(D,e+))"))
    r = oracle_flow(g, 4)
    assert r.found and verify_flow(g, r.witness) and r.witness.k == 4
    assert not oracle_flow(g, 3).found


def test_lone_digon_has_no_flow():
    assert not oracle_flow(closed(parse_sp("D")), 6).found


def test_pendant_edge_blocks_any_flow():
    g = SignedGraph.from_edges([("a", "b", 1), ("a", "b", 1), ("b", "c", 1)])
    assert not oracle_flow(g, 6).found


def test_empty_graph_has_the_empty_flow():
    assert oracle_flow(SignedGraph(("a",), ()), 2).found


def test_limit_is_enforced():
    g = closed(parse_sp("S(D,e+,D,e+,D)"))
    with pytest.raises(OracleLimitError):
        oracle_flow(g, 6, limit=7)


def test_limit_from_environment(monkeypatch):
    monkeypatch.setenv("SIGNED_FLOW_MAX_EDGES", "3")
    with pytest.raises(OracleLimitError):
        oracle_flow(closed(parse_sp("S(D,D)")), 6)


def test_k_below_two_is_rejected():
    with pytest.raises(ValueError):
        oracle_flow(closed(parse_sp("S(D,D)")), 1)


def test_agrees_with_brute_force():
    for t in enumerate_terms(4):
        g = closed(t)
        for k in (2, 3, 4):
            assert oracle_flow(g, k).found == brute_flow_exists(g, k), (t, k)


@given(terms(min_edges=5, max_edges=5))
def test_agrees_with_brute_force_on_five_edges(t):
    g = closed(t)
    assert oracle_flow(g, 3).found == brute_flow_exists(g, 3)


@given(terms(max_edges=8))
def test_flow_existence_is_monotone_in_k(t):
    g = closed(t)
    found = [oracle_flow(g, k).found for k in range(2, 7)]
    assert found == sorted(found)


def test_d_prime_needs_four_values():
    # [DERIVED] the bridges carry a and b, so a = x + y, b = x - y with y != 0 forces a != b
    g = compile(parse_sp("S(e+,D,e+)"))
    assert brute_boundary_pairs(g, 3) == set()
    assert (1, 3) in brute_boundary_pairs(g, 4)
