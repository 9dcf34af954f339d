import json

import pytest
from hypothesis import given

from helpers import terms
from signed_flow import io as sfio
from signed_flow.engine import dp_flow
from signed_flow.graph import verify_flow
from signed_flow.sp import compile, label_leaves, parse_sp

BARBELL_FLOW = """\
k 6
terminals v0 v1
e0 v0->v2 1
e1 v0<-x->v2 -1
e2 v2->v3 2
e3 v3->v1 1
e4 v3<-x->v1 1
"""


def barbell():
    t = label_leaves(parse_sp("S(D,e+,D)"))
    return compile(t), dp_flow(t)


def test_flow_text_golden():
    g, f = barbell()
    assert sfio.format_flow(g, f) == BARBELL_FLOW


def test_flow_text_determines_the_graph():
    g, f = barbell()
    doc = sfio.parse_flow(BARBELL_FLOW)
    assert doc.graph.same_as(g) and doc.flow == f and not doc.free
    assert verify_flow(doc.graph, doc.flow)


def test_introverted_arrow_and_comments():
    doc = sfio.parse_flow("# two negative edges\nk 3\ne0 a->x<-b 1\n   # indented\ne1 b<-x->a 1\n")
    assert [e.sign for e in doc.graph.edges] == [-1, -1]
    assert doc.flow.orientation["e0"] == (True, True)
    assert verify_flow(doc.graph, doc.flow)


def test_free_flag_round_trip():
    t = label_leaves(parse_sp("D"))
    g = compile(t)
    from signed_flow.pseudoflow import digon_pseudoflow

    f = digon_pseudoflow(2, 4)
    text = sfio.format_flow(g, f, free=True)
    doc = sfio.parse_flow(text)
    assert doc.free and verify_flow(doc.graph, doc.flow, treat_terminals_as_free=True).boundary == (2, 4)


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("terminals a\n", 1, 1),
        ("a b *\n", 1, 5),
        ("a a +\n", 1, 3),
        ("a b + x\na c + x\n", 2, 7),
    ],
)
def test_edge_list_errors_have_positions(text, line, col):
    with pytest.raises(sfio.FormatError) as info:
        sfio.parse_edge_list(text)
    assert (info.value.line, info.value.column) == (line, col)
    assert str(info.value).startswith(f"line {line}, column {col}:")


@pytest.mark.parametrize("text,line,col", [("k 6\ne0 a=>b 1\n", 2, 4), ("k x\n", 1, 1)])
def test_flow_errors_have_positions(text, line, col):
    with pytest.raises(sfio.FormatError) as info:
        sfio.parse_flow(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_edge_list_defaults():
    g = sfio.parse_edge_list("terminals s t\ns m +\nm t -  # trailing comment\n")
    assert [e.id for e in g.edges] == ["e0", "e1"] and g.terminals == ("s", "t")


@given(terms(max_edges=9))
def test_edge_list_round_trip(t):
    g = compile(label_leaves(t))
    assert sfio.parse_edge_list(sfio.format_edge_list(g)).same_as(g)


@given(terms(max_edges=9))
def test_flow_text_and_json_round_trip(t):
    t = label_leaves(t)
    f = dp_flow(t)
    if f is None:
        return
    g = compile(t)
    doc = sfio.parse_flow(sfio.format_flow(g, f))
    assert doc.graph.same_as(g) and doc.flow == f
    back = sfio.flow_from_json(json.loads(sfio.dumps(sfio.flow_to_json(g, f))))
    assert back.graph.same_as(g) and back.flow == f


def test_graph_json_round_trip():
    g, _ = barbell()
    assert sfio.graph_from_json(json.loads(sfio.dumps(sfio.graph_to_json(g)))).same_as(g)


def test_dot_marks_negative_edges_and_terminals():
    g, f = barbell()
    dot = sfio.to_dot(g, f)
    assert dot.startswith("graph G {") and dot.count("style=dashed") == 2
    assert dot.count("doublecircle") == 2 and 'label="e2 v2->v3 2"' in dot
    assert "style=dashed" not in sfio.to_dot(compile(parse_sp("S(e+,e+)")))
