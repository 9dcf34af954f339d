"""``signed-flow`` command line.

Exit codes: 0 success or feasible, 2 infeasible or not admissible,
1 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from itertools import permutations
from pathlib import Path
from typing import Sequence, TextIO

from . import io as sfio
from .admissibility import is_flow_admissible
from .census import CensusConfig, census, census_limit, find_tight, summarize
from .engine import constructive_flow, dp_flow, flow_number_sp
from .generators import RandomConfig, enumerate_terms, gen_necklace, gen_string, random_term
from .graph import FlowAssignment, GraphError, SignedGraph, verify_flow
from .oracle import OracleLimitError, oracle_flow, oracle_flow_number
from .pseudoflow import (
    PseudoflowError,
    digon_pseudoflow,
    necklace_pseudoflow,
    string_pseudoflow,
)
from .sp import (
    SpSyntaxError,
    SpTerm,
    compile,
    is_reduced,
    label_leaves,
    match_vertices,
    parse_sp,
    recognize_necklace,
    recognize_sp,
    recognize_string,
)

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- input


@dataclass
class Instance:
    graph: SignedGraph
    term: SpTerm | None
    vmap: dict[str, str] | None  # compiled vertex -> graph vertex
    source: str


def _looks_like_term(text: str) -> bool:
    body = "".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    return body[:2] in ("S(", "P(", "e+", "e-") or body == "D" or body.startswith(("S (", "P ("))


def _sp_for(g: SignedGraph) -> tuple[SpTerm | None, SignedGraph]:
    if g.terminals is not None:
        return recognize_sp(g), g
    for s, t in permutations(g.vertices, 2):
        if s > t:
            continue
        h = SignedGraph(g.vertices, g.edges, (s, t))
        term = recognize_sp(h)
        if term is not None:
            return term, h
    return None, g


def load_instance(args: argparse.Namespace) -> Instance:
    if getattr(args, "expr", None):
        term = label_leaves(parse_sp(args.expr))
        return Instance(compile(term), term, None, args.expr)
    if not getattr(args, "input", None):
        raise UsageError("give an input file or --expr")
    text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    if _looks_like_term(text):
        body = "".join(line.split("#", 1)[0] for line in text.splitlines())
        term = label_leaves(parse_sp(body))
        return Instance(compile(term), term, None, args.input)
    g = sfio.parse_edge_list(text)
    term, h = _sp_for(g)
    if term is None:
        return Instance(g, None, None, args.input)
    vmap = match_vertices(compile(term), h)
    return Instance(h, term, vmap, args.input)


def _to_user(inst: Instance, f: FlowAssignment) -> FlowAssignment:
    """Carry a flow from the compiled term's vertex names to the input graph's."""
    if inst.vmap is None or inst.term is None:
        return f
    comp = compile(inst.term)
    orient = {}
    for e in comp.edges:
        mine = inst.graph.edge(e.id)
        to_u, to_v = f.orientation[e.id]
        orient[e.id] = (to_u, to_v) if inst.vmap[e.u] == mine.u else (to_v, to_u)
    return FlowAssignment(orient, dict(f.value), f.k)


def _need_term(inst: Instance) -> SpTerm:
    if inst.term is None:
        raise UsageError("input is not a two-terminal series-parallel graph")
    return inst.term


# ---------------------------------------------------------------- output


def _emit_flow(out: TextIO, g: SignedGraph, f: FlowAssignment, emit: str, free: bool = False) -> None:
    if emit == "dot":
        out.write(sfio.to_dot(g, f))
    elif emit == "json":
        out.write(json.dumps(sfio.flow_to_json(g, f, free), sort_keys=True) + "\n")
    else:
        out.write(sfio.format_flow(g, f, free))


def _json(out: TextIO, obj: object) -> None:
    out.write(json.dumps(obj, sort_keys=True) + "\n")


# ---------------------------------------------------------------- commands


def cmd_parse(args: argparse.Namespace, out: TextIO) -> int:
    inst = load_instance(args)
    g, t = inst.graph, inst.term
    info: dict[str, object] = {
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "terminals": list(g.terminals) if g.terminals else None,
        "balanced": g.is_balanced(),
        "series_parallel": t is not None,
    }
    if t is not None:
        rep = is_reduced(t)
        sp, nk = recognize_string(t), recognize_necklace(t)
        info.update(
            term=str(t),
            depth=t.depth,
            reduced=bool(rep),
            string={"beta": sp.beta, "nontrivial": sp.nontrivial} if sp else None,
            necklace={"type": nk.type, "beta": nk.beta} if nk else None,
        )
    if args.format == "json":
        _json(out, info)
    else:
        for k, v in info.items():
            out.write(f"{k}: {v}\n")
    return EXIT_OK


def cmd_admissible(args: argparse.Namespace, out: TextIO) -> int:
    inst = load_instance(args)
    rep = is_flow_admissible(inst.graph.closed())
    if args.format == "json":
        _json(out, rep.to_dict())
    else:
        out.write("flow-admissible\n" if rep.admissible else "not flow-admissible\n")
        for eid, w in rep.witnesses.items():
            out.write(f"  {eid}: {w.kind if w else 'none'}\n")
    return EXIT_OK if rep.admissible else EXIT_INFEASIBLE


def _find_flow(inst: Instance, k: int, method: str) -> tuple[FlowAssignment | None, list[str]]:
    if method == "oracle" or inst.term is None:
        if method != "oracle":
            raise UsageError("input is not series-parallel; use --method oracle")
        r = oracle_flow(inst.graph.closed(), k)
        return r.witness, [f"oracle explored {r.nodes} states"]
    t = inst.term
    if method == "constructive" and k >= 6:
        r = constructive_flow(t)
        notes = [*r.events, *(f"fallback: {x}" for x in r.fallbacks)]
        f = r.flow.with_k(k) if r.flow is not None else None
        return (_to_user(inst, f) if f else None), notes
    f = dp_flow(t, k)
    notes = [] if method == "dp" else ["constructive strategy builds 6-flows; used the DP for smaller k"]
    return (_to_user(inst, f) if f else None), notes


def cmd_flow(args: argparse.Namespace, out: TextIO) -> int:
    inst = load_instance(args)
    f, notes = _find_flow(inst, args.k, args.method)
    if args.explain:
        for line in notes:
            sys.stderr.write(f"# {line}\n")
    if f is None:
        msg = "not flow-admissible" if args.k >= 6 else f"no nowhere-zero {args.k}-flow"
        if args.format == "json":
            _json(out, {"found": False, "message": msg})
        else:
            out.write(msg + "\n")
        return EXIT_INFEASIBLE
    g = inst.graph
    emit = "json" if args.format == "json" and args.emit == "text" else args.emit
    _emit_flow(out, g, f, emit)
    return EXIT_OK


def cmd_flow_number(args: argparse.Namespace, out: TextIO) -> int:
    inst = load_instance(args)
    if inst.term is not None and not args.oracle:
        n = flow_number_sp(inst.term)
    else:
        n = oracle_flow_number(inst.graph.closed(), args.max_k)
    shown = "inf" if n == math.inf else str(n)
    if args.format == "json":
        _json(out, {"flow_number": None if n == math.inf else n})
    else:
        out.write(shown + "\n")
    return EXIT_INFEASIBLE if n == math.inf else EXIT_OK


def cmd_pseudoflow(args: argparse.Namespace, out: TextIO) -> int:
    t = _need_term(load_instance(args))
    a, b = args.a, args.b
    try:
        if t.kind == "P" and len(t.children) == 2 and {c.sign for c in t.children if c.is_leaf} == {1, -1}:
            f = digon_pseudoflow(a, b, t)
        elif recognize_string(t) is not None:
            f = string_pseudoflow(t, a, b, search=args.search)
        elif recognize_necklace(t) is not None:
            f = necklace_pseudoflow(t, a, b)
        else:
            raise UsageError("pseudoflows are built for digons, strings and necklaces only")
    except PseudoflowError as exc:
        out.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    if f is None:
        out.write(f"not covered: no construction for ({a},{b})\n")
        return EXIT_INFEASIBLE
    emit = "json" if args.format == "json" and args.emit == "text" else args.emit
    _emit_flow(out, compile(t), f, emit, free=True)
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace, out: TextIO) -> int:
    g = load_instance(args).graph.closed()
    if args.flow_number:
        n = oracle_flow_number(g, args.max_k)
        shown = "inf" if n == math.inf else str(n)
        if args.format == "json":
            _json(out, {"flow_number": None if n == math.inf else n, "max_k": args.max_k})
        else:
            out.write(f"{shown}\n")
        return EXIT_INFEASIBLE if n == math.inf else EXIT_OK
    r = oracle_flow(g, args.k)
    if args.format == "json":
        _json(out, {"k": r.k, "found": r.found, "nodes": r.nodes})
    else:
        out.write(f"{'found' if r.found else 'none'} (k={r.k}, {r.nodes} states)\n")
        if r.witness is not None:
            out.write(sfio.format_flow(g, r.witness))
    return EXIT_OK if r.found else EXIT_INFEASIBLE


def _string_spec(text: str) -> tuple[int, tuple[int, ...]]:
    beta, _, rest = text.partition(":")
    return int(beta), tuple(int(x) for x in rest.split(",") if x)


def cmd_gen(args: argparse.Namespace, out: TextIO) -> int:
    if args.kind == "string":
        terms = [gen_string(args.beta, args.bridges)]
    elif args.kind == "necklace":
        terms = [gen_necklace(_string_spec(args.first), _string_spec(args.second))]
    elif args.kind == "random":
        cfg = RandomConfig(edges=args.edges, neg_prob=args.neg_prob, series_prob=args.series_prob)
        terms = [random_term(args.seed + i, cfg) for i in range(args.count)]
    else:
        terms = list(enumerate_terms(args.max_edges))
    for i, t in enumerate(terms):
        if args.format == "json":
            rec = {"term": str(t), "edges": t.size}
            if args.kind == "random":
                rec["seed"] = args.seed + i
            _json(out, rec)
        else:
            out.write(f"{t}\n")
    return EXIT_OK


def cmd_census(args: argparse.Namespace, out: TextIO) -> int:
    if args.tight:
        hits = find_tight(args.max_edges)
        if not hits:
            out.write("no flow-number-6 term found\n")
            return EXIT_INFEASIBLE
        w = hits[0]
        _json(out, {"term": str(w.term), "edges": w.edges, "six": w.has_6_flow, "five": w.has_5_flow})
        return EXIT_OK if w.confirmed else EXIT_INFEASIBLE
    cfg = CensusConfig(
        max_edges=args.max_edges, oracle=not args.no_oracle, flow_numbers=args.flow_numbers
    )
    sink = open(args.out, "w") if args.out else None
    try:
        def stream():
            for r in census(cfg):
                if sink:
                    sink.write(r.to_json() + "\n")
                yield r

        s = summarize(stream())
    finally:
        if sink:
            sink.close()
    d = s.to_dict()
    if args.format == "json":
        _json(out, d)
    else:
        out.write(f"terms: {s.terms}\nadmissible: {s.admissible}\n")
        out.write(f"disagreements: {len(s.disagreements)}\nfallback terms: {len(s.fallback_terms)}\n")
        if args.flow_numbers:
            out.write(f"flow numbers: {d['flow_numbers']}\n")
            out.write(f"flow number 6: {len(s.six)}\n")
    return EXIT_OK if not s.disagreements else EXIT_INFEASIBLE


def cmd_export_dot(args: argparse.Namespace, out: TextIO) -> int:
    if args.flow:
        doc = _read_flow(args.flow)
        out.write(sfio.to_dot(doc.graph, doc.flow))
        return EXIT_OK
    inst = load_instance(args)
    out.write(sfio.to_dot(inst.graph))
    return EXIT_OK


def _read_flow(path: str) -> sfio.FlowDocument:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    if text.lstrip().startswith("{"):
        return sfio.flow_from_json(json.loads(text))
    return sfio.parse_flow(text)


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    doc = _read_flow(args.flow)
    g = doc.graph
    if args.graph or args.expr:
        args.input = args.graph
        ref = load_instance(args).graph
        if {(e.id, frozenset((e.u, e.v)), e.sign) for e in ref.edges} != {
            (e.id, frozenset((e.u, e.v)), e.sign) for e in g.edges
        }:
            out.write("invalid: flow does not match the given graph\n")
            return EXIT_INFEASIBLE
        g = SignedGraph(ref.vertices, tuple(g.edge(e.id) for e in ref.edges), ref.terminals)
    rep = verify_flow(g, doc.flow, treat_terminals_as_free=doc.free or args.free)
    if args.format == "json":
        _json(out, {"valid": rep.valid, "violations": [str(v) for v in rep.violations], "boundary": rep.boundary})
    else:
        out.write("valid" if rep.valid else "invalid")
        if rep.boundary is not None and (doc.free or args.free):
            out.write(f" boundary {rep.boundary[0]} {rep.boundary[1]}")
        out.write("\n")
        for v in rep.violations:
            out.write(f"  {v}\n")
    return EXIT_OK if rep.valid else EXIT_INFEASIBLE


# ---------------------------------------------------------------- parser


def _add_input(p: argparse.ArgumentParser, positional: bool = True) -> None:
    if positional:
        p.add_argument("input", nargs="?", help="edge-list or term file ('-' for stdin)")
    p.add_argument("--expr", help="series-parallel term, e.g. 'P(S(e+,D),e-)'")


def build_parser() -> argparse.ArgumentParser:
    # accepted before or after the subcommand; the later one wins
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
    p = _Parser(prog="signed-flow", description="Nowhere-zero flows on signed series-parallel graphs.")
    p.add_argument("--format", choices=["text", "json"], default="text")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help, description=help, parents=[fmt])

    q = add("parse", "Parse and describe a graph or term.")
    _add_input(q)
    q.set_defaults(func=cmd_parse)

    q = add("admissible", "Decide flow-admissibility with per-edge signed-circuit witnesses.")
    _add_input(q)
    q.set_defaults(func=cmd_admissible)

    q = add("flow", "Construct a nowhere-zero k-flow.")
    _add_input(q)
    q.add_argument("--k", type=int, default=6)
    q.add_argument("--method", choices=["dp", "constructive", "oracle"], default="constructive")
    q.add_argument("--emit", choices=["text", "dot", "json"], default="text")
    q.add_argument("--explain", action="store_true", help="print the construction trace to stderr")
    q.set_defaults(func=cmd_flow)

    q = add("flow-number", "Least k admitting a nowhere-zero k-flow.")
    _add_input(q)
    q.add_argument("--oracle", action="store_true", help="use the exhaustive oracle")
    q.add_argument("--max-k", type=int, default=8)
    q.set_defaults(func=cmd_flow_number)

    q = add("pseudoflow", "Build an (a,b)-pseudoflow on a digon, string or necklace.")
    _add_input(q)
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--emit", choices=["text", "dot", "json"], default="text")
    q.add_argument("--search", action="store_true", help="allow a backtracking sequence search")
    q.set_defaults(func=cmd_pseudoflow)

    q = add("oracle", "Exhaustive flow search on any small signed graph.")
    _add_input(q)
    q.add_argument("--k", type=int, default=6)
    q.add_argument("--flow-number", action="store_true")
    q.add_argument("--max-k", type=int, default=8)
    q.set_defaults(func=cmd_oracle)

    q = add("gen", "Generate strings, necklaces, random or enumerated terms.")
    gs = q.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    r = gs.add_parser("string", parents=[fmt])
    r.add_argument("--beta", type=int, required=True)
    r.add_argument("--bridges", type=int, nargs="*", default=[])
    r = gs.add_parser("necklace", parents=[fmt], description="strings as BETA:POS,POS")
    r.add_argument("--first", required=True)
    r.add_argument("--second", required=True)
    r = gs.add_parser("random", parents=[fmt])
    r.add_argument("--edges", type=int, default=8)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--count", type=int, default=1)
    r.add_argument("--neg-prob", type=float, default=0.5)
    r.add_argument("--series-prob", type=float, default=0.5)
    r = gs.add_parser("enumerate", parents=[fmt])
    r.add_argument("--max-edges", type=int, default=3)
    q.set_defaults(func=cmd_gen)

    q = add("census", "Cross-check every canonical term up to a size.")
    q.add_argument("--max-edges", type=int, default=6)
    q.add_argument("--out", help="write JSON lines here")
    q.add_argument("--no-oracle", action="store_true")
    q.add_argument("--flow-numbers", action="store_true", help="oracle flow number per admissible term")
    q.add_argument("--tight", action="store_true", help="search for a term with flow number 6")
    q.set_defaults(func=cmd_census)

    q = add("export-dot", "Render a graph, or a flow file, as DOT.")
    _add_input(q)
    q.add_argument("--flow", help="flow file to render instead")
    q.set_defaults(func=cmd_export_dot)

    q = add("verify", "Check a flow file (text or JSON).")
    q.add_argument("flow", help="flow file ('-' for stdin)")
    q.add_argument("--graph", help="graph the flow must belong to")
    q.add_argument("--expr", help="term the flow must belong to")
    q.add_argument("--free", action="store_true", help="exempt terminals from conservation")
    q.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "max_edges", None) and args.max_edges > census_limit():
            raise UsageError(f"--max-edges is limited to {census_limit()}")
        return args.func(args, out)
    except (UsageError, SpSyntaxError, sfio.FormatError, GraphError, OracleLimitError, ValueError, OSError) as exc:
        sys.stderr.write(f"signed-flow: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
