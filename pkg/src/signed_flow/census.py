"""Exhaustive census over canonical terms, and the search for flow number 6."""

from __future__ import annotations

import json
import math
import os
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator

from .admissibility import admissible_fast, bridges, is_flow_admissible
from .engine import constructive_flow, dp_flow, flow_number_sp
from .generators import MAX_ENUM_EDGES, terms_of_size
from .graph import verify_flow
from .oracle import default_limit, oracle_flow, oracle_flow_number
from .sp import SpTerm, compile, is_reduced

__all__ = [
    "CensusConfig",
    "CensusRecord",
    "CensusSummary",
    "census_limit",
    "census",
    "summarize",
    "TightWitness",
    "find_tight",
]


def census_limit() -> int:
    raw = os.environ.get("SIGNED_FLOW_MAX_EDGES")
    return max(MAX_ENUM_EDGES, int(raw)) if raw else MAX_ENUM_EDGES


@dataclass(frozen=True)
class CensusConfig:
    max_edges: int = 6
    min_edges: int = 1
    oracle: bool = True
    flow_numbers: bool = False
    constructive: bool = True


@dataclass
class CensusRecord:
    term: str
    edges: int
    admissible: bool
    balanced: bool
    bridgeless: bool
    dp_ok: bool
    constructive_ok: bool | None
    oracle_ok: bool | None
    flow_number: int | None
    fallbacks: list[str] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        flags = [self.admissible, self.dp_ok]
        if self.constructive_ok is not None:
            flags.append(self.constructive_ok)
        if self.oracle_ok is not None:
            flags.append(self.oracle_ok)
        return len(set(flags)) == 1

    def to_json(self) -> str:
        d = asdict(self)
        d["agree"] = self.agree
        return json.dumps(d, sort_keys=True)


def _record(t: SpTerm, cfg: CensusConfig) -> CensusRecord:
    g = compile(t)
    closed = g.closed()
    adm = is_flow_admissible(closed).admissible
    f = dp_flow(t)
    dp_ok = f is not None and bool(verify_flow(g, f))
    cons_ok = None
    fallbacks: list[str] = []
    if cfg.constructive:
        r = constructive_flow(t)
        cons_ok = r.ok and bool(verify_flow(g, r.flow))  # type: ignore[arg-type]
        fallbacks = r.fallbacks
    oracle_ok = None
    fn = None
    if cfg.oracle:
        oracle_ok = oracle_flow(closed, 6).found
    if cfg.flow_numbers and adm:
        n = oracle_flow_number(closed, 6)
        fn = None if n == math.inf else int(n)
    return CensusRecord(
        term=str(t),
        edges=t.size,
        admissible=adm,
        balanced=closed.is_balanced(),
        bridgeless=not bridges(closed),
        dp_ok=dp_ok,
        constructive_ok=cons_ok,
        oracle_ok=oracle_ok,
        flow_number=fn,
        fallbacks=fallbacks,
    )


def census(config: CensusConfig = CensusConfig()) -> Iterator[CensusRecord]:
    """One record per canonical term, in enumeration order."""
    if config.max_edges > census_limit():
        raise ValueError(f"census is limited to {census_limit()} edges")
    if config.oracle and config.max_edges > default_limit():
        raise ValueError(f"oracle is limited to {default_limit()} edges")
    for n in range(config.min_edges, config.max_edges + 1):
        for t in terms_of_size(n):
            yield _record(t, config)


@dataclass
class CensusSummary:
    terms: int = 0
    admissible: int = 0
    disagreements: list[str] = field(default_factory=list)
    flow_numbers: Counter = field(default_factory=Counter)
    six: list[str] = field(default_factory=list)
    fallback_terms: list[str] = field(default_factory=list)
    balanced_bridgeless: int = 0
    balanced_bridgeless_max: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["flow_numbers"] = {str(k): v for k, v in sorted(self.flow_numbers.items())}
        return d


def summarize(records: Iterable[CensusRecord]) -> CensusSummary:
    s = CensusSummary()
    for r in records:
        s.terms += 1
        s.admissible += r.admissible
        if not r.agree:
            s.disagreements.append(r.term)
        if r.fallbacks:
            s.fallback_terms.append(r.term)
        if r.flow_number is not None:
            s.flow_numbers[r.flow_number] += 1
            if r.flow_number == 6:
                s.six.append(r.term)
            if r.balanced and r.bridgeless:
                s.balanced_bridgeless_max = max(s.balanced_bridgeless_max, r.flow_number)
        if r.balanced and r.bridgeless:
            s.balanced_bridgeless += 1
    return s


@dataclass(frozen=True)
class TightWitness:
    term: SpTerm
    edges: int
    dp_flow_number: int
    has_6_flow: bool
    has_5_flow: bool
    scanned: int

    @property
    def confirmed(self) -> bool:
        return self.dp_flow_number == 6 and self.has_6_flow and not self.has_5_flow


def find_tight(max_edges: int = 10, limit: int = 1) -> list[TightWitness]:
    """First ``limit`` terms whose flow number is 6, smallest size first.

    Only reduced flow-admissible terms are screened with the DP; each hit
    is then confirmed by the oracle (6-flow found, 5-flow search fails).
    """
    if max_edges > census_limit():
        raise ValueError(f"search is limited to {census_limit()} edges")
    out: list[TightWitness] = []
    scanned = 0
    for n in range(1, max_edges + 1):
        for t in terms_of_size(n):
            scanned += 1
            if not is_reduced(t):
                continue
            g = compile(t).closed()
            if not admissible_fast(g) or flow_number_sp(t) != 6:
                continue
            out.append(
                TightWitness(
                    t, n, 6, oracle_flow(g, 6).found, oracle_flow(g, 5).found, scanned
                )
            )
            if len(out) >= limit:
                return out
    return out
