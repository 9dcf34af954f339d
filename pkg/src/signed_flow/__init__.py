"""Nowhere-zero flows on signed series-parallel graphs."""

from .admissibility import AdmissibilityReport, SignedCircuit, circuit_through, is_flow_admissible
from .census import CensusConfig, census, find_tight, summarize
from .engine import (
    BoundaryPairSet,
    ConstructiveResult,
    NotAdmissibleError,
    ReductionTrace,
    constructive_flow,
    dp_flow,
    dp_pairs,
    flow_number_sp,
    lift,
    reduce,
)
from .generators import (
    RandomConfig,
    all_necklaces,
    all_strings,
    count_terms,
    enumerate_terms,
    gen_necklace,
    gen_string,
    random_term,
)
from .graph import (
    Balance,
    Edge,
    FlowAssignment,
    GraphError,
    LoopError,
    SignedGraph,
    VerifyReport,
    boundary,
    canonical_flow,
    cycle_sign,
    switch,
    switch_flow,
    verify_flow,
)
from .oracle import OracleResult, oracle_flow, oracle_flow_number
from .pseudoflow import (
    I5,
    NECKLACE_TABLE,
    PseudoflowError,
    digon_pseudoflow,
    necklace_pseudoflow,
    pseudoflow_sum,
    series_compose,
    string_pseudoflow,
)
from .sp import (
    PieceRef,
    SpSyntaxError,
    SpTerm,
    compile,
    depth,
    find_necklace_piece,
    is_reduced,
    normalize_to_string,
    parse_sp,
    pieces_of_depth,
    recognize_necklace,
    recognize_sp,
    recognize_string,
    replace_piece,
)

__all__ = [name for name in dir() if not name.startswith("_")]
