"""Shared strategies and small utilities for the test suite."""

from hypothesis import strategies as st

from signed_flow.generators import RandomConfig, random_term
from signed_flow.sp import compile


def terms(min_edges=1, max_edges=7):
    """Random canonical terms, reproducible from a drawn seed."""
    return st.builds(
        lambda seed, n, q, r: random_term(seed, RandomConfig(edges=n, neg_prob=q, series_prob=r)),
        st.integers(0, 2**32 - 1),
        st.integers(min_edges, max_edges),
        st.sampled_from([0.0, 0.3, 0.5, 0.8]),
        st.sampled_from([0.3, 0.5, 0.7]),
    )


def closed(t):
    return compile(t).closed()


def vertex_subsets(g):
    return st.lists(st.sampled_from(list(g.vertices)), max_size=6)
