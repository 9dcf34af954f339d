"""Instance factories: strings, necklaces, exhaustive and random SP terms."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .sp import SpTerm, digon, parallel, pos, neg, recognize_necklace, recognize_string, series

__all__ = [
    "MAX_ENUM_EDGES",
    "gen_string",
    "gen_necklace",
    "string_patterns",
    "all_strings",
    "all_necklaces",
    "enumerate_terms",
    "terms_of_size",
    "count_terms",
    "random_term",
    "RandomConfig",
]

MAX_ENUM_EDGES = 10


def gen_string(beta: int, bridges: Sequence[int] = ()) -> SpTerm:
    """String with ``beta`` digons and a bridge after each listed digon count.

    ``bridges`` holds positions in ``0..beta``: position ``i`` puts a bridge
    right after the ``i``-th digon (``0`` = before the first).  Each position
    may occur at most once, and a bridge-only string needs ``beta == 0``
    with the single position ``0``.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    spots = list(bridges)
    if len(set(spots)) != len(spots) or any(not 0 <= i <= beta for i in spots):
        raise ValueError(f"invalid bridge pattern {tuple(bridges)} for beta={beta}")
    if beta == 0:
        if spots != [0]:
            raise ValueError("a string without digons is a single bridge")
        return pos()
    blocks: list[SpTerm] = []
    for i in range(beta + 1):
        if i in spots:
            blocks.append(pos())
        if i < beta:
            blocks.append(digon())
    t = series(*blocks)
    if recognize_string(t) is None:  # pragma: no cover - pattern rules exclude this
        raise ValueError("pattern does not give a string")
    return t


def string_patterns(beta: int) -> Iterator[tuple[int, ...]]:
    """Every admissible bridge pattern for ``beta`` digons."""
    if beta == 0:
        yield (0,)
        return
    for mask in range(1 << (beta + 1)):
        yield tuple(i for i in range(beta + 1) if mask >> i & 1)


def all_strings(max_beta: int) -> Iterator[SpTerm]:
    for beta in range(max_beta + 1):
        for pattern in string_patterns(beta):
            yield gen_string(beta, pattern)


def gen_necklace(first: tuple[int, Sequence[int]], second: tuple[int, Sequence[int]]) -> SpTerm:
    """Parallel connection of two generated strings, at least one nontrivial."""
    g1 = gen_string(*first)
    g2 = gen_string(*second)
    t = parallel(g1, g2)
    if recognize_necklace(t) is None:
        raise ValueError("a necklace needs at least one nontrivial string")
    return t


def all_necklaces(max_beta: int) -> Iterator[SpTerm]:
    """Every necklace (up to parallel order) with total beta at most ``max_beta``."""
    seen: set[SpTerm] = set()
    strings = list(all_strings(max_beta))
    for i, a in enumerate(strings):
        pa = recognize_string(a)
        for b in strings[i:]:
            pb = recognize_string(b)
            if pa.beta + pb.beta > max_beta:  # type: ignore[union-attr]
                continue
            t = parallel(a, b)
            if t in seen or recognize_necklace(t) is None:
                continue
            seen.add(t)
            yield t


# ---------------------------------------------------------------- exhaustive enumeration

_MEMO_LIMIT = 7


def _check(max_edges: int) -> None:
    if max_edges > MAX_ENUM_EDGES:
        raise ValueError(f"enumeration is limited to {MAX_ENUM_EDGES} edges")


def _compositions(n: int, parts_min: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        if parts_min <= 0:
            yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first, parts_min - 1):
            yield (first, *rest)


@lru_cache(maxsize=None)
def _memo(kind: str, n: int) -> tuple[SpTerm, ...]:
    return tuple(_gen(kind, n))


def _terms(kind: str, n: int) -> Sequence[SpTerm] | Iterator[SpTerm]:
    return _memo(kind, n) if n <= _MEMO_LIMIT else _gen(kind, n)


def _gen(kind: str, n: int) -> Iterator[SpTerm]:
    # kind: "all", "ns" (no series root), "np" (no parallel root), "S", "P"
    if kind == "all":
        if n == 1:
            yield pos()
            yield neg()
            return
        yield from _terms("S", n)
        yield from _terms("P", n)
    elif kind == "ns":
        if n == 1:
            yield pos()
            yield neg()
        else:
            yield from _terms("P", n)
    elif kind == "np":
        if n == 1:
            yield pos()
            yield neg()
        else:
            yield from _terms("S", n)
    elif kind == "S":
        for comp in _compositions(n, 2):
            if len(comp) >= 2:
                yield from _sequences(comp)
    elif kind == "P":
        yield from _multisets(n, n - 1, 0, [])


def _sequences(comp: tuple[int, ...]) -> Iterator[SpTerm]:
    def go(i: int, acc: list[SpTerm]) -> Iterator[SpTerm]:
        if i == len(comp):
            yield SpTerm("S", tuple(acc))
            return
        for t in _terms("ns", comp[i]):
            acc.append(t)
            yield from go(i + 1, acc)
            acc.pop()

    yield from go(0, [])


def _multisets(n: int, max_size: int, min_index: int, acc: list[SpTerm]) -> Iterator[SpTerm]:
    """Non-increasing (size, index) runs of non-parallel terms summing to ``n``."""
    if n == 0:
        if len(acc) >= 2:
            yield parallel(*acc)
        return
    for size in range(min(n, max_size), 0, -1):
        pool = _memo("np", size) if size <= _MEMO_LIMIT else tuple(_gen("np", size))
        start = min_index if size == max_size else 0
        for idx in range(start, len(pool)):
            acc.append(pool[idx])
            yield from _multisets(n - size, size, idx, acc)
            acc.pop()


def terms_of_size(n: int) -> Iterator[SpTerm]:
    """Canonical terms with exactly ``n`` leaves."""
    _check(n)
    if n < 1:
        return iter(())
    return iter(_terms("all", n))


def enumerate_terms(max_edges: int) -> Iterator[SpTerm]:
    """Every canonical term with at most ``max_edges`` leaves, by size."""
    _check(max_edges)
    for n in range(1, max_edges + 1):
        yield from terms_of_size(n)


@lru_cache(maxsize=None)
def count_terms(n: int) -> int:
    """Number of canonical terms with exactly ``n`` leaves (no enumeration)."""
    return _count("all", n)


@lru_cache(maxsize=None)
def _count(kind: str, n: int) -> int:
    if n == 1:
        return 2 if kind in ("all", "ns", "np") else 0
    if kind == "all":
        return _count("S", n) + _count("P", n)
    if kind == "ns":
        return _count("P", n)
    if kind == "np":
        return _count("S", n)
    if kind == "S":
        # ordered sequences of >= 2 non-series terms
        seq = [0] * (n + 1)  # seq[m]: sequences of >= 1 items summing to m
        for m in range(1, n + 1):
            seq[m] = _count("ns", m) + sum(_count("ns", j) * seq[m - j] for j in range(1, m))
        return seq[n] - _count("ns", n)
    # multisets of >= 2 non-parallel terms: Euler transform over sizes < n
    return _multiset_count(n, n - 1)


@lru_cache(maxsize=None)
def _multiset_count(n: int, max_size: int) -> int:
    if n == 0:
        return 1
    total = 0
    for size in range(min(n, max_size), 0, -1):
        c = _count("np", size)
        # choose j >= 1 copies (with repetition) from c types of this size
        for j in range(1, n // size + 1):
            total += _multichoose(c, j) * _multiset_count(n - j * size, size - 1)
    return total


def _multichoose(c: int, j: int) -> int:
    from math import comb

    return comb(c + j - 1, j)


# ---------------------------------------------------------------- random terms


@dataclass(frozen=True)
class RandomConfig:
    edges: int = 8
    neg_prob: float = 0.5
    series_prob: float = 0.5


def random_term(seed: int, config: RandomConfig = RandomConfig()) -> SpTerm:
    """Random term with exactly ``config.edges`` leaves, reproducible from ``seed``."""
    rng = random.Random(seed)

    def build(n: int) -> SpTerm:
        if n == 1:
            return neg() if rng.random() < config.neg_prob else pos()
        k = rng.randint(2, min(n, 4))
        cuts = sorted(rng.sample(range(1, n), k - 1))
        sizes = [b - a for a, b in zip([0, *cuts], [*cuts, n])]
        kids = [build(s) for s in sizes]
        return series(*kids) if rng.random() < config.series_prob else parallel(*kids)

    if config.edges < 1:
        raise ValueError("need at least one edge")
    return build(config.edges)
