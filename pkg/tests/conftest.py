"""Shared fixtures and independent oracles.

The oracles here recompute expected values by brute force along a different
code path than the operations under test: full enumeration of contraction
sequences, direct chord-crossing and interval-intersection predicates on the
raw input values, and full two-axis division enumeration for mixed minors.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from pathlib import Path

import pytest

from twinwidth.graphs import Graph, Trigraph, contract
from twinwidth.ilrep import INTERVAL, OVERLAP, IntervalLikeRep, rep_from_intervals
from twinwidth.trimatrix import TriMatrix, _zone_mixed

DATA = Path(__file__).parent / "data"

DEMO5_EDGES = [("a", "c"), ("a", "d"), ("b", "c"), ("b", "e"), ("c", "d"), ("d", "e")]
DEMO6_INTERVALS = [
    ("ac", 1, 3),
    ("bc", 2, 3),
    ("be", 2, 5),
    ("cd", 3, 4),
    ("dd", 4, 4),
    ("de", 4, 5),
]


@pytest.fixture
def demo5_graph() -> Graph:
    return Graph.build("abcde", DEMO5_EDGES)


@pytest.fixture
def demo6_rep() -> IntervalLikeRep:
    return rep_from_intervals(DEMO6_INTERVALS, INTERVAL)


@pytest.fixture
def demo6_rep_overlap() -> IntervalLikeRep:
    return rep_from_intervals(DEMO6_INTERVALS, OVERLAP)


def path_graph(ids: str) -> Graph:
    return Graph.build(ids, list(zip(ids, ids[1:])))


def complete_graph(ids: str) -> Graph:
    return Graph.build(ids, itertools.combinations(ids, 2))


# ---------------------------------------------------------------------------
# oracles


def brute_twinwidth(g: Graph) -> int:
    """Minimum width over every contraction sequence, enumerated outright."""
    best = [len(g.vertices)]

    def go(t: Trigraph, mx: int) -> None:
        if len(t.vertices) == 1:
            best[0] = min(best[0], mx)
            return
        if mx >= best[0]:
            return
        for u, v in itertools.combinations(sorted(t.vertices), 2):
            t2 = contract(t, u, v)
            go(t2, max(mx, t2.max_red_degree()))

    go(Trigraph.from_graph(g), 0)
    return best[0]


def oracle_interval_graph(intervals, kind: str) -> set[frozenset[str]]:
    """Edges computed straight from the rational endpoint values."""
    vals = {i: (Fraction(l), Fraction(r)) for i, l, r in intervals}
    edges = set()
    for a, b in itertools.combinations(sorted(vals), 2):
        (l1, r1), (l2, r2) = vals[a], vals[b]
        intersect = l1 <= r2 and l2 <= r1
        if kind == INTERVAL:
            adjacent = intersect
        else:
            nested = (l1 < l2 and r2 < r1) or (l2 < l1 and r1 < r2)
            equal_span = (l1, r1) == (l2, r2)
            adjacent = intersect and not nested and not equal_span
        if adjacent:
            edges.add(frozenset((a, b)))
    return edges


def oracle_chord_crossings(sequence) -> set[frozenset[str]]:
    """Chord pairs whose endpoints interleave around the circle."""
    pos: dict[str, list[int]] = {}
    for i, lab in enumerate(sequence):
        pos.setdefault(lab, []).append(i)
    edges = set()
    for a, b in itertools.combinations(sorted(pos), 2):
        a1, a2 = pos[a]
        b1, b2 = pos[b]
        if (a1 < b1 < a2 < b2) or (b1 < a1 < b2 < a2):
            edges.add(frozenset((a, b)))
    return edges


def oracle_mixed_minor(m: TriMatrix, k: int) -> bool:
    """Full enumeration over both axes: does an all-mixed k-division exist?"""
    nr, nc = m.shape()

    def compositions(total: int, parts: int):
        if parts == 1:
            if total >= 1:
                yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    def bounds(sizes):
        out, pos = [], 0
        for s in sizes:
            out.append((pos, pos + s))
            pos += s
        return out

    for rsizes in compositions(nr, k):
        rb = bounds(rsizes)
        for csizes in compositions(nc, k):
            cb = bounds(csizes)
            if all(_zone_mixed(m, r0, r1, c0, c1) for r0, r1 in rb for c0, c1 in cb):
                return True
    return False
