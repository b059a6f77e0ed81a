"""Interval-like representations and their representation matrices.

A representation is a linearly ordered set of interval *ends* plus a set of
ordered end pairs; the pairs are the vertices.  The same data decodes to two
different graphs:

* ``interval`` kind: pairs are adjacent when the closed intervals intersect;
* ``overlap`` kind: adjacent when they intersect but neither strictly
  contains the other (so sharing an end makes an edge).  Overlap graphs are
  exactly the circle graphs, read off an opened chord diagram.

The representation matrix has one column per end and one row per pair plus a
dummy row (t, t) for every end t; a row holds 2 in the columns left of its
first end and a single 1 in the column of its second end (pair rows only).
Dummy rows encode the end order, which is what makes the matrix decodable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import CapExceeded, DomainError, FormatError
from .graphs import DEFAULT_ISO_CAP, Graph, is_isomorphic
from .trimatrix import RED, TriMatrix

INTERVAL = "interval"
OVERLAP = "overlap"
KINDS = (INTERVAL, OVERLAP)


def end_name(i: int) -> str:
    """Spreadsheet-style names: a..z, aa, ab, ... (order is positional, not lexicographic)."""
    letters = ""
    i += 1
    while i:
        i, rem = divmod(i - 1, 26)
        letters = chr(ord("a") + rem) + letters
    return letters


def pair_name(pair: tuple[str, str]) -> str:
    return f"({pair[0]},{pair[1]})"


@dataclass(frozen=True)
class IntervalLikeRep:
    """Ordered ends, a set of end pairs (the vertices), and a decoding kind."""

    ends: tuple[str, ...]
    pairs: frozenset[tuple[str, str]]
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DomainError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if len(set(self.ends)) != len(self.ends):
            raise DomainError("duplicate end ids")
        pos = {e: i for i, e in enumerate(self.ends)}
        for s1, s2 in self.pairs:
            if s1 not in pos or s2 not in pos:
                raise DomainError(f"pair {(s1, s2)!r} uses an unknown end")
            if pos[s1] > pos[s2]:
                raise DomainError(f"pair {(s1, s2)!r} is not ordered by the end order")

    @cached_property
    def rank(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.ends)}

    def sorted_pairs(self) -> list[tuple[str, str]]:
        r = self.rank
        return sorted(self.pairs, key=lambda p: (r[p[0]], r[p[1]]))


def rep_from_intervals(
    intervals: Sequence[tuple[str, Fraction | int, Fraction | int]],
    kind: str,
) -> IntervalLikeRep:
    """Normalize endpoint values to ranked opaque ends and collect the pairs.

    Duplicate intervals (same left and right value) are rejected: the decoded
    graph's vertices are the distinct pairs.
    """
    seen: set[tuple[Fraction, Fraction]] = set()
    norm = []
    for ident, left, right in intervals:
        l, r = Fraction(left), Fraction(right)
        if l > r:
            raise DomainError(f"interval {ident!r} has left > right")
        if (l, r) in seen:
            raise DomainError(f"duplicate interval {ident!r}: ({l}, {r}) appears twice")
        seen.add((l, r))
        norm.append((l, r))
    values = sorted({v for l, r in norm for v in (l, r)})
    name = {v: end_name(i) for i, v in enumerate(values)}
    ends = tuple(name[v] for v in values)
    pairs = frozenset((name[l], name[r]) for l, r in norm)
    return IntervalLikeRep(ends, pairs, kind)


def interval_vertex_map(
    intervals: Sequence[tuple[str, Fraction | int, Fraction | int]]
) -> dict[str, str]:
    """Input interval id -> decoded vertex id, for oracle comparisons."""
    values = sorted({Fraction(v) for _, l, r in intervals for v in (l, r)})
    name = {v: end_name(i) for i, v in enumerate(values)}
    return {
        ident: pair_name((name[Fraction(l)], name[Fraction(r)]))
        for ident, l, r in intervals
    }


@dataclass(frozen=True)
class ChordDiagram:
    """Circular endpoint sequence of chords; every chord label appears exactly twice."""

    sequence: tuple[str, ...]

    def __post_init__(self) -> None:
        counts: dict[str, int] = {}
        for label in self.sequence:
            counts[label] = counts.get(label, 0) + 1
        bad = [l for l, c in counts.items() if c != 2]
        if bad:
            raise DomainError(f"chord labels must appear exactly twice, bad: {sorted(bad)}")

    def chords(self) -> dict[str, tuple[int, int]]:
        pos: dict[str, list[int]] = {}
        for i, label in enumerate(self.sequence):
            pos.setdefault(label, []).append(i)
        return {label: (p[0], p[1]) for label, p in pos.items()}


def rep_from_chords(diagram: ChordDiagram) -> IntervalLikeRep:
    """Cut the circle before position 0 and flatten the chords into end pairs."""
    occurrence: dict[str, int] = {}
    names = []
    for label in diagram.sequence:
        occurrence[label] = occurrence.get(label, 0) + 1
        names.append(f"{label}{occurrence[label]}")
    if len(set(names)) != len(names):
        raise DomainError("chord labels collide after numbering their two ends")
    pairs = frozenset(
        (names[a], names[b]) for a, b in diagram.chords().values()
    )
    return IntervalLikeRep(tuple(names), pairs, OVERLAP)


# ---------------------------------------------------------------------------
# decoding


def _interval_core(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] <= b[0] <= a[1]


def _overlap_core(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] <= b[0] <= a[1] <= b[1]


def decode(rep: IntervalLikeRep) -> Graph:
    """The graph on the end pairs, under the representation's kind."""
    core = _interval_core if rep.kind == INTERVAL else _overlap_core
    r = rep.rank
    plist = rep.sorted_pairs()
    ranked = {p: (r[p[0]], r[p[1]]) for p in plist}
    edges = []
    for a, b in itertools.combinations(plist, 2):
        if core(ranked[a], ranked[b]) or core(ranked[b], ranked[a]):
            edges.append((pair_name(a), pair_name(b)))
    return Graph.build((pair_name(p) for p in plist), edges)


# ---------------------------------------------------------------------------
# representation matrices


@dataclass(frozen=True)
class IlMatrix:
    matrix: TriMatrix
    rep: IntervalLikeRep
    row_pairs: dict[str, tuple[str, str]] = field(compare=False)


def build_ilmatrix(rep: IntervalLikeRep) -> IlMatrix:
    r = rep.rank
    all_rows = sorted(
        set(rep.pairs) | {(t, t) for t in rep.ends},
        key=lambda p: (r[p[0]], r[p[1]]),
    )
    rows = []
    for s1, s2 in all_rows:
        in_pairs = (s1, s2) in rep.pairs
        row = []
        for j, col in enumerate(rep.ends):
            if j < r[s1]:
                row.append(2)
            elif in_pairs and col == s2:
                row.append(1)
            else:
                row.append(0)
        rows.append(tuple(row))
    keys = tuple(pair_name(p) for p in all_rows)
    return IlMatrix(
        TriMatrix(keys, rep.ends, tuple(rows)),
        rep,
        {pair_name(p): p for p in all_rows},
    )


def _implied_pairs(m: TriMatrix) -> dict[str, tuple[int, int | None]]:
    """Row key -> (first-end rank, second-end rank or None for dummy rows)."""
    out: dict[str, tuple[int, int | None]] = {}
    for key, row in zip(m.row_keys, m.rows):
        if RED in row:
            raise DomainError("representation matrices contain no red entries")
        prefix = 0
        while prefix < len(row) and row[prefix] == 2:
            prefix += 1
        if 2 in row[prefix:]:
            raise DomainError(f"row {key!r}: entries 2 must form a prefix")
        ones = [j for j, v in enumerate(row) if v == 1]
        if len(ones) > 1:
            raise DomainError(f"row {key!r}: more than one entry 1")
        if ones and ones[0] < prefix:
            raise DomainError(f"row {key!r}: entry 1 inside the 2 prefix")
        if prefix == len(row) and not ones:
            raise DomainError(f"row {key!r}: all entries 2")
        out[key] = (prefix, ones[0] if ones else None)
    return out


def validate_ilmatrix(m: TriMatrix) -> dict[str, tuple[int, int | None]]:
    """Check the representation-matrix invariants; returns the implied pairs."""
    implied = _implied_pairs(m)
    order = [
        (s1, s2 if s2 is not None else s1)
        for s1, s2 in implied.values()
    ]
    if order != sorted(order) or len(set(order)) != len(order):
        raise DomainError("rows are not strictly sorted by their implied end pairs")
    dummies = {s1 for (s1, s2) in order if s1 == s2}
    if dummies != set(range(len(m.col_keys))):
        raise DomainError("every column needs its degenerate (t, t) row")
    return implied


def decode_from_matrix(m: IlMatrix | TriMatrix, kind: str) -> Graph:
    """Decode a representation matrix directly (no logic engine involved).

    Agrees with ``decode`` edge for edge when the matrix came from
    ``build_ilmatrix``.
    """
    if kind not in KINDS:
        raise DomainError(f"kind must be one of {KINDS}, got {kind!r}")
    matrix = m.matrix if isinstance(m, IlMatrix) else m
    implied = validate_ilmatrix(matrix)
    vertices = {key: (s1, s2) for key, (s1, s2) in implied.items() if s2 is not None}
    core = _interval_core if kind == INTERVAL else _overlap_core
    edges = []
    for a, b in itertools.combinations(sorted(vertices), 2):
        if core(vertices[a], vertices[b]) or core(vertices[b], vertices[a]):
            edges.append((a, b))
    return Graph.build(vertices, edges)


# ---------------------------------------------------------------------------
# unification and condensing


def unify(rep: IntervalLikeRep, s1: str, s2: str) -> tuple[IntervalLikeRep, bool]:
    """Merge two consecutive ends (s2 into s1).

    The unification is legal when no two distinct pairs collide under the
    merge, i.e. the vertex set keeps its size.
    """
    r = rep.rank
    if s1 not in r or s2 not in r:
        raise DomainError("unknown end")
    if r[s2] != r[s1] + 1:
        raise DomainError(f"ends {s1!r}, {s2!r} are not consecutive")
    rho = lambda e: s1 if e == s2 else e
    new_pairs = frozenset((rho(a), rho(b)) for a, b in rep.pairs)
    legal = len(new_pairs) == len(rep.pairs)
    ends = tuple(e for e in rep.ends if e != s2)
    return IntervalLikeRep(ends, new_pairs, rep.kind), legal


def _preserves_graph(rep: IntervalLikeRep, merged: IntervalLikeRep, s1: str, s2: str, iso_cap: int) -> bool:
    rho = lambda e: s1 if e == s2 else e
    before = decode(rep)
    after = decode(merged)
    translate = {
        pair_name(p): pair_name((rho(p[0]), rho(p[1]))) for p in rep.pairs
    }
    same = {tuple(sorted((translate[u], translate[v]))) for u, v in before.edges} == set(after.edges)
    if same:
        return True
    return is_isomorphic(before, after, cap=iso_cap)


def condense(rep: IntervalLikeRep, iso_cap: int = DEFAULT_ISO_CAP) -> IntervalLikeRep:
    """Apply legal, graph-preserving unifications until none applies.

    The scan runs left to right and restarts after every success, so the
    result is deterministic; condensed forms are generally not unique.
    """
    changed = True
    while changed:
        changed = False
        for i in range(len(rep.ends) - 1):
            s1, s2 = rep.ends[i], rep.ends[i + 1]
            merged, legal = unify(rep, s1, s2)
            if legal and _preserves_graph(rep, merged, s1, s2, iso_cap):
                rep = merged
                changed = True
                break
    return rep


# ---------------------------------------------------------------------------
# interval recognition (stopgap; exhaustive over maximal-clique orders)


def _maximal_cliques(g: Graph) -> list[frozenset[str]]:
    cliques: list[frozenset[str]] = []

    def bron_kerbosch(r: set[str], p: set[str], x: set[str]) -> None:
        if not p and not x:
            cliques.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda v: len(g.neighbors(v) & p))
        for v in sorted(p - g.neighbors(pivot)):
            bron_kerbosch(r | {v}, p & g.neighbors(v), x & g.neighbors(v))
            p.remove(v)
            x.add(v)

    if g.vertices:
        bron_kerbosch(set(), set(g.vertices), set())
    return cliques


def recognize_interval(g: Graph, clique_cap: int = 8) -> list[tuple[str, Fraction, Fraction]] | None:
    """An interval model of g, or None if g is not an interval graph.

    Brute-forces a consecutive ordering of the maximal cliques, so it is a
    desk-scale stopgap, not a linear-time recognizer.  Endpoints are padded
    so that no two intervals coincide and no two distinct values collide.
    """
    if not g.vertices:
        return []
    cliques = _maximal_cliques(g)
    if len(cliques) > clique_cap:
        raise CapExceeded(f"recognition cap: {len(cliques)} maximal cliques > {clique_cap}")
    vs = sorted(g.vertices)
    for order in itertools.permutations(range(len(cliques))):
        spans = {}
        ok = True
        for v in vs:
            positions = [i for i, ci in enumerate(order) if v in cliques[ci]]
            if positions[-1] - positions[0] + 1 != len(positions):
                ok = False
                break
            spans[v] = (positions[0], positions[-1])
        if ok:
            pad = Fraction(1, 2 * len(vs) + 2)
            return [
                (v, spans[v][0] - (i + 1) * pad, spans[v][1] + (i + 1) * pad)
                for i, v in enumerate(vs)
            ]
    return None


# ---------------------------------------------------------------------------
# text formats


def intervals_to_text(intervals: Iterable[tuple[str, Fraction | int, Fraction | int]]) -> str:
    return "".join(f"i {ident} {left} {right}\n" for ident, left, right in intervals)


def intervals_from_text(text: str) -> list[tuple[str, Fraction, Fraction]]:
    out = []
    for ln in text.splitlines():
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 4 or parts[0] != "i":
            raise FormatError(f"bad interval line: {ln!r}")
        try:
            out.append((parts[1], Fraction(parts[2]), Fraction(parts[3])))
        except ValueError as exc:
            raise FormatError(f"bad interval bounds in {ln!r}") from exc
    return out


def chords_to_text(diagram: ChordDiagram) -> str:
    return " ".join(diagram.sequence) + "\n"


def chords_from_text(text: str) -> ChordDiagram:
    labels = text.split()
    if not labels:
        raise FormatError("empty chord file")
    return ChordDiagram(tuple(labels))


def rep_to_intervals(rep: IntervalLikeRep) -> list[tuple[str, int, int]]:
    """Serialize a representation as integer-endpoint intervals (rank = value).

    Only representations without unused ends round-trip exactly; condensed
    ones never have unused ends.
    """
    used = {e for p in rep.pairs for e in p}
    if used != set(rep.ends):
        raise DomainError("representation has unused ends; cannot serialize as intervals")
    r = rep.rank
    return [(pair_name(p), r[p[0]], r[p[1]]) for p in rep.sorted_pairs()]
