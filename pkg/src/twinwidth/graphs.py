"""Graphs, trigraphs, contraction sequences, permutations, and small-scale isomorphism.

Vertices are opaque strings.  A trigraph carries a second, disjoint set of
"red" edges recording where merged vertices disagreed; contracting two
vertices u, v yields a vertex (named by concatenation, for traceability)
whose red neighbourhood is

    ((N_red(u) | N_red(v)) - {u, v}) | (N(u) ^ N(v))

where N is the full (black + red) neighbourhood.  Red loops are dropped.

One-line permutations are plain tuples over 1..p, e.g. ``(3, 1, 4, 2)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import CapExceeded, DomainError, FormatError

DEFAULT_ISO_CAP = 12


def _norm_edge(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Graph:
    """A simple graph: loop-free, no duplicate edges."""

    vertices: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if u == v:
                raise DomainError(f"loop at vertex {u!r}")
            if u > v:
                raise DomainError(f"edge {(u, v)!r} not normalised")
            if u not in self.vertices or v not in self.vertices:
                raise DomainError(f"edge {(u, v)!r} has endpoint outside the vertex set")

    @staticmethod
    def build(vertices: Iterable[str], edges: Iterable[tuple[str, str]]) -> "Graph":
        return Graph(frozenset(vertices), frozenset(_norm_edge(u, v) for u, v in edges))

    @cached_property
    def adjacency(self) -> dict[str, frozenset[str]]:
        nbrs: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return {v: frozenset(s) for v, s in nbrs.items()}

    def neighbors(self, v: str) -> frozenset[str]:
        return self.adjacency[v]

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: str, v: str) -> bool:
        return _norm_edge(u, v) in self.edges

    def subgraph(self, keep: Iterable[str]) -> "Graph":
        ks = frozenset(keep)
        if not ks <= self.vertices:
            raise DomainError("subgraph vertices not contained in the graph")
        return Graph(ks, frozenset(e for e in self.edges if e[0] in ks and e[1] in ks))

    def relabel(self, mapping: dict[str, str]) -> "Graph":
        if set(mapping) != set(self.vertices) or len(set(mapping.values())) != len(self.vertices):
            raise DomainError("relabel mapping must be a bijection on the vertex set")
        return Graph.build(mapping.values(), ((mapping[u], mapping[v]) for u, v in self.edges))

    def complement(self) -> "Graph":
        vs = sorted(self.vertices)
        edges = [(u, v) for u, v in itertools.combinations(vs, 2) if not self.has_edge(u, v)]
        return Graph.build(vs, edges)


@dataclass(frozen=True)
class Trigraph:
    """A graph whose edges are split into black (certain) and red (error) edges."""

    vertices: frozenset[str]
    black_edges: frozenset[tuple[str, str]]
    red_edges: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        if self.black_edges & self.red_edges:
            raise DomainError("black and red edge sets overlap")
        for u, v in self.black_edges | self.red_edges:
            if u == v:
                raise DomainError(f"loop at vertex {u!r}")
            if u not in self.vertices or v not in self.vertices:
                raise DomainError(f"edge {(u, v)!r} has endpoint outside the vertex set")

    @staticmethod
    def from_graph(g: Graph) -> "Trigraph":
        return Trigraph(g.vertices, g.edges, frozenset())

    @cached_property
    def _nbrs(self) -> tuple[dict[str, frozenset[str]], dict[str, frozenset[str]]]:
        black: dict[str, set[str]] = {v: set() for v in self.vertices}
        red: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.black_edges:
            black[u].add(v)
            black[v].add(u)
        for u, v in self.red_edges:
            red[u].add(v)
            red[v].add(u)
        return (
            {v: frozenset(s) for v, s in black.items()},
            {v: frozenset(s) for v, s in red.items()},
        )

    def black_neighbors(self, v: str) -> frozenset[str]:
        return self._nbrs[0][v]

    def red_neighbors(self, v: str) -> frozenset[str]:
        return self._nbrs[1][v]

    def neighbors(self, v: str) -> frozenset[str]:
        return self._nbrs[0][v] | self._nbrs[1][v]

    def red_degree(self, v: str) -> int:
        return len(self._nbrs[1][v])

    def max_red_degree(self) -> int:
        return max((self.red_degree(v) for v in self.vertices), default=0)


def contract(t: Trigraph, u: str, v: str, new_id: str | None = None) -> Trigraph:
    """Merge u and v into a single vertex (default name: ``u + v``)."""
    if u == v:
        raise DomainError("cannot contract a vertex with itself")
    if u not in t.vertices or v not in t.vertices:
        raise DomainError(f"unknown vertex in contraction: {u!r}, {v!r}")
    merged = new_id if new_id is not None else u + v
    if merged in t.vertices - {u, v}:
        raise DomainError(f"merged vertex id {merged!r} already present")

    pair = {u, v}
    full = (t.neighbors(u) | t.neighbors(v)) - pair
    red = ((t.red_neighbors(u) | t.red_neighbors(v)) - pair) | ((t.neighbors(u) ^ t.neighbors(v)) - pair)
    black = full - red

    vertices = (t.vertices - pair) | {merged}
    black_edges = {e for e in t.black_edges if not pair & set(e)}
    red_edges = {e for e in t.red_edges if not pair & set(e)}
    black_edges.update(_norm_edge(merged, w) for w in black)
    red_edges.update(_norm_edge(merged, w) for w in red)
    return Trigraph(frozenset(vertices), frozenset(black_edges), frozenset(red_edges))


@dataclass(frozen=True)
class ContractionStep:
    u: str
    v: str
    merged: str


ContractionSequence = tuple[ContractionStep, ...]


class SequenceError(DomainError):
    """A contraction sequence is malformed (wrong length or missing vertices)."""


def apply_sequence(g: Graph, seq: Sequence[ContractionStep]) -> list[Trigraph]:
    """All trigraphs along a full contraction sequence, the input included."""
    if len(seq) != len(g.vertices) - 1:
        raise SequenceError(
            f"sequence has {len(seq)} steps, a full sequence on {len(g.vertices)} vertices needs {len(g.vertices) - 1}"
        )
    t = Trigraph.from_graph(g)
    out = [t]
    for step in seq:
        if step.u not in t.vertices or step.v not in t.vertices:
            raise SequenceError(f"step {step} references a vertex missing at that point")
        t = contract(t, step.u, step.v, step.merged)
        out.append(t)
    return out


def sequence_width(g: Graph, seq: Sequence[ContractionStep]) -> int:
    """Maximum red degree over all trigraphs of a full contraction sequence."""
    return max(t.max_red_degree() for t in apply_sequence(g, seq))


# ---------------------------------------------------------------------------
# permutations (one-line notation over 1..p)


def is_permutation(word: Sequence[int]) -> bool:
    return sorted(word) == list(range(1, len(word) + 1))


def check_permutation(word: Sequence[int]) -> tuple[int, ...]:
    w = tuple(word)
    if not is_permutation(w):
        raise DomainError(f"{w!r} is not a permutation of 1..{len(w)}")
    return w


def inverse_permutation(word: Sequence[int]) -> tuple[int, ...]:
    w = check_permutation(word)
    inv = [0] * len(w)
    for i, x in enumerate(w, start=1):
        inv[x - 1] = i
    return tuple(inv)


def permutation_graph(word: Sequence[int]) -> Graph:
    """The inversion graph of a permutation: vertices "1".."p", edge ij (i<j) iff word[i] > word[j].

    >>> sorted(permutation_graph((3, 1, 4, 2)).edges)
    [('1', '2'), ('1', '4'), ('3', '4')]
    """
    w = check_permutation(word)
    p = len(w)
    edges = [(str(i), str(j)) for i, j in itertools.combinations(range(1, p + 1), 2) if w[i - 1] > w[j - 1]]
    return Graph.build((str(i) for i in range(1, p + 1)), edges)


def permutation_from_orders(first: Sequence, second: Sequence) -> tuple[int, ...]:
    """The permutation carrying two linear orders of the same set.

    ``first`` and ``second`` list the same elements; position i of the result
    is the ``first``-rank of the i-th element of ``second``.
    """
    if sorted(map(repr, first)) != sorted(map(repr, second)) or len(set(first)) != len(first):
        raise DomainError("the two orders must list the same distinct elements")
    rank1 = {x: i for i, x in enumerate(first, start=1)}
    return tuple(rank1[x] for x in second)


# ---------------------------------------------------------------------------
# twins


def find_twins(g: Graph) -> list[tuple[str, str]]:
    """All pairs u < v with N(u) - {v} = N(v) - {u} (adjacent or not)."""
    out = []
    for u, v in itertools.combinations(sorted(g.vertices), 2):
        if g.neighbors(u) - {v} == g.neighbors(v) - {u}:
            out.append((u, v))
    return out


def twin_free_core(g: Graph) -> Graph:
    """Delete one vertex of some twin pair until no twins remain.

    Deterministic: always drops the larger vertex of the first twin pair.
    """
    while True:
        twins = find_twins(g)
        if not twins:
            return g
        _, gone = twins[0]
        g = g.subgraph(g.vertices - {gone})


# ---------------------------------------------------------------------------
# isomorphism at desk scale


def _neighbor_degree_profile(g: Graph) -> dict[str, tuple[int, tuple[int, ...]]]:
    return {
        v: (g.degree(v), tuple(sorted(g.degree(w) for w in g.neighbors(v))))
        for v in g.vertices
    }


def is_isomorphic(g: Graph, h: Graph, cap: int = DEFAULT_ISO_CAP) -> bool:
    """Exhaustive isomorphism test with degree-profile pruning; |V| <= cap."""
    if len(g.vertices) > cap or len(h.vertices) > cap:
        raise CapExceeded(f"isomorphism cap {cap} exceeded ({len(g.vertices)} / {len(h.vertices)} vertices)")
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return False
    gp, hp = _neighbor_degree_profile(g), _neighbor_degree_profile(h)
    if sorted(gp.values()) != sorted(hp.values()):
        return False

    # Map high-degree vertices first; candidates share the degree profile.
    order = sorted(g.vertices, key=lambda v: (-g.degree(v), v))
    cands = {v: [w for w in h.vertices if hp[w] == gp[v]] for v in order}

    def extend(i: int, mapping: dict[str, str], used: set[str]) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in cands[v]:
            if w in used:
                continue
            ok = all(
                g.has_edge(v, prev) == h.has_edge(w, mapping[prev])
                for prev in order[:i]
            )
            if ok:
                mapping[v] = w
                used.add(w)
                if extend(i + 1, mapping, used):
                    return True
                del mapping[v]
                used.remove(w)
        return False

    return extend(0, {}, set())


# ---------------------------------------------------------------------------
# text formats


def graph_to_text(g: Graph, name: str = "g") -> str:
    """Serialize: header ``graph <name> <n> <m>``, then sorted ``v``/``e`` lines."""
    lines = [f"graph {name} {len(g.vertices)} {len(g.edges)}"]
    lines.extend(f"v {v}" for v in sorted(g.vertices))
    lines.extend(f"e {u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Graph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("graph "):
        raise FormatError("graph file must start with a 'graph <name> <n> <m>' header")
    head = lines[0].split()
    if len(head) != 4:
        raise FormatError(f"bad graph header: {lines[0]!r}")
    vertices: list[str] = []
    edges: list[tuple[str, str]] = []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "v" and len(parts) == 2:
            vertices.append(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        else:
            raise FormatError(f"bad graph line: {ln!r}")
    g = Graph.build(vertices, edges)
    if len(g.vertices) != int(head[2]) or len(g.edges) != int(head[3]):
        raise FormatError("graph header counts do not match the body")
    return g


def sequence_to_text(seq: Sequence[ContractionStep]) -> str:
    return "".join(f"c {s.u} {s.v} {s.merged}\n" for s in seq)


def sequence_from_text(text: str) -> ContractionSequence:
    steps = []
    for ln in text.splitlines():
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 4 or parts[0] != "c":
            raise FormatError(f"bad sequence line: {ln!r}")
        steps.append(ContractionStep(parts[1], parts[2], parts[3]))
    return tuple(steps)
