"""Exact and heuristic twin-width of graphs at desk scale.

The exact solver walks the lattice of vertex partitions.  The trigraph
reached by contracting the groups of a partition (in any order) has a black
edge between two groups iff all original cross pairs are edges, no edge iff
none are, and a red edge otherwise, so memoizing on the partition is exact
and independent of contraction order.  Identical groups (same status toward
every other group) are merged eagerly; such a merge creates no red edges.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapExceeded, DomainError
from .graphs import ContractionStep, Graph, SequenceError, sequence_width
from .trimatrix import DEFAULT_ORDERING_CAP, TriMatrix, find_mixed_minor

DEFAULT_EXACT_CAP = 10

_NONE, _BLACK, _RED = 0, 1, 2


@dataclass(frozen=True)
class SolveResult:
    value: int
    optimal: bool
    sequence: tuple[ContractionStep, ...]
    nodes_explored: int


def _status(g: Graph, a: tuple[str, ...], b: tuple[str, ...]) -> int:
    hits = sum(1 for u in a for v in b if g.has_edge(u, v))
    if hits == 0:
        return _NONE
    if hits == len(a) * len(b):
        return _BLACK
    return _RED


def _quotient_profile(g: Graph, p: tuple[tuple[str, ...], ...]) -> list[list[int]]:
    k = len(p)
    grid = [[_NONE] * k for _ in range(k)]
    for i, j in itertools.combinations(range(k), 2):
        grid[i][j] = grid[j][i] = _status(g, p[i], p[j])
    return grid


def _max_red(grid: list[list[int]]) -> int:
    return max((row.count(_RED) for row in grid), default=0)


def _merge(p: tuple[tuple[str, ...], ...], a: int, b: int) -> tuple[tuple[str, ...], ...]:
    merged = tuple(sorted(p[a] + p[b]))
    rest = [g for i, g in enumerate(p) if i not in (a, b)]
    rest.append(merged)
    return tuple(sorted(rest))


def twinwidth_exact(g: Graph, cap: int = DEFAULT_EXACT_CAP) -> SolveResult:
    """Exact twin-width and an optimal contraction sequence; |V| <= cap."""
    n = len(g.vertices)
    if n > cap:
        raise CapExceeded(f"exact twin-width cap {cap} exceeded ({n} vertices)")
    if n == 0:
        raise DomainError("empty graph has no contraction sequence")

    memo: dict[tuple, tuple[int, tuple | None]] = {}
    nodes = 0

    # f(p) = best achievable maximum red degree from partition p on,
    # including p's own quotient; each state's grid is computed once.
    def solve(p: tuple[tuple[str, ...], ...]) -> tuple[int, tuple | None]:
        nonlocal nodes
        got = memo.get(p)
        if got is not None:
            return got
        nodes += 1
        grid = _quotient_profile(g, p)
        here = _max_red(grid)
        k = len(p)
        if k == 1:
            memo[p] = (here, None)
            return (here, None)

        # Twin groups (identical rows off the pair) merge first; the merge
        # introduces no red edges, so it never hurts.
        pairs = None
        for a, b in itertools.combinations(range(k), 2):
            if all(grid[a][w] == grid[b][w] for w in range(k) if w not in (a, b)):
                pairs = [(a, b)]
                break
        if pairs is None:
            pairs = list(itertools.combinations(range(k), 2))

        best: int | None = None
        best_move = None
        for a, b in pairs:
            width = solve(_merge(p, a, b))[0]
            if best is None or width < best:
                best, best_move = width, (p[a], p[b])
        result = (max(here, best), best_move)
        memo[p] = result
        return result

    start = tuple((v,) for v in sorted(g.vertices))
    value = solve(start)[0]

    steps: list[ContractionStep] = []
    names = {grp: grp[0] for grp in start}
    p = start
    while len(p) > 1:
        _, move = solve(p)
        ga, gb = move
        if min(gb) < min(ga):
            ga, gb = gb, ga
        merged_name = names[ga] + names[gb]
        steps.append(ContractionStep(names[ga], names[gb], merged_name))
        merged = tuple(sorted(ga + gb))
        names[merged] = merged_name
        p = _merge(p, p.index(ga), p.index(gb))
    return SolveResult(value, True, tuple(steps), nodes)


def twinwidth_greedy(g: Graph) -> SolveResult:
    """Upper bound: contract the pair minimizing the next maximum red degree.

    Ties break lexicographically on the (sorted) pair of group names.  Group
    adjacencies are bitmasks so candidate evaluation is incremental; a
    candidate is abandoned as soon as it provably exceeds the current best.
    """
    if not g.vertices:
        raise DomainError("empty graph has no contraction sequence")
    order = sorted(g.vertices)
    n = len(order)
    slot = {v: i for i, v in enumerate(order)}
    black = [0] * n
    red = [0] * n
    for u, v in g.edges:
        black[slot[u]] |= 1 << slot[v]
        black[slot[v]] |= 1 << slot[u]
    names: dict[int, str] = dict(enumerate(order))
    alive = set(range(n))
    steps: list[ContractionStep] = []
    value = 0
    nodes = 0

    def bits(mask: int):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    while len(alive) > 1:
        degs = {i: red[i].bit_count() for i in alive}
        best: tuple[int, tuple[str, str]] | None = None
        best_pair: tuple[int, int] | None = None
        by_level: dict[int, int] = {}
        for d in degs.values():
            by_level[d] = by_level.get(d, 0) + 1

        for a, b in itertools.combinations(sorted(alive), 2):
            nodes += 1
            pair_bits = (1 << a) | (1 << b)
            red_m = (red[a] | red[b] | (black[a] ^ black[b])) & ~pair_bits
            resulting = red_m.bit_count()
            if best is not None and resulting > best[0]:
                continue
            key = tuple(sorted((names[a], names[b])))
            plus = red_m & ~(red[a] | red[b])
            minus = red[a] & red[b] & ~pair_bits
            abort = False
            for w in bits(plus):
                resulting = max(resulting, degs[w] + 1)
                if best is not None and resulting > best[0]:
                    abort = True
                    break
            if abort:
                continue
            touched = set(bits(plus)) | set(bits(minus)) | {a, b}
            level_delta: dict[int, int] = {}
            for w in touched:
                level_delta[degs[w]] = level_delta.get(degs[w], 0) + 1
            for level in sorted(by_level, reverse=True):
                if level <= resulting:
                    break
                if by_level[level] - level_delta.get(level, 0) > 0:
                    resulting = max(resulting, level)
                    break
            for w in bits(minus):
                resulting = max(resulting, degs[w] - 1)
            if best is not None and (resulting, key) >= best:
                continue
            best = (resulting, key)
            best_pair = (a, b)

        a, b = best_pair
        if names[b] < names[a]:
            a, b = b, a
        merged_name = names[a] + names[b]
        steps.append(ContractionStep(names[a], names[b], merged_name))
        pair_bits = (1 << a) | (1 << b)
        black_m = black[a] & black[b] & ~pair_bits
        red_m = (red[a] | red[b] | (black[a] ^ black[b])) & ~pair_bits
        black[a], red[a] = black_m, red_m
        names[a] = merged_name
        alive.discard(b)
        bit_a, bit_b = 1 << a, 1 << b
        for w in alive:
            if w == a:
                continue
            if black_m & (1 << w):
                black[w] |= bit_a
            else:
                black[w] &= ~bit_a
            if red_m & (1 << w):
                red[w] |= bit_a
            else:
                red[w] &= ~bit_a
            black[w] &= ~bit_b
            red[w] &= ~bit_b
        value = max(value, best[0])
    return SolveResult(value, False, tuple(steps), nodes)


def verify_sequence(g: Graph, seq: tuple[ContractionStep, ...], claimed: int) -> bool:
    """True iff seq is a full contraction sequence of g with width == claimed.

    Malformed sequences raise SequenceError; a width mismatch returns False.
    """
    try:
        width = sequence_width(g, seq)
    except SequenceError:
        raise
    return width == claimed


# ---------------------------------------------------------------------------
# ordering search for mixed-minor-freeness


@dataclass(frozen=True)
class OrderingSearchResult:
    # row/col key orders certifying k-mixed-minor freeness, or None
    ordering: tuple[tuple[str, ...], tuple[str, ...]] | None
    # True when a None result is a proof (all orderings were tried)
    exhaustive: bool


def _similarity_order(lines: list[tuple[int, ...]]) -> list[int]:
    """Nearest-neighbour chaining by Hamming distance, starting from index 0."""
    remaining = set(range(len(lines)))
    order = [0]
    remaining.discard(0)
    while remaining:
        last = lines[order[-1]]
        nxt = min(
            remaining,
            key=lambda i: (sum(1 for x, y in zip(lines[i], last) if x != y), i),
        )
        order.append(nxt)
        remaining.discard(nxt)
    return order


def ordering_without_mixed_minor(
    m: TriMatrix,
    k: int,
    mode: str = "auto",
    cap: int = DEFAULT_ORDERING_CAP,
) -> OrderingSearchResult:
    """Look for a row/column ordering of m without a k-mixed minor.

    The native ordering is tried first, then lexicographic and
    similarity-based sortings; exhaustive enumeration (over matrices up to
    ``cap`` per axis) settles the question when allowed by ``mode``.
    """
    if mode not in ("auto", "exhaustive", "heuristic"):
        raise DomainError(f"unknown mode {mode!r}")
    nr, nc = m.shape()

    def check(row_order, col_order):
        return find_mixed_minor(m.permuted(row_order, col_order), k) is None

    identity_r, identity_c = list(range(nr)), list(range(nc))
    cols_of = list(zip(*m.rows)) if m.rows else []
    candidates = [
        (identity_r, identity_c),
        (sorted(identity_r, key=lambda i: m.rows[i]), sorted(identity_c, key=lambda j: cols_of[j])),
        (_similarity_order(list(m.rows)), _similarity_order(list(cols_of))),
    ]
    for ro, co in candidates:
        if check(ro, co):
            ordered = m.permuted(ro, co)
            return OrderingSearchResult((ordered.row_keys, ordered.col_keys), False)

    if mode == "heuristic":
        return OrderingSearchResult(None, False)
    if nr > cap or nc > cap:
        if mode == "exhaustive":
            raise CapExceeded(f"ordering search cap {cap} exceeded ({nr}x{nc})")
        return OrderingSearchResult(None, False)

    for ro in itertools.permutations(range(nr)):
        for co in itertools.permutations(range(nc)):
            if check(ro, co):
                ordered = m.permuted(ro, co)
                return OrderingSearchResult((ordered.row_keys, ordered.col_keys), False)
    return OrderingSearchResult(None, True)
