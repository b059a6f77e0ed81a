"""Ordered matrices over {0, 1, 2} plus a red error entry.

Contracting two rows keeps one of them and turns every entry where the two
rows disagreed into RED; columns symmetrically.  The red number of a matrix
is the maximum count of RED entries over all rows and columns.  A k-mixed
minor is a division of the (ordered) matrix into k consecutive row blocks
and k consecutive column blocks such that every zone contains two distinct
rows and two distinct columns.

The exact matrix twin-width solver walks the lattice of (row, column) group
partitions: the matrix reached by any interleaving of contractions is the
quotient by the partition, so memoizing on the partition pair is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import CapExceeded, DomainError, FormatError
from .graphs import Graph

RED = 3

_SYMBOLS = {0: "0", 1: "1", 2: "2", RED: "r"}
_VALUES = {s: v for v, s in _SYMBOLS.items()}

DEFAULT_MATRIX_BUDGET = 10  # rows + cols for the exact solver
DEFAULT_ORDERING_CAP = 6  # per-axis size for exhaustive row/col ordering search


@dataclass(frozen=True)
class TriMatrix:
    row_keys: tuple[str, ...]
    col_keys: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(set(self.row_keys)) != len(self.row_keys) or len(set(self.col_keys)) != len(self.col_keys):
            raise DomainError("duplicate row or column keys")
        if len(self.rows) != len(self.row_keys):
            raise DomainError("row count does not match row keys")
        for row in self.rows:
            if len(row) != len(self.col_keys):
                raise DomainError("row length does not match column keys")
            if any(v not in _SYMBOLS for v in row):
                raise DomainError("matrix entries must be 0, 1, 2 or RED")

    @staticmethod
    def build(row_keys: Iterable[str], col_keys: Iterable[str], rows: Iterable[Iterable[int]]) -> "TriMatrix":
        return TriMatrix(tuple(row_keys), tuple(col_keys), tuple(tuple(r) for r in rows))

    @cached_property
    def _row_pos(self) -> dict[str, int]:
        return {k: i for i, k in enumerate(self.row_keys)}

    @cached_property
    def _col_pos(self) -> dict[str, int]:
        return {k: i for i, k in enumerate(self.col_keys)}

    def entry(self, row_key: str, col_key: str) -> int:
        return self.rows[self._row_pos[row_key]][self._col_pos[col_key]]

    def shape(self) -> tuple[int, int]:
        return (len(self.row_keys), len(self.col_keys))

    def transpose(self) -> "TriMatrix":
        return TriMatrix(self.col_keys, self.row_keys, tuple(zip(*self.rows)) if self.rows else ())

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> "TriMatrix":
        return TriMatrix(
            tuple(self.row_keys[i] for i in row_order),
            tuple(self.col_keys[j] for j in col_order),
            tuple(tuple(self.rows[i][j] for j in col_order) for i in row_order),
        )


def adjacency_matrix(g: Graph) -> TriMatrix:
    """0/1 adjacency matrix with rows and columns sorted by vertex id."""
    keys = tuple(sorted(g.vertices))
    rows = tuple(tuple(1 if g.has_edge(u, v) else 0 for v in keys) for u in keys)
    return TriMatrix(keys, keys, rows)


def matrix_to_text(m: TriMatrix) -> str:
    lines = [
        f"matrix {len(m.row_keys)} {len(m.col_keys)}",
        " ".join(m.row_keys),
        " ".join(m.col_keys),
    ]
    lines.extend("".join(_SYMBOLS[v] for v in row) for row in m.rows)
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> TriMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("matrix "):
        raise FormatError("matrix file must start with a 'matrix <rows> <cols>' header")
    try:
        _, nr, nc = lines[0].split()
        nr, nc = int(nr), int(nc)
    except ValueError as exc:
        raise FormatError(f"bad matrix header: {lines[0]!r}") from exc
    if len(lines) != 3 + nr:
        raise FormatError("matrix body does not match the header row count")
    row_keys = lines[1].split()
    col_keys = lines[2].split()
    if len(row_keys) != nr or len(col_keys) != nc:
        raise FormatError("key lines do not match the header counts")
    rows = []
    for ln in lines[3:]:
        if len(ln) != nc or any(ch not in _VALUES for ch in ln):
            raise FormatError(f"bad matrix row: {ln!r}")
        rows.append(tuple(_VALUES[ch] for ch in ln))
    return TriMatrix(tuple(row_keys), tuple(col_keys), tuple(rows))


# ---------------------------------------------------------------------------
# contractions and the red number


def _merge_lines(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x if x == y else RED for x, y in zip(a, b))


def contract_rows(m: TriMatrix, keep: str, drop: str) -> TriMatrix:
    if keep == drop:
        raise DomainError("cannot contract a row with itself")
    try:
        ki, di = m._row_pos[keep], m._row_pos[drop]
    except KeyError as exc:
        raise DomainError(f"unknown row key: {exc.args[0]!r}") from exc
    merged = _merge_lines(m.rows[ki], m.rows[di])
    rows = tuple(merged if i == ki else r for i, r in enumerate(m.rows) if i != di)
    keys = tuple(k for k in m.row_keys if k != drop)
    return TriMatrix(keys, m.col_keys, rows)


def contract_cols(m: TriMatrix, keep: str, drop: str) -> TriMatrix:
    return contract_rows(m.transpose(), keep, drop).transpose()


def red_number(m: TriMatrix) -> int:
    best = 0
    for row in m.rows:
        best = max(best, sum(1 for v in row if v == RED))
    for j in range(len(m.col_keys)):
        best = max(best, sum(1 for row in m.rows if row[j] == RED))
    return best


def replay_symmetric(m: TriMatrix, pairs: Sequence[tuple[str, str]]) -> list[int]:
    """Red numbers along a symmetric contraction sequence.

    Each pair (keep, drop) contracts the rows and then immediately the
    columns; the red number is recorded once per pair, after both, which is
    how symmetric sequences are displayed.  Index 0 is the input matrix.
    """
    if m.row_keys != m.col_keys:
        raise DomainError("symmetric replay needs identical row and column keys")
    out = [red_number(m)]
    for keep, drop in pairs:
        m = contract_cols(contract_rows(m, keep, drop), keep, drop)
        out.append(red_number(m))
    if len(m.row_keys) != 1:
        raise DomainError("symmetric sequence did not reach a 1x1 matrix")
    return out


# ---------------------------------------------------------------------------
# divisions, zones, mixed minors


@dataclass(frozen=True)
class Division:
    """Consecutive partitions of the row and column keys into nonempty blocks."""

    row_blocks: tuple[tuple[str, ...], ...]
    col_blocks: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        if any(not b for b in self.row_blocks) or any(not b for b in self.col_blocks):
            raise DomainError("division blocks must be nonempty")


@dataclass(frozen=True)
class MixedMinorWitness:
    division: Division
    # per zone (i, j): two row keys and two column keys that differ inside it
    zone_rows: dict[tuple[int, int], tuple[str, str]]
    zone_cols: dict[tuple[int, int], tuple[str, str]]

    def order(self) -> int:
        return len(self.division.row_blocks)

    def to_json(self) -> dict:
        return {
            "type": "mixed-minor-division",
            "permutation": None,
            "rows": [list(b) for b in self.division.row_blocks],
            "cols": [list(b) for b in self.division.col_blocks],
            "zones": {
                f"{i},{j}": {"rows": list(self.zone_rows[(i, j)]), "cols": list(self.zone_cols[(i, j)])}
                for (i, j) in sorted(self.zone_rows)
            },
            "verification": "pass",
        }


def _zone_mixed(m: TriMatrix, r0: int, r1: int, c0: int, c1: int) -> bool:
    if r1 - r0 < 2 or c1 - c0 < 2:
        return False
    first = m.rows[r0][c0:c1]
    if all(m.rows[i][c0:c1] == first for i in range(r0 + 1, r1)):
        return False
    fc = tuple(m.rows[i][c0] for i in range(r0, r1))
    return any(tuple(m.rows[i][j] for i in range(r0, r1)) != fc for j in range(c0 + 1, c1))


def _distinct_pair(vectors: list, keys: Sequence[str]) -> tuple[str, str] | None:
    for i in range(1, len(vectors)):
        if vectors[i] != vectors[0]:
            return (keys[0], keys[i])
    return None


def _compositions(total: int, parts: int, minimum: int = 2):
    """All splits of range(total) into `parts` consecutive blocks of size >= minimum."""
    if total < parts * minimum:
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(minimum, total - (parts - 1) * minimum + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def _bounds(sizes: Sequence[int]) -> list[tuple[int, int]]:
    out, pos = [], 0
    for s in sizes:
        out.append((pos, pos + s))
        pos += s
    return out


def _greedy_axis(mixed, n: int, k: int, fixed_bounds: list[tuple[int, int]]) -> list[tuple[int, int]] | None:
    """Cut [0, n) into k blocks, each mixed against every fixed block.

    Cutting each block at the earliest feasible point is complete: mixedness
    only grows when a block is extended, so any valid cut dominates the
    greedy one.
    """
    cuts = []
    start = 0
    for t in range(k - 1):
        limit = n - (k - 1 - t) * 2
        end = None
        for e in range(start + 2, limit + 1):
            if all(mixed(start, e, c0, c1) for c0, c1 in fixed_bounds):
                end = e
                break
        if end is None:
            return None
        cuts.append((start, end))
        start = end
    if n - start < 2 or not all(mixed(start, n, c0, c1) for c0, c1 in fixed_bounds):
        return None
    cuts.append((start, n))
    return cuts


def find_mixed_minor(m: TriMatrix, k: int) -> MixedMinorWitness | None:
    """Search all k-by-k divisions for one whose zones are all mixed.

    Enumerates compositions of the smaller axis (blocks of size >= 2, forced
    by mixedness) and closes the other axis greedily, which is equivalent to
    enumerating both axes.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    nr, nc = m.shape()
    if nr < 2 * k or nc < 2 * k:
        return None

    memo: dict[tuple[int, int, int, int], bool] = {}

    def mixed_rc(r0: int, r1: int, c0: int, c1: int) -> bool:
        key = (r0, r1, c0, c1)
        hit = memo.get(key)
        if hit is None:
            hit = memo[key] = _zone_mixed(m, r0, r1, c0, c1)
        return hit

    enumerate_cols = nc <= nr
    total = nc if enumerate_cols else nr
    other = nr if enumerate_cols else nc

    for sizes in _compositions(total, k):
        fixed = _bounds(sizes)
        if enumerate_cols:
            free = _greedy_axis(lambda a, b, c0, c1: mixed_rc(a, b, c0, c1), other, k, fixed)
            if free is not None:
                return _build_witness(m, free, fixed)
        else:
            free = _greedy_axis(lambda a, b, c0, c1: mixed_rc(c0, c1, a, b), other, k, fixed)
            if free is not None:
                return _build_witness(m, fixed, free)
    return None


def _build_witness(m: TriMatrix, row_bounds: list[tuple[int, int]], col_bounds: list[tuple[int, int]]) -> MixedMinorWitness:
    row_blocks = tuple(tuple(m.row_keys[r0:r1]) for r0, r1 in row_bounds)
    col_blocks = tuple(tuple(m.col_keys[c0:c1]) for c0, c1 in col_bounds)
    zone_rows: dict[tuple[int, int], tuple[str, str]] = {}
    zone_cols: dict[tuple[int, int], tuple[str, str]] = {}
    for i, (r0, r1) in enumerate(row_bounds):
        for j, (c0, c1) in enumerate(col_bounds):
            rvecs = [m.rows[r][c0:c1] for r in range(r0, r1)]
            cvecs = [tuple(m.rows[r][c] for r in range(r0, r1)) for c in range(c0, c1)]
            rpair = _distinct_pair(rvecs, m.row_keys[r0:r1])
            cpair = _distinct_pair(cvecs, m.col_keys[c0:c1])
            if rpair is None or cpair is None:
                raise DomainError("division has a non-mixed zone")
            zone_rows[(i, j)] = rpair
            zone_cols[(i, j)] = cpair
    return MixedMinorWitness(Division(row_blocks, col_blocks), zone_rows, zone_cols)


def verify_division_mixed(m: TriMatrix, division: Division) -> bool:
    """True iff every zone of the division is mixed (independent re-check)."""
    rb = _bounds([len(b) for b in division.row_blocks])
    cb = _bounds([len(b) for b in division.col_blocks])
    expected_rows = tuple(itertools.chain.from_iterable(division.row_blocks))
    expected_cols = tuple(itertools.chain.from_iterable(division.col_blocks))
    if expected_rows != m.row_keys or expected_cols != m.col_keys:
        return False
    return all(_zone_mixed(m, r0, r1, c0, c1) for r0, r1 in rb for c0, c1 in cb)


# ---------------------------------------------------------------------------
# permutation matrices


def permutation_matrix(word: Sequence[int]) -> TriMatrix:
    """The 0/1 matrix with a 1 at (i, word[i]).

    >>> permutation_matrix((2, 1)).rows
    ((0, 1), (1, 0))
    """
    from .graphs import check_permutation

    w = check_permutation(word)
    p = len(w)
    keys = tuple(str(i) for i in range(1, p + 1))
    rows = tuple(tuple(1 if w[i] == j + 1 else 0 for j in range(p)) for i in range(p))
    return TriMatrix(keys, keys, rows)


# ---------------------------------------------------------------------------
# exact twin-width of a matrix (partition-lattice walk)


@dataclass(frozen=True)
class MatrixSolveResult:
    value: int
    optimal: bool
    # each step: ("row"|"col", keep key, drop key); symmetric pairs expand to both
    sequence: tuple[tuple[str, str, str], ...]
    nodes_explored: int


Partition = tuple[tuple[int, ...], ...]


def _initial_partition(n: int) -> Partition:
    return tuple((i,) for i in range(n))


def _merge_groups(p: Partition, a: int, b: int) -> Partition:
    merged = tuple(sorted(p[a] + p[b]))
    rest = [g for i, g in enumerate(p) if i not in (a, b)]
    rest.append(merged)
    return tuple(sorted(rest))


def _quotient_red(values: tuple[tuple[int, ...], ...], rows_p: Partition, cols_p: Partition) -> int:
    red_in_row = [0] * len(rows_p)
    red_in_col = [0] * len(cols_p)
    for ri, rg in enumerate(rows_p):
        for ci, cg in enumerate(cols_p):
            cells = {values[i][j] for i in rg for j in cg}
            if len(cells) > 1 or RED in cells:
                red_in_row[ri] += 1
                red_in_col[ci] += 1
    return max(red_in_row + red_in_col, default=0)


def _quotient_lines(values, rows_p: Partition, cols_p: Partition):
    out = []
    for rg in rows_p:
        line = []
        for cg in cols_p:
            cells = {values[i][j] for i in rg for j in cg}
            line.append(cells.pop() if len(cells) == 1 else RED)
        out.append(tuple(line))
    return out


def _free_merge(lines: list[tuple[int, ...]]) -> tuple[int, int] | None:
    """A pair of identical quotient lines, if any; merging them first is optimal."""
    seen: dict[tuple[int, ...], int] = {}
    for i, line in enumerate(lines):
        if line in seen:
            return (seen[line], i)
        seen[line] = i
    return None


def matrix_twinwidth_exact(
    m: TriMatrix,
    symmetric: bool = False,
    cap: int = DEFAULT_MATRIX_BUDGET,
) -> MatrixSolveResult:
    """Exact matrix twin-width with an optimal contraction sequence.

    With ``symmetric=True`` every row contraction is immediately followed by
    the same column contraction, and the red number is measured once per
    pair.  If rows + cols exceeds ``cap`` the greedy bound is returned with
    ``optimal=False`` instead of an exhaustive answer.
    """
    nr, nc = m.shape()
    if symmetric and m.row_keys != m.col_keys:
        raise DomainError("symmetric solving needs identical row and column keys")
    if nr + nc > cap:
        return matrix_twinwidth_greedy(m, symmetric)

    values = m.rows
    nodes = 0
    memo: dict[object, tuple[int, tuple | None]] = {}

    if symmetric:

        # f(p) = best achievable red number from partition p on, p included.
        def solve_sym(p: Partition) -> tuple[int, tuple | None]:
            nonlocal nodes
            got = memo.get(p)
            if got is not None:
                return got
            nodes += 1
            lines = _quotient_lines(values, p, p)
            here = max(
                max((line.count(RED) for line in lines), default=0),
                max((col.count(RED) for col in zip(*lines)), default=0),
            )
            if len(p) == 1:
                memo[p] = (here, None)
                return (here, None)
            free = _free_merge(lines)
            pairs = [free] if free is not None else list(itertools.combinations(range(len(p)), 2))
            best, best_move = None, None
            for a, b in pairs:
                width, _ = solve_sym(_merge_groups(p, a, b))
                if best is None or width < best:
                    best, best_move = width, (p[a], p[b])
            result = (max(here, best), best_move)
            memo[p] = result
            return result

        start = _initial_partition(nr)
        value = solve_sym(start)[0]
        steps: list[tuple[str, str, str]] = []
        p = start
        while len(p) > 1:
            _, move = solve_sym(p)
            ga, gb = move
            keep = m.row_keys[min(ga + gb)]
            drop = m.row_keys[min(gb if min(ga) < min(gb) else ga)]
            steps.append(("row", keep, drop))
            steps.append(("col", keep, drop))
            p = _merge_groups(p, p.index(ga), p.index(gb))
        return MatrixSolveResult(value, True, tuple(steps), nodes)

    # f(state) = best achievable red number from this state on, itself included.
    def solve(rows_p: Partition, cols_p: Partition) -> tuple[int, tuple | None]:
        nonlocal nodes
        key = (rows_p, cols_p)
        got = memo.get(key)
        if got is not None:
            return got
        nodes += 1
        row_lines = _quotient_lines(values, rows_p, cols_p)
        here = max(
            max((line.count(RED) for line in row_lines), default=0),
            max((col.count(RED) for col in zip(*row_lines)), default=0),
        )
        if len(rows_p) == 1 and len(cols_p) == 1:
            memo[key] = (here, None)
            return (here, None)
        moves: list[tuple[str, int, int]] = []
        free = _free_merge(row_lines)
        if free is not None:
            moves = [("row", *free)]
        else:
            free = _free_merge([tuple(col) for col in zip(*row_lines)])
            if free is not None:
                moves = [("col", *free)]
            else:
                moves.extend(("row", a, b) for a, b in itertools.combinations(range(len(rows_p)), 2))
                moves.extend(("col", a, b) for a, b in itertools.combinations(range(len(cols_p)), 2))
        best, best_move = None, None
        for kind, a, b in moves:
            if kind == "row":
                nxt = (_merge_groups(rows_p, a, b), cols_p)
                merged_pair = (rows_p[a], rows_p[b])
            else:
                nxt = (rows_p, _merge_groups(cols_p, a, b))
                merged_pair = (cols_p[a], cols_p[b])
            width, _ = solve(*nxt)
            if best is None or width < best:
                best, best_move = width, (kind, *merged_pair)
        result = (max(here, best), best_move)
        memo[key] = result
        return result

    start = (_initial_partition(nr), _initial_partition(nc))
    value = solve(*start)[0]
    steps = []
    rows_p, cols_p = start
    while len(rows_p) > 1 or len(cols_p) > 1:
        _, move = solve(rows_p, cols_p)
        kind, ga, gb = move
        keys = m.row_keys if kind == "row" else m.col_keys
        keep = keys[min(ga + gb)]
        drop = keys[min(gb if min(ga) < min(gb) else ga)]
        steps.append((kind, keep, drop))
        if kind == "row":
            rows_p = _merge_groups(rows_p, rows_p.index(ga), rows_p.index(gb))
        else:
            cols_p = _merge_groups(cols_p, cols_p.index(ga), cols_p.index(gb))
    return MatrixSolveResult(value, True, tuple(steps), nodes)


def matrix_twinwidth_greedy(m: TriMatrix, symmetric: bool = False) -> MatrixSolveResult:
    """Upper bound: repeatedly take the merge minimizing the next red number."""
    if symmetric and m.row_keys != m.col_keys:
        raise DomainError("symmetric solving needs identical row and column keys")
    values = m.rows
    nr, nc = m.shape()
    value = red_number(m)
    steps: list[tuple[str, str, str]] = []
    nodes = 0

    if symmetric:
        p = _initial_partition(nr)
        while len(p) > 1:
            best = None
            for a, b in itertools.combinations(range(len(p)), 2):
                nxt = _merge_groups(p, a, b)
                nodes += 1
                cand = (_quotient_red(values, nxt, nxt), m.row_keys[min(p[a] + p[b])], a, b)
                if best is None or cand < best:
                    best = cand
            red, _, a, b = best
            keep = m.row_keys[min(p[a] + p[b])]
            drop = m.row_keys[min(p[b] if min(p[a]) < min(p[b]) else p[a])]
            steps.append(("row", keep, drop))
            steps.append(("col", keep, drop))
            value = max(value, red)
            p = _merge_groups(p, a, b)
        return MatrixSolveResult(value, False, tuple(steps), nodes)

    rows_p, cols_p = _initial_partition(nr), _initial_partition(nc)
    while len(rows_p) > 1 or len(cols_p) > 1:
        best = None
        for kind, groups in (("row", rows_p), ("col", cols_p)):
            for a, b in itertools.combinations(range(len(groups)), 2):
                nodes += 1
                if kind == "row":
                    nxt = (_merge_groups(rows_p, a, b), cols_p)
                else:
                    nxt = (rows_p, _merge_groups(cols_p, a, b))
                keys = m.row_keys if kind == "row" else m.col_keys
                cand = (_quotient_red(values, *nxt), kind, keys[min(groups[a] + groups[b])], a, b)
                if best is None or cand < best:
                    best = cand
        red, kind, _, a, b = best
        groups = rows_p if kind == "row" else cols_p
        keys = m.row_keys if kind == "row" else m.col_keys
        keep = keys[min(groups[a] + groups[b])]
        drop = keys[min(groups[b] if min(groups[a]) < min(groups[b]) else groups[a])]
        steps.append((kind, keep, drop))
        value = max(value, red)
        if kind == "row":
            rows_p = _merge_groups(rows_p, a, b)
        else:
            cols_p = _merge_groups(cols_p, a, b)
    return MatrixSolveResult(value, False, tuple(steps), nodes)


# ---------------------------------------------------------------------------
# ordering diagnostics


def minor_free_ordering_exists(m: TriMatrix, t: int, cap: int = DEFAULT_ORDERING_CAP) -> bool:
    """Whether some row/column reordering of m has no (2t+2)-mixed minor.

    For a matrix of twin-width t such an ordering always exists; this is the
    exhaustive diagnostic used to cross-check the exact solver.
    """
    nr, nc = m.shape()
    if nr > cap or nc > cap:
        raise CapExceeded(f"ordering search cap {cap} exceeded ({nr}x{nc})")
    k = 2 * t + 2
    if 2 * k > min(nr, nc):
        return True  # no k blocks of size >= 2 fit, so no ordering can contain one
    for row_order in itertools.permutations(range(nr)):
        for col_order in itertools.permutations(range(nc)):
            if find_mixed_minor(m.permuted(row_order, col_order), k) is None:
                return True
    return False
