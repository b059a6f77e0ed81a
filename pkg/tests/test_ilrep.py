import itertools
import random

import pytest

from twinwidth.errors import DomainError
from twinwidth.graphs import Graph, is_isomorphic
from twinwidth.ilrep import (
    INTERVAL,
    OVERLAP,
    ChordDiagram,
    IntervalLikeRep,
    build_ilmatrix,
    chords_from_text,
    chords_to_text,
    condense,
    decode,
    decode_from_matrix,
    intervals_from_text,
    intervals_to_text,
    interval_vertex_map,
    pair_name,
    recognize_interval,
    rep_from_chords,
    rep_from_intervals,
    rep_to_intervals,
    unify,
    validate_ilmatrix,
)
from twinwidth.trimatrix import TriMatrix, matrix_to_text
from conftest import DEMO6_INTERVALS, oracle_chord_crossings, oracle_interval_graph


def random_intervals(rng, n, span=8):
    out, seen = [], set()
    while len(out) < n:
        l = rng.randint(0, span)
        r = rng.randint(l, span)
        if (l, r) not in seen:
            seen.add((l, r))
            out.append((f"i{len(out)}", l, r))
    return out


def random_diagram(rng, n):
    labels = [f"x{i}" for i in range(n)] * 2
    rng.shuffle(labels)
    return ChordDiagram(tuple(labels))


def test_rep_from_intervals_demo6(demo6_rep):
    assert demo6_rep.ends == ("a", "b", "c", "d", "e")
    assert sorted(demo6_rep.pairs) == [
        ("a", "c"), ("b", "c"), ("b", "e"), ("c", "d"), ("d", "d"), ("d", "e"),
    ]


def test_rep_from_intervals_degenerate():
    rep = rep_from_intervals([("v", 0, 0)], INTERVAL)
    assert len(rep.ends) == 1 and rep.pairs == frozenset({("a", "a")})
    g = decode(rep)
    assert len(g.vertices) == 1 and not g.edges


def test_rep_from_intervals_disjoint_pair():
    rep = rep_from_intervals([("x", 0, 1), ("y", 5, 6)], INTERVAL)
    assert not decode(rep).edges


def test_rep_from_intervals_rejections():
    with pytest.raises(DomainError):
        rep_from_intervals([("x", 0, 1), ("y", 0, 1)], INTERVAL)
    with pytest.raises(DomainError):
        rep_from_intervals([("x", 2, 1)], INTERVAL)


def test_rep_from_chords_demo7():
    diagram = ChordDiagram(tuple("a b c a d e c f d b g e f g".split()))
    rep = rep_from_chords(diagram)
    assert rep.kind == OVERLAP
    assert ("a1", "a2") in rep.pairs and ("g1", "g2") in rep.pairs
    g = decode(rep)
    # nesting spot checks: b contains d (no edge), b crosses e (edge)
    assert not g.has_edge("(b1,b2)", "(d1,d2)")
    assert g.has_edge("(b1,b2)", "(e1,e2)")
    crossing = oracle_chord_crossings(diagram.sequence)
    for x, y in itertools.combinations(sorted(diagram.chords()), 2):
        names = tuple(sorted((f"({x}1,{x}2)", f"({y}1,{y}2)")))
        assert g.has_edge(*names) == (frozenset((x, y)) in crossing)


def test_single_chord_and_small_diagrams():
    assert len(decode(rep_from_chords(ChordDiagram(("k", "k")))).vertices) == 1
    crossing = decode(rep_from_chords(ChordDiagram(("x", "y", "x", "y"))))
    assert len(crossing.edges) == 1
    nested = decode(rep_from_chords(ChordDiagram(("x", "y", "y", "x"))))
    assert not nested.edges


def test_decode_demo6_both_kinds(demo6_rep, demo6_rep_overlap):
    gi = decode(demo6_rep)
    go = decode(demo6_rep_overlap)
    assert len(gi.edges) == 11 and len(go.edges) == 9
    assert gi.has_edge("(b,e)", "(d,d)")
    assert not go.has_edge("(b,e)", "(d,d)")
    assert not go.has_edge("(b,e)", "(c,d)")
    assert go.has_edge("(b,e)", "(d,e)")
    assert oracle_interval_graph(DEMO6_INTERVALS, INTERVAL) == {
        frozenset((u, v)) for u, v in relabel_to_inputs(gi).edges
    }
    assert oracle_interval_graph(DEMO6_INTERVALS, OVERLAP) == {
        frozenset((u, v)) for u, v in relabel_to_inputs(go).edges
    }


def relabel_to_inputs(g):
    mapping = {v: k for k, v in interval_vertex_map(DEMO6_INTERVALS).items()}
    return g.relabel(mapping)


def test_build_ilmatrix_demo6_rows(demo6_rep):
    ilm = build_ilmatrix(demo6_rep)
    text = matrix_to_text(ilm.matrix)
    assert text == (
        "matrix 10 5\n"
        "(a,a) (a,c) (b,b) (b,c) (b,e) (c,c) (c,d) (d,d) (d,e) (e,e)\n"
        "a b c d e\n"
        "00000\n00100\n20000\n20100\n20001\n22000\n22010\n22210\n22201\n22220\n"
    )


def test_build_ilmatrix_degenerate_cases():
    k1 = rep_from_intervals([("v", 0, 0)], INTERVAL)
    m = build_ilmatrix(k1).matrix
    assert m.rows == ((1,),)

    dummy_only = IntervalLikeRep(("s", "t"), frozenset(), INTERVAL)
    m2 = build_ilmatrix(dummy_only).matrix
    assert m2.rows == ((0, 0), (2, 0))
    assert decode_from_matrix(m2, INTERVAL).vertices == frozenset()


def test_ilmatrix_invariants_random():
    rng = random.Random(7)
    for _ in range(60):
        kind = rng.choice((INTERVAL, OVERLAP))
        rep = rep_from_intervals(random_intervals(rng, rng.randint(1, 7)), kind)
        ilm = build_ilmatrix(rep)
        validate_ilmatrix(ilm.matrix)
        firsts = [ilm.row_pairs[k][0] for k in ilm.matrix.row_keys]
        for key, row in zip(ilm.matrix.row_keys, ilm.matrix.rows):
            ones = row.count(1)
            assert ones == (1 if ilm.row_pairs[key] in rep.pairs else 0)
        # rows sharing the first end are consecutive
        seen = {}
        for pos, f in enumerate(firsts):
            if f in seen:
                assert firsts[pos - 1] == f
            seen[f] = pos


def test_decode_from_matrix_round_trip_random():
    rng = random.Random(8)
    for _ in range(80):
        kind = rng.choice((INTERVAL, OVERLAP))
        rep = rep_from_intervals(random_intervals(rng, rng.randint(1, 7)), kind)
        assert decode_from_matrix(build_ilmatrix(rep), kind) == decode(rep)


def test_decode_from_matrix_rejects_malformed():
    bad = TriMatrix.build(["r1", "r2"], ["c1", "c2"], [[2, 2], [0, 0]])
    with pytest.raises(DomainError):
        decode_from_matrix(bad, INTERVAL)
    bad2 = TriMatrix.build(["r1", "r2"], ["c1", "c2"], [[0, 2], [0, 0]])
    with pytest.raises(DomainError):
        decode_from_matrix(bad2, INTERVAL)


def test_unify_examples(demo6_rep):
    rep = IntervalLikeRep(("a", "b", "c"), frozenset({("a", "c"), ("b", "c")}), INTERVAL)
    merged, legal = unify(rep, "a", "b")
    assert not legal and merged.pairs == frozenset({("a", "c")})

    untouched = IntervalLikeRep(("a", "b", "c"), frozenset({("a", "a")}), INTERVAL)
    merged, legal = unify(untouched, "b", "c")
    assert legal
    assert decode(merged) == decode(untouched)

    _, legal = unify(demo6_rep, "a", "b")
    assert not legal

    with pytest.raises(DomainError):
        unify(demo6_rep, "a", "c")


def test_unify_catches_degenerate_point_collision():
    rep = IntervalLikeRep(("a", "b"), frozenset({("a", "a"), ("b", "b")}), INTERVAL)
    merged, legal = unify(rep, "a", "b")
    assert not legal and len(merged.pairs) == 1


def test_condense_fixed_point_and_unused_ends():
    rep = IntervalLikeRep(("a", "b", "c"), frozenset({("a", "c")}), INTERVAL)
    once = condense(rep)
    assert condense(once) == once
    assert len(once.ends) == 1

    # every consecutive unification of the result is illegal or changes the graph
    for i in range(len(once.ends) - 1):
        merged, legal = unify(once, once.ends[i], once.ends[i + 1])
        assert not (legal and is_isomorphic(decode(once), decode(merged)))


def test_condense_p3_minimal():
    rep = rep_from_intervals([("x", 0, 10), ("y", 9, 20), ("z", 19, 30)], INTERVAL)
    out = condense(rep)
    p3 = decode(out)
    assert sorted(len(p3.neighbors(v)) for v in p3.vertices) == [1, 1, 2]
    # one end cannot carry three distinct pairs, so 2 ends is minimal
    assert len(out.ends) == 2


def test_condense_output_admits_no_legal_preserving_unification():
    rng = random.Random(9)
    for _ in range(25):
        kind = rng.choice((INTERVAL, OVERLAP))
        rep = rep_from_intervals(random_intervals(rng, rng.randint(1, 5)), kind)
        out = condense(rep)
        assert is_isomorphic(decode(out), decode(rep))
        for i in range(len(out.ends) - 1):
            merged, legal = unify(out, out.ends[i], out.ends[i + 1])
            if legal:
                assert not is_isomorphic(decode(out), decode(merged))


def test_condense_raises_over_iso_cap():
    from twinwidth.errors import CapExceeded
    from twinwidth.obstruction import planted_mixed_minor_rep

    inst = planted_mixed_minor_rep(1, INTERVAL)  # 13-vertex decoding
    with pytest.raises(CapExceeded):
        condense(inst.rep, iso_cap=12)
    assert condense(inst.rep, iso_cap=14) == inst.rep


def test_recognize_interval_roundtrip():
    rng = random.Random(10)
    for _ in range(20):
        intervals = random_intervals(rng, rng.randint(1, 6))
        rep = rep_from_intervals(intervals, INTERVAL)
        g = decode(rep)
        model = recognize_interval(g)
        assert model is not None
        rebuilt = decode(rep_from_intervals(model, INTERVAL))
        mapping = interval_vertex_map(model)
        assert g.relabel(mapping) == rebuilt
    c4 = Graph.build("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")])
    assert recognize_interval(c4) is None


def test_interval_text_roundtrip():
    from fractions import Fraction

    intervals = [("x", Fraction(1, 2), Fraction(3, 2)), ("y", 0, 2)]
    assert intervals_from_text(intervals_to_text(intervals)) == [
        ("x", Fraction(1, 2), Fraction(3, 2)),
        ("y", Fraction(0), Fraction(2)),
    ]
    diagram = ChordDiagram(("a", "b", "a", "b"))
    assert chords_from_text(chords_to_text(diagram)) == diagram


def test_rep_to_intervals_roundtrip(demo6_rep):
    out = rep_to_intervals(demo6_rep)
    rebuilt = rep_from_intervals(out, INTERVAL)
    assert rebuilt.pairs == demo6_rep.pairs and rebuilt.ends == demo6_rep.ends
