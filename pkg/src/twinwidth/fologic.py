"""First-order formulas over finite binary structures, by brute force.

Formulas are plain syntax trees; structures carry a finite domain, named
binary relations and named unary marks.  Evaluation expands quantifiers over
the domain with short-circuiting, an operation budget, and memoization of
subformula truth per assignment of its free variables.

Interpretations rewrite formulas instead of structures where needed: a graph
formula is translated onto a representation matrix structure (domain rows
and columns, relations A1/A2 marking the 1- and 2-entries) so that both
evaluations agree.  The text syntax is a small S-expression grammar, e.g.
``(exists x (exists y (edge x y)))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BudgetExceeded, DomainError, FormatError
from .graphs import Graph, permutation_from_orders
from .ilrep import IlMatrix, IntervalLikeRep, INTERVAL, OVERLAP, build_ilmatrix, condense, decode
from .trimatrix import TriMatrix

DEFAULT_EVAL_BUDGET = 10_000_000


# ---------------------------------------------------------------------------
# syntax


class Formula:
    @cached_property
    def free_vars(self) -> frozenset[str]:
        raise NotImplementedError

    @cached_property
    def _free_sorted(self) -> tuple[str, ...]:
        return tuple(sorted(self.free_vars))


@dataclass(frozen=True)
class TrueF(Formula):
    @cached_property
    def free_vars(self):
        return frozenset()


@dataclass(frozen=True)
class FalseF(Formula):
    @cached_property
    def free_vars(self):
        return frozenset()


@dataclass(frozen=True)
class Atom(Formula):
    rel: str
    args: tuple[str, ...]

    @cached_property
    def free_vars(self):
        return frozenset(self.args)


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str

    @cached_property
    def free_vars(self):
        return frozenset((self.left, self.right))


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    @cached_property
    def free_vars(self):
        return self.body.free_vars


@dataclass(frozen=True)
class And(Formula):
    parts: tuple[Formula, ...]

    @cached_property
    def free_vars(self):
        return frozenset().union(*(p.free_vars for p in self.parts)) if self.parts else frozenset()


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple[Formula, ...]

    @cached_property
    def free_vars(self):
        return frozenset().union(*(p.free_vars for p in self.parts)) if self.parts else frozenset()


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    @cached_property
    def free_vars(self):
        return self.left.free_vars | self.right.free_vars


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula

    @cached_property
    def free_vars(self):
        return self.body.free_vars - {self.var}


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula

    @cached_property
    def free_vars(self):
        return self.body.free_vars - {self.var}


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _read(tokens: list[str], pos: int):
    if pos >= len(tokens):
        raise FormatError("unexpected end of formula")
    tok = tokens[pos]
    if tok == ")":
        raise FormatError("unexpected ')'")
    if tok != "(":
        return tok, pos + 1
    items = []
    pos += 1
    while pos < len(tokens) and tokens[pos] != ")":
        item, pos = _read(tokens, pos)
        items.append(item)
    if pos >= len(tokens):
        raise FormatError("missing ')'")
    return items, pos + 1


def _build(expr) -> Formula:
    if isinstance(expr, str):
        if expr == "true":
            return TrueF()
        if expr == "false":
            return FalseF()
        raise FormatError(f"bare symbol {expr!r} is not a formula")
    if not expr or not isinstance(expr[0], str):
        raise FormatError(f"bad form: {expr!r}")
    head, rest = expr[0], expr[1:]
    if head in ("exists", "forall"):
        if len(rest) != 2 or not isinstance(rest[0], str):
            raise FormatError(f"{head} needs a variable and a body")
        cls = Exists if head == "exists" else Forall
        return cls(rest[0], _build(rest[1]))
    if head == "not":
        if len(rest) != 1:
            raise FormatError("not takes one argument")
        return Not(_build(rest[0]))
    if head == "and":
        return And(tuple(_build(e) for e in rest))
    if head == "or":
        return Or(tuple(_build(e) for e in rest))
    if head in ("imp", "->"):
        if len(rest) != 2:
            raise FormatError("imp takes two arguments")
        return Implies(_build(rest[0]), _build(rest[1]))
    if head == "=":
        if len(rest) != 2 or not all(isinstance(a, str) for a in rest):
            raise FormatError("= takes two variables")
        return Eq(rest[0], rest[1])
    if not all(isinstance(a, str) for a in rest):
        raise FormatError(f"relation arguments must be variables: {expr!r}")
    return Atom(head, tuple(rest))


def parse_formula(text: str) -> Formula:
    tokens = _tokenize(text)
    expr, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise FormatError("trailing input after the formula")
    return _build(expr)


def formula_to_text(f: Formula) -> str:
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Atom):
        return f"({f.rel} {' '.join(f.args)})"
    if isinstance(f, Eq):
        return f"(= {f.left} {f.right})"
    if isinstance(f, Not):
        return f"(not {formula_to_text(f.body)})"
    if isinstance(f, And):
        return f"(and {' '.join(formula_to_text(p) for p in f.parts)})"
    if isinstance(f, Or):
        return f"(or {' '.join(formula_to_text(p) for p in f.parts)})"
    if isinstance(f, Implies):
        return f"(imp {formula_to_text(f.left)} {formula_to_text(f.right)})"
    if isinstance(f, Exists):
        return f"(exists {f.var} {formula_to_text(f.body)})"
    if isinstance(f, Forall):
        return f"(forall {f.var} {formula_to_text(f.body)})"
    raise DomainError(f"unknown formula node {f!r}")


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, (TrueF, FalseF, Atom, Eq)):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, (And, Or)):
        return max((quantifier_depth(p) for p in f.parts), default=0)
    if isinstance(f, Implies):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 1 + quantifier_depth(f.body)


# ---------------------------------------------------------------------------
# structures


@dataclass(frozen=True)
class Structure:
    domain: tuple[str, ...]
    relations: dict[str, frozenset[tuple[str, str]]]
    marks: dict[str, frozenset[str]]

    def __post_init__(self) -> None:
        dom = set(self.domain)
        if len(dom) != len(self.domain):
            raise DomainError("duplicate domain elements")
        for name, rel in self.relations.items():
            for a, b in rel:
                if a not in dom or b not in dom:
                    raise DomainError(f"relation {name!r} leaves the domain")
        for name, mk in self.marks.items():
            if not mk <= dom:
                raise DomainError(f"mark {name!r} leaves the domain")


def graph_structure(g: Graph, marks: dict[str, Iterable[str]] | None = None) -> Structure:
    sym = frozenset((u, v) for u, v in g.edges) | frozenset((v, u) for u, v in g.edges)
    mk = {name: frozenset(vs) for name, vs in (marks or {}).items()}
    return Structure(tuple(sorted(g.vertices)), {"edge": sym}, mk)


def matrix_structure(m: TriMatrix | IlMatrix) -> Structure:
    mat = m.matrix if isinstance(m, IlMatrix) else m
    dom = tuple(mat.row_keys) + tuple(k for k in mat.col_keys if k not in set(mat.row_keys))
    a1, a2 = set(), set()
    for rk, row in zip(mat.row_keys, mat.rows):
        for ck, v in zip(mat.col_keys, row):
            if v == 1:
                a1.add((rk, ck))
            elif v == 2:
                a2.add((rk, ck))
    return Structure(dom, {"A1": frozenset(a1), "A2": frozenset(a2)}, {})


def structure_to_graph(st: Structure, relation: str = "edge") -> Graph:
    rel = st.relations.get(relation, frozenset())
    edges = []
    for a, b in rel:
        if a == b:
            raise DomainError("edge relation is not irreflexive")
        if (b, a) not in rel:
            raise DomainError("edge relation is not symmetric")
        if a < b:
            edges.append((a, b))
    return Graph.build(st.domain, edges)


# ---------------------------------------------------------------------------
# evaluation


def evaluate(st: Structure, f: Formula, budget: int = DEFAULT_EVAL_BUDGET) -> bool:
    """Truth of a closed formula by exhaustive quantifier expansion."""
    if f.free_vars:
        raise DomainError(f"formula has free variables: {sorted(f.free_vars)}")
    return _eval(st, f, {}, [budget], {})


def _eval(st: Structure, f: Formula, env: dict[str, str], budget: list[int], memo: dict) -> bool:
    key = (id(f), tuple(env[v] for v in f._free_sorted))
    hit = memo.get(key)
    if hit is not None:
        return hit
    value = _eval_raw(st, f, env, budget, memo)
    memo[key] = value
    return value


def _eval_raw(st: Structure, f: Formula, env, budget, memo) -> bool:
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Atom):
        if len(f.args) == 1:
            mark = st.marks.get(f.rel)
            if mark is None:
                raise DomainError(f"unknown mark {f.rel!r}")
            return env[f.args[0]] in mark
        if len(f.args) == 2:
            rel = st.relations.get(f.rel)
            if rel is None:
                raise DomainError(f"unknown relation {f.rel!r}")
            return (env[f.args[0]], env[f.args[1]]) in rel
        raise DomainError(f"relation {f.rel!r} has unsupported arity {len(f.args)}")
    if isinstance(f, Not):
        return not _eval(st, f.body, env, budget, memo)
    if isinstance(f, And):
        return all(_eval(st, p, env, budget, memo) for p in f.parts)
    if isinstance(f, Or):
        return any(_eval(st, p, env, budget, memo) for p in f.parts)
    if isinstance(f, Implies):
        return (not _eval(st, f.left, env, budget, memo)) or _eval(st, f.right, env, budget, memo)
    if isinstance(f, (Exists, Forall)):
        want = isinstance(f, Exists)
        shadow = env.get(f.var)
        for el in st.domain:
            budget[0] -= 1
            if budget[0] < 0:
                raise BudgetExceeded("evaluation budget exhausted")
            env[f.var] = el
            got = _eval(st, f.body, env, budget, memo)
            if got == want:
                _restore(env, f.var, shadow)
                return want
        _restore(env, f.var, shadow)
        return not want
    raise DomainError(f"unknown formula node {f!r}")


def _restore(env: dict[str, str], var: str, shadow: str | None) -> None:
    if shadow is None:
        env.pop(var, None)
    else:
        env[var] = shadow


# ---------------------------------------------------------------------------
# interpretations


@dataclass(frozen=True)
class Interpretation:
    """Domain formula plus one defining formula per output relation."""

    domain_var: str
    domain_formula: Formula
    relations: dict[str, tuple[tuple[str, ...], Formula]]


def _subst(f: Formula, mapping: dict[str, str], fresh: itertools.count) -> Formula:
    """Rename via mapping; bound variables are freshened to avoid capture."""
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Atom):
        return Atom(f.rel, tuple(mapping.get(a, a) for a in f.args))
    if isinstance(f, Eq):
        return Eq(mapping.get(f.left, f.left), mapping.get(f.right, f.right))
    if isinstance(f, Not):
        return Not(_subst(f.body, mapping, fresh))
    if isinstance(f, And):
        return And(tuple(_subst(p, mapping, fresh) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_subst(p, mapping, fresh) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(_subst(f.left, mapping, fresh), _subst(f.right, mapping, fresh))
    if isinstance(f, (Exists, Forall)):
        new = f"_q{next(fresh)}"
        inner = dict(mapping)
        inner[f.var] = new
        cls = Exists if isinstance(f, Exists) else Forall
        return cls(new, _subst(f.body, inner, fresh))
    raise DomainError(f"unknown formula node {f!r}")


def interpret(iota: Interpretation, st: Structure, budget: int = DEFAULT_EVAL_BUDGET) -> Structure:
    """Apply an interpretation structure-side (domain and relations pointwise)."""
    budget_box = [budget]
    memo: dict = {}
    dom = [
        a
        for a in st.domain
        if _eval(st, iota.domain_formula, {iota.domain_var: a}, budget_box, memo)
    ]
    rels = {}
    for name, (params, body) in iota.relations.items():
        if len(params) != 2:
            raise DomainError("only binary output relations are supported")
        pairs = set()
        for a, b in itertools.product(dom, repeat=2):
            if _eval(st, body, {params[0]: a, params[1]: b}, budget_box, memo):
                pairs.add((a, b))
        rels[name] = frozenset(pairs)
    return Structure(tuple(dom), rels, {})


def _domain_formula() -> tuple[str, Formula]:
    return "x", Exists("c", Atom("A1", ("x", "c")))


def _core_formula(x: str, y: str) -> Formula:
    # first end of x before first end of y, and y starting inside x
    return And(
        (
            Forall("c", Or((Not(Atom("A2", (x, "c"))), Atom("A2", (y, "c"))))),
            Forall("c", Implies(Atom("A1", (x, "c")), Not(Atom("A2", (y, "c"))))),
        )
    )


def _second_end_before(x: str, y: str) -> Formula:
    # the 1-column of x is at most the 1-column of y, read off the 2-prefixes
    return Forall(
        "c",
        Implies(
            Atom("A1", (x, "c")),
            Forall(
                "d",
                Implies(
                    Atom("A1", (y, "d")),
                    Forall("rr", Implies(Atom("A2", ("rr", "d")), Atom("A2", ("rr", "c")))),
                ),
            ),
        ),
    )


def interval_interpretation() -> Interpretation:
    var, dom = _domain_formula()
    edge = And(
        (
            Not(Eq("x", "y")),
            Or((_core_formula("x", "y"), _core_formula("y", "x"))),
        )
    )
    return Interpretation(var, dom, {"edge": (("x", "y"), edge)})


def overlap_interpretation() -> Interpretation:
    var, dom = _domain_formula()
    edge = And(
        (
            Not(Eq("x", "y")),
            Or(
                (
                    And((_core_formula("x", "y"), _second_end_before("x", "y"))),
                    And((_core_formula("y", "x"), _second_end_before("y", "x"))),
                )
            ),
        )
    )
    return Interpretation(var, dom, {"edge": (("x", "y"), edge)})


def interpretation_for(kind: str) -> Interpretation:
    if kind == INTERVAL:
        return interval_interpretation()
    if kind == OVERLAP:
        return overlap_interpretation()
    raise DomainError(f"unknown kind {kind!r}")


def rewrite(iota: Interpretation, f: Formula, fresh: itertools.count | None = None) -> Formula:
    """Translate a formula over the output signature into the source one.

    Quantifiers are relativized to the interpreted domain and relation atoms
    are replaced by their defining formulas, so evaluating the result on the
    source structure agrees with evaluating f on the interpreted structure.
    """
    fresh = fresh if fresh is not None else itertools.count()
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Eq):
        return f
    if isinstance(f, Atom):
        if f.rel not in iota.relations:
            raise DomainError(f"relation {f.rel!r} is not defined by the interpretation")
        params, body = iota.relations[f.rel]
        if len(params) != len(f.args):
            raise DomainError(f"arity mismatch for {f.rel!r}")
        return _subst(body, dict(zip(params, f.args)), fresh)
    if isinstance(f, Not):
        return Not(rewrite(iota, f.body, fresh))
    if isinstance(f, And):
        return And(tuple(rewrite(iota, p, fresh) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(rewrite(iota, p, fresh) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(rewrite(iota, f.left, fresh), rewrite(iota, f.right, fresh))
    guard = _subst(iota.domain_formula, {iota.domain_var: f.var}, fresh)
    if isinstance(f, Exists):
        return Exists(f.var, And((guard, rewrite(iota, f.body, fresh))))
    if isinstance(f, Forall):
        return Forall(f.var, Implies(guard, rewrite(iota, f.body, fresh)))
    raise DomainError(f"unknown formula node {f!r}")


# ---------------------------------------------------------------------------
# marked-order transduction


def _leq_formula(mark: str, x: str, y: str) -> Formula:
    return Forall(
        "z",
        Implies(
            Atom(mark, ("z",)),
            Implies(Atom("edge", (x, "z")), Atom("edge", (y, "z"))),
        ),
    )


def _linear_order_formula(mark_domain: str, mark: str) -> Formula:
    def guarded(vars_: Sequence[str], body: Formula) -> Formula:
        out = body
        for v in reversed(vars_):
            out = Forall(v, Implies(Atom(mark_domain, (v,)), out))
        return out

    leq = lambda a, b: _leq_formula(mark, a, b)
    total = guarded(("x", "y"), Or((leq("x", "y"), leq("y", "x"))))
    antisym = guarded(("x", "y"), Implies(And((leq("x", "y"), leq("y", "x"))), Eq("x", "y")))
    transitive = guarded(
        ("x", "y", "z2"),
        Implies(And((leq("x", "y"), leq("y", "z2"))), leq("x", "z2")),
    )
    return And((total, antisym, transitive))


def transduce_permutation(
    g: Graph,
    core: Iterable[str],
    side1: Iterable[str],
    side2: Iterable[str],
    budget: int = DEFAULT_EVAL_BUDGET,
) -> tuple[int, ...] | None:
    """Read a permutation off three vertex marks, or None.

    The i-th order compares marked core vertices by inclusion of their
    neighbourhoods into side i.  If both comparisons are linear orders on the
    core, the permutation carrying one order to the other is returned.
    """
    core, side1, side2 = frozenset(core), frozenset(side1), frozenset(side2)
    if core & side1 or core & side2 or side1 & side2:
        raise DomainError("marks must be disjoint")
    st = graph_structure(g, {"m": core, "m1": side1, "m2": side2})
    for mark in ("m1", "m2"):
        if not evaluate(st, _linear_order_formula("m", mark), budget):
            return None

    def sort_key(mark: str):
        def leq(a: str, b: str) -> bool:
            side = side1 if mark == "m1" else side2
            na = g.neighbors(a) & side
            nb = g.neighbors(b) & side
            return na <= nb

        return lambda v: sum(1 for w in core if leq(w, v))

    first = sorted(core, key=sort_key("m1"))
    second = sorted(core, key=sort_key("m2"))
    return permutation_from_orders(first, second)


def transduction_image(g: Graph, cap: int = 6, budget: int = DEFAULT_EVAL_BUDGET) -> set[tuple[int, ...]]:
    """All permutations obtainable from some disjoint mark assignment (n <= cap)."""
    vs = sorted(g.vertices)
    if len(vs) > cap:
        raise BudgetExceeded(f"exhaustive mark expansion cap {cap} exceeded")
    out: set[tuple[int, ...]] = set()
    for assignment in itertools.product(range(4), repeat=len(vs)):
        marks: list[list[str]] = [[], [], [], []]
        for v, a in zip(vs, assignment):
            marks[a].append(v)
        got = transduce_permutation(g, marks[1], marks[2], marks[3], budget)
        if got is not None:
            out.add(got)
    return out


# ---------------------------------------------------------------------------
# the model-checking pipeline


def modelcheck_pipeline(
    rep: IntervalLikeRep,
    f: Formula,
    budget: int = DEFAULT_EVAL_BUDGET,
    iso_cap: int | None = None,
) -> bool:
    """Condense, build the representation matrix, rewrite, evaluate there."""
    from .graphs import DEFAULT_ISO_CAP

    condensed = condense(rep, iso_cap if iso_cap is not None else DEFAULT_ISO_CAP)
    ilm = build_ilmatrix(condensed)
    rewritten = rewrite(interpretation_for(rep.kind), f)
    return evaluate(matrix_structure(ilm), rewritten, budget)


def modelcheck_direct(rep: IntervalLikeRep, f: Formula, budget: int = DEFAULT_EVAL_BUDGET) -> bool:
    """Oracle path: evaluate on the decoded graph itself."""
    return evaluate(graph_structure(decode(rep)), f, budget)


def modelcheck_interval_graph(
    g: Graph,
    f: Formula,
    budget: int = DEFAULT_EVAL_BUDGET,
    iso_cap: int | None = None,
) -> bool:
    """Pipeline entry for a bare interval graph: recognize a model first.

    Sentences are isomorphism-invariant, so answering on the recognized
    model's decoding answers for g.
    """
    from .ilrep import recognize_interval, rep_from_intervals

    model = recognize_interval(g)
    if model is None:
        raise DomainError("graph is not an interval graph")
    return modelcheck_pipeline(rep_from_intervals(model, INTERVAL), f, budget, iso_cap)
