"""Command-line surface.

Batch, non-interactive: each invocation runs one command and prints text (or
JSON with --json) to stdout.  Domain errors, including exceeded caps, exit
with code 1 and a diagnostic on stderr; usage errors exit with code 2.

File formats: graphs ``.g``, intervals ``.ivl``, chord diagrams ``.chd``,
matrices ``.mat``, formulas ``.fo`` (S-expressions), contraction sequences
``.seq`` with lines ``c <u> <v> <merged>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fologic, graphs, ilrep, obstruction, perturb, solver, trimatrix
from .errors import DomainError


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=False))


def _parse_pi(text: str) -> tuple[int, ...]:
    try:
        word = tuple(int(x) for x in text.split())
    except ValueError as exc:
        raise DomainError(f"--pi must be space-separated integers, got {text!r}") from exc
    return graphs.check_permutation(word)


def _load_rep(args) -> ilrep.IntervalLikeRep:
    if getattr(args, "intervals", None):
        intervals = ilrep.intervals_from_text(_read(args.intervals))
        kind = args.kind or ilrep.INTERVAL
        return ilrep.rep_from_intervals(intervals, kind)
    if getattr(args, "chords", None):
        rep = ilrep.rep_from_chords(ilrep.chords_from_text(_read(args.chords)))
        if args.kind and args.kind != ilrep.OVERLAP:
            raise DomainError("chord diagrams always decode as overlap graphs")
        return rep
    raise DomainError("need --intervals or --chords")


def _graph_json(g: graphs.Graph) -> dict:
    return {"vertices": sorted(g.vertices), "edges": [list(e) for e in sorted(g.edges)]}


def _solve_json(res) -> dict:
    if isinstance(res, solver.SolveResult):
        seq = [[s.u, s.v, s.merged] for s in res.sequence]
    else:
        seq = [list(step) for step in res.sequence]
    return {
        "value": res.value,
        "optimal": res.optimal,
        "sequence": seq,
        "nodes_explored": res.nodes_explored,
    }


# ---------------------------------------------------------------------------
# command handlers


def _cmd_decode(args) -> int:
    rep = _load_rep(args)
    g = ilrep.decode(rep)
    if args.json:
        _emit_json(_graph_json(g))
    else:
        print(graphs.graph_to_text(g, name=args.name), end="")
    return 0


def _cmd_ilmatrix(args) -> int:
    ilm = ilrep.build_ilmatrix(_load_rep(args))
    if args.json:
        _emit_json(
            {
                "rows": list(ilm.matrix.row_keys),
                "cols": list(ilm.matrix.col_keys),
                "entries": ["".join(str(v) for v in row) for row in ilm.matrix.rows],
            }
        )
    else:
        print(trimatrix.matrix_to_text(ilm.matrix), end="")
    return 0


def _cmd_condense(args) -> int:
    rep = _load_rep(args)
    condensed = ilrep.condense(rep, iso_cap=args.iso_cap)
    intervals = ilrep.rep_to_intervals(condensed)
    if args.json:
        _emit_json(
            {
                "kind": condensed.kind,
                "ends": len(condensed.ends),
                "intervals": [[i, l, r] for i, l, r in intervals],
            }
        )
    else:
        print(ilrep.intervals_to_text(intervals), end="")
    return 0


def _cmd_mixed_minor(args) -> int:
    m = trimatrix.matrix_from_text(_read(args.matrix))
    witness = trimatrix.find_mixed_minor(m, args.k)
    if args.json:
        _emit_json({"found": witness is not None, "witness": witness.to_json() if witness else None})
    elif witness is None:
        print("none")
    else:
        rows = " | ".join(",".join(b) for b in witness.division.row_blocks)
        cols = " | ".join(",".join(b) for b in witness.division.col_blocks)
        print(f"{args.k}-mixed minor found")
        print(f"row blocks: {rows}")
        print(f"col blocks: {cols}")
    return 0


def _cmd_tww(args) -> int:
    if args.action == "verify":
        g = graphs.graph_from_text(_read(args.graph))
        seq = graphs.sequence_from_text(_read(args.seq))
        verified = solver.verify_sequence(g, seq, args.claim)
        _emit_json({"verified": verified})
        return 0
    if args.action == "exact" and args.matrix:
        m = trimatrix.matrix_from_text(_read(args.matrix))
        res = trimatrix.matrix_twinwidth_exact(m, symmetric=args.symmetric, cap=args.cap)
    elif args.action == "exact":
        if not args.graph:
            raise DomainError("tww exact needs --graph or --matrix")
        res = solver.twinwidth_exact(graphs.graph_from_text(_read(args.graph)), cap=args.cap)
    else:
        if not args.graph:
            raise DomainError("tww greedy needs --graph")
        res = solver.twinwidth_greedy(graphs.graph_from_text(_read(args.graph)))
    if args.json:
        _emit_json(_solve_json(res))
    else:
        print(f"value {res.value}")
        print(f"optimal {str(res.optimal).lower()}")
        print(f"nodes_explored {res.nodes_explored}")
        for step in _solve_json(res)["sequence"]:
            print("c " + " ".join(str(x) for x in step))
    return 0


def _cmd_extract(args) -> int:
    word = _parse_pi(args.pi)
    rep = _load_rep(args)
    if args.what == "perm-submatrix":
        witness = obstruction.extract_perm_submatrix(ilrep.build_ilmatrix(rep), word)
    elif args.what == "circle-witness":
        witness = obstruction.circle_permutation_witness(ilrep.decode(rep), rep, word)
    else:
        witness = obstruction.interval_exposure_witness(ilrep.decode(rep), rep, word)
    payload = witness.to_json()
    if args.json:
        _emit_json(payload)
    else:
        print(f"type {payload['type']}")
        print(f"permutation {' '.join(str(v) for v in payload['permutation'])}")
        for key in ("rows", "cols", "vertices", "core"):
            if key in payload:
                print(f"{key} {' '.join(payload[key])}")
        print(f"verification {payload['verification']}")
    return 0


def _cmd_generate(args) -> int:
    word = _parse_pi(args.pi)
    if args.what == "permgraph":
        g = graphs.permutation_graph(word)
        extra = None
    elif args.what == "exposer":
        inst = obstruction.generate_exposer(word)
        g = inst.graph
        extra = {
            "core": list(inst.core),
            "side1": list(inst.side1),
            "side2": list(inst.side2),
            "intervals": [[i, l, r] for i, l, r in inst.intervals],
        }
    elif args.what == "hplus-circle":
        gadget = perturb.build_circle_gadget(word, args.r, exponent=args.exponent, cap=args.cap)
        g = gadget.graph
        extra = {"power_permutation": list(gadget.word), "exponent": gadget.orders.exponent}
    else:  # hplus-interval
        gadget = perturb.build_interval_gadget(
            word, args.r, u_power=args.u_power, exponent=args.exponent
        )
        inst = gadget.materialize(cap=args.cap)
        g = inst.graph
        extra = {
            "core_vertices": gadget.size,
            "u_power": gadget.u_power,
            "z_power": gadget.z_power,
        }
    if args.json:
        payload = _graph_json(g)
        if extra:
            payload.update(extra)
        _emit_json(payload)
    else:
        print(graphs.graph_to_text(g, name=args.name), end="")
    return 0


def _cmd_perturb(args) -> int:
    g = graphs.graph_from_text(_read(args.graph))
    script = []
    if args.sets:
        for part in args.sets.split(";"):
            part = part.strip()
            if part:
                script.append([v.strip() for v in part.split(",") if v.strip()])
    perturbed = perturb.apply_perturbation(g, script)
    if args.json:
        _emit_json(_graph_json(perturbed))
    else:
        print(graphs.graph_to_text(perturbed, name=args.name), end="")
    return 0


def _cmd_robustness(args) -> int:
    word = _parse_pi(args.pi)
    if args.mode == "sampled" and args.seed is None:
        raise DomainError("sampled mode needs --seed for reproducibility")
    if args.case == "circle":
        gadget = perturb.build_circle_gadget(word, args.r, exponent=args.exponent, cap=args.cap)
        report = perturb.verify_robustness_circle(
            gadget, mode=args.mode, samples=args.samples, seed=args.seed, budget=args.budget
        )
    else:
        gadget = perturb.build_interval_gadget(
            word, args.r, u_power=args.u_power, exponent=args.exponent
        )
        report = perturb.verify_robustness_interval(
            gadget, mode=args.mode, samples=args.samples, seed=args.seed, budget=args.budget
        )
    _emit_json(report.to_json())
    return 0 if not report.failures else 1


def _cmd_fo_check(args) -> int:
    rep = _load_rep(args)
    formula = fologic.parse_formula(_read(args.formula))
    if args.direct:
        value = fologic.modelcheck_direct(rep, formula, budget=args.budget)
    else:
        value = fologic.modelcheck_pipeline(rep, formula, budget=args.budget)
    _emit_json({"value": value})
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_rep_inputs(p: argparse.ArgumentParser, kinds: bool = True) -> None:
    p.add_argument("--intervals", help="interval file (.ivl)")
    p.add_argument("--chords", help="chord diagram file (.chd)")
    if kinds:
        p.add_argument("--kind", choices=ilrep.KINDS, help="decoding kind (default: interval for .ivl, overlap for .chd)")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="twinwidth", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", help="decode a representation into a graph")
    _add_rep_inputs(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--name", default="g")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("ilmatrix", help="emit the representation matrix")
    _add_rep_inputs(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_ilmatrix)

    p = sub.add_parser("condense", help="condense a representation")
    _add_rep_inputs(p)
    p.add_argument("--iso-cap", type=int, default=graphs.DEFAULT_ISO_CAP)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_condense)

    p = sub.add_parser("mixed-minor", help="search a matrix for a k-mixed minor")
    p.add_argument("--matrix", required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_mixed_minor)

    p = sub.add_parser("tww", help="twin-width: exact, greedy, or verify a sequence")
    p.add_argument("action", choices=("exact", "greedy", "verify"))
    p.add_argument("--graph")
    p.add_argument("--matrix")
    p.add_argument("--symmetric", action="store_true", help="matrix mode: contract rows and columns together")
    p.add_argument("--seq", help="verify: contraction sequence file")
    p.add_argument("--claim", type=int, help="verify: claimed width")
    p.add_argument("--cap", type=int, default=solver.DEFAULT_EXACT_CAP)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_tww)

    p = sub.add_parser("extract", help="extract an obstruction certificate")
    p.add_argument("what", choices=("perm-submatrix", "circle-witness", "exposure"))
    _add_rep_inputs(p)
    p.add_argument("--pi", required=True, help='permutation, e.g. "3 1 2"')
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("generate", help="generate graphs and gadgets")
    p.add_argument("what", choices=("permgraph", "exposer", "hplus-circle", "hplus-interval"))
    p.add_argument("--pi", required=True)
    p.add_argument("-r", type=int, default=0, help="perturbation budget for gadgets")
    p.add_argument("--exponent", type=int, help="override the power exponent")
    p.add_argument("--u-power", type=int, default=4, help="interval gadget inner power")
    p.add_argument("--cap", type=int, default=perturb.DEFAULT_GADGET_CAP)
    p.add_argument("--json", action="store_true")
    p.add_argument("--name", default="g")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("perturb", help="apply a perturbation script to a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--sets", default="", help='subsets, e.g. "a,b,c;b,d"')
    p.add_argument("--json", action="store_true")
    p.add_argument("--name", default="g")
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("robustness", help="verify gadget robustness under perturbations")
    p.add_argument("--case", choices=("circle", "interval"), required=True)
    p.add_argument("--pi", required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--exponent", type=int)
    p.add_argument("--u-power", type=int, default=4)
    p.add_argument("--cap", type=int, default=perturb.DEFAULT_GADGET_CAP)
    p.add_argument("--budget", type=int, default=1 << 20)
    p.set_defaults(func=_cmd_robustness)

    p = sub.add_parser("fo-check", help="first-order model checking on a representation")
    _add_rep_inputs(p)
    p.add_argument("--formula", required=True, help="formula file (.fo)")
    p.add_argument("--budget", type=int, default=fologic.DEFAULT_EVAL_BUDGET)
    p.add_argument("--direct", action="store_true", help="evaluate on the decoded graph instead of the matrix pipeline")
    p.set_defaults(func=_cmd_fo_check)

    return top


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
