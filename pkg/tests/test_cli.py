"""CLI surface: golden files (one per command), exit codes, JSON schemas."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from twinwidth.cli import run
from conftest import DATA

GOLDEN = DATA / "golden"
SCHEMAS = Path(__file__).parent.parent / "docs" / "schemas"


def run_cli(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


def check_golden(name: str, got: str):
    path = GOLDEN / name
    expected = path.read_text()
    assert got == expected, f"output differs from golden {name}"


def load_schema(name: str) -> dict:
    return json.loads((SCHEMAS / name).read_text())


def test_golden_decode(capsys):
    code, out = run_cli(capsys, "decode", "--intervals", str(DATA / "demo6.ivl"), "--name", "demo6")
    assert code == 0
    check_golden("decode.txt", out)


def test_golden_ilmatrix(capsys):
    code, out = run_cli(capsys, "ilmatrix", "--intervals", str(DATA / "demo6.ivl"))
    assert code == 0
    assert out == (DATA / "demo6.mat.golden").read_text()


def test_golden_condense(capsys):
    code, out = run_cli(capsys, "condense", "--intervals", str(DATA / "p3slack.ivl"))
    assert code == 0
    check_golden("condense.txt", out)


def test_golden_mixed_minor(capsys):
    code, out = run_cli(capsys, "mixed-minor", "--matrix", str(DATA / "demo6.mat.golden"), "-k", "2")
    assert code == 0
    check_golden("mixed-minor.txt", out)


def test_golden_tww_verify(capsys):
    code, out = run_cli(
        capsys, "tww", "verify",
        "--graph", str(DATA / "demo5.g"), "--seq", str(DATA / "demo5.seq"), "--claim", "2",
    )
    assert code == 0
    assert json.loads(out) == {"verified": True}
    jsonschema.validate(json.loads(out), load_schema("verify.schema.json"))
    check_golden("tww-verify.txt", out)


def test_golden_extract(capsys):
    code, out = run_cli(
        capsys, "extract", "perm-submatrix",
        "--intervals", str(DATA / "planted1.ivl"), "--kind", "overlap", "--pi", "1", "--json",
    )
    assert code == 0
    jsonschema.validate(json.loads(out), load_schema("witness.schema.json"))
    check_golden("extract.txt", out)


def test_golden_generate(capsys):
    code, out = run_cli(capsys, "generate", "exposer", "--pi", "2 1", "--json")
    assert code == 0
    check_golden("generate.txt", out)


def test_golden_perturb(capsys):
    code, out = run_cli(capsys, "perturb", "--graph", str(DATA / "demo5.g"), "--sets", "a,b,c")
    assert code == 0
    check_golden("perturb.txt", out)


def test_golden_robustness(capsys):
    code, out = run_cli(capsys, "robustness", "--case", "circle", "--pi", "1", "-r", "0")
    assert code == 0
    jsonschema.validate(json.loads(out), load_schema("robustness.schema.json"))
    check_golden("robustness.txt", out)


def test_golden_fo_check(capsys):
    code, out = run_cli(
        capsys, "fo-check", "--intervals", str(DATA / "demo6.ivl"),
        "--formula", str(DATA / "dominating.fo"),
    )
    assert code == 0
    check_golden("fo-check.txt", out)


def test_fo_check_direct_agrees(capsys):
    _, pipeline = run_cli(
        capsys, "fo-check", "--intervals", str(DATA / "demo6.ivl"),
        "--formula", str(DATA / "dominating.fo"),
    )
    _, direct = run_cli(
        capsys, "fo-check", "--intervals", str(DATA / "demo6.ivl"),
        "--formula", str(DATA / "dominating.fo"), "--direct",
    )
    assert json.loads(pipeline) == json.loads(direct)


def test_solver_json_schema(capsys):
    code, out = run_cli(capsys, "tww", "exact", "--graph", str(DATA / "demo5.g"), "--json")
    assert code == 0
    jsonschema.validate(json.loads(out), load_schema("solve.schema.json"))
    # over the default cap the matrix solver falls back to the greedy bound
    code, out = run_cli(
        capsys, "tww", "exact", "--matrix", str(DATA / "demo6.mat.golden"), "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["optimal"] is False
    jsonschema.validate(payload, load_schema("solve.schema.json"))


def test_tww_matrix_symmetric_and_greedy(capsys):
    code, out = run_cli(
        capsys, "tww", "exact", "--graph", str(DATA / "demo5.g"), "--cap", "10", "--json"
    )
    exact_value = json.loads(out)["value"]
    code, out = run_cli(capsys, "tww", "greedy", "--graph", str(DATA / "demo5.g"), "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["optimal"] is False and payload["value"] >= exact_value
    jsonschema.validate(payload, load_schema("solve.schema.json"))

    import twinwidth.graphs as graphs
    import twinwidth.trimatrix as trimatrix

    g = graphs.graph_from_text((DATA / "demo5.g").read_text())
    adj = trimatrix.matrix_to_text(trimatrix.adjacency_matrix(g))
    (DATA / "golden").parent  # noqa: B018 - path sanity
    tmp = DATA / "demo5.adj.mat"
    tmp.write_text(adj)
    try:
        code, out = run_cli(capsys, "tww", "exact", "--matrix", str(tmp), "--symmetric", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["optimal"] is True
        assert abs(payload["value"] - exact_value) <= 1
    finally:
        tmp.unlink()


def test_decode_chords_kind_validation(capsys):
    assert run(["decode", "--chords", str(DATA / "demo7.chd"), "--kind", "interval"]) == 1
    capsys.readouterr()


def test_witness_schema_other_types(capsys):
    code, out = run_cli(
        capsys, "mixed-minor", "--matrix", str(DATA / "demo6.mat.golden"), "-k", "2", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["found"]
    jsonschema.validate(payload["witness"], load_schema("witness.schema.json"))

    code, out = run_cli(
        capsys, "extract", "circle-witness",
        "--intervals", str(DATA / "planted1.ivl"), "--kind", "overlap", "--pi", "1", "--json",
    )
    assert code == 0
    jsonschema.validate(json.loads(out), load_schema("witness.schema.json"))

    code, out = run_cli(
        capsys, "extract", "exposure",
        "--intervals", str(DATA / "planted1.ivl"), "--pi", "1", "--json",
    )
    assert code == 0
    jsonschema.validate(json.loads(out), load_schema("witness.schema.json"))


def test_exit_codes(capsys):
    assert run(["tww", "exact", "--graph", "does-not-exist.g"]) == 1
    capsys.readouterr()
    with pytest.raises(SystemExit) as exc:
        run(["unknown-command"])
    assert exc.value.code == 2
    capsys.readouterr()
    assert run(["robustness", "--case", "circle", "--pi", "1", "-r", "1", "--mode", "sampled"]) == 1
    capsys.readouterr()


def test_console_script_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "twinwidth.cli", "generate", "permgraph", "--pi", "2 1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "e 1 2" in proc.stdout
