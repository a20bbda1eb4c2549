"""Command-line behavior: formats, determinism, exit codes."""

import json

import pytest

import gmalg as G
from gmalg.cli import main
from gmalg.fileformat import dumps_canonical, map_to_dict

from test_decompose import t2_worked_example


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def gen(tmp_path, capsys, name, *argv):
    path = tmp_path / name
    code, _, err = run(capsys, "gen", *argv, "-o", str(path))
    assert code == 0, err
    return str(path)


def test_gen_and_validate_full_matrix(tmp_path, capsys):
    spec = gen(tmp_path, capsys, "m3.json",
               "--kind", "full-matrix", "--r", "3", "--field", "gf:7")
    code, out, _ = run(capsys, "validate", spec)
    assert code == 0
    rep = json.loads(out)
    assert rep["checks"][0] == {"name": "context-valid", "status": "pass"}
    assert rep["instance"]["dims"]["total"] == 9


def test_round_trip_is_byte_identical(tmp_path, capsys):
    spec = gen(tmp_path, capsys, "m3.json",
               "--kind", "full-matrix", "--r", "3", "--field", "gf:7")
    raw = open(spec).read()
    from gmalg.fileformat import context_to_dict, load_context
    ctx, _ = load_context(spec)
    assert dumps_canonical(context_to_dict(ctx)) == raw


def test_reports_deterministic_outside_timings(tmp_path, capsys):
    spec = gen(tmp_path, capsys, "t2.json",
               "--kind", "upper-triangular", "--s", "1", "--t", "1",
               "--field", "q")
    _, out1, _ = run(capsys, "hypotheses", spec, "--theorem", "4.1")
    _, out2, _ = run(capsys, "hypotheses", spec, "--theorem", "4.1")
    r1, r2 = json.loads(out1), json.loads(out2)
    r1.pop("timings")
    r2.pop("timings")
    assert r1 == r2


def test_hypotheses_exit_codes(tmp_path, capsys):
    m3 = gen(tmp_path, capsys, "m3.json",
             "--kind", "full-matrix", "--r", "3", "--field", "gf:7")
    code, out, _ = run(capsys, "hypotheses", m3, "--theorem", "4.1")
    assert code == 0
    assert all(c["status"] == "pass" for c in json.loads(out)["checks"])

    t2 = gen(tmp_path, capsys, "t2.json",
             "--kind", "upper-triangular", "--s", "1", "--t", "1", "--field", "q")
    code, out, _ = run(capsys, "hypotheses", t2, "--theorem", "4.1")
    assert code == 1
    statuses = {c["name"]: c["status"] for c in json.loads(out)["checks"]}
    assert statuses["hypothesis-4.1-(2)"] == "fail"


def test_center_report(tmp_path, capsys):
    spec = gen(tmp_path, capsys, "m3.json",
               "--kind", "full-matrix", "--r", "3", "--field", "q")
    code, out, _ = run(capsys, "center", spec)
    assert code == 0
    rep = json.loads(out)
    assert rep["details"]["center_g"]["dim"] == 1
    assert rep["details"]["a_to_b"]["entries"] == [["1"]]


def test_derivations_arities(tmp_path, capsys):
    spec = gen(tmp_path, capsys, "m2.json",
               "--kind", "full-matrix", "--r", "2", "--field", "q")
    code, out, _ = run(capsys, "derivations", spec)
    assert code == 0
    assert json.loads(out)["details"]["dim"] == 3
    code, out, _ = run(capsys, "derivations", spec, "--lie")
    assert json.loads(out)["details"]["dim"] == 4
    code, out, _ = run(capsys, "derivations", spec, "--lie", "--arity", "2")
    assert code == 0
    assert json.loads(out)["details"]["dim"] == 2
    code, _, err = run(capsys, "derivations", spec, "--arity", "2")
    assert code == 2
    assert "--lie" in err


def test_extremal_report(tmp_path, capsys):
    spec = gen(tmp_path, capsys, "t2.json",
               "--kind", "upper-triangular", "--s", "1", "--t", "1", "--field", "q")
    code, out, _ = run(capsys, "extremal", spec)
    assert code == 0
    rep = json.loads(out)
    assert rep["details"]["exists"] is True
    assert rep["checks"][0]["status"] == "pass"


def test_decompose_worked_example(tmp_path, capsys):
    g, kappa, psi = t2_worked_example()
    phi = kappa.add(psi)
    spec = gen(tmp_path, capsys, "t2.json",
               "--kind", "upper-triangular", "--s", "1", "--t", "1", "--field", "q")
    map_path = tmp_path / "phi.json"
    map_path.write_text(dumps_canonical(map_to_dict(phi)))
    code, out, _ = run(capsys, "decompose", spec, str(map_path), "--arity", "3")
    assert code == 0
    rep = json.loads(out)
    assert rep["details"]["seed"]["coords"] == ["0", "1", "0"]
    assert all(c["status"] == "pass" for c in rep["checks"])


def test_decompose_arity_mismatch(tmp_path, capsys):
    g, kappa, _ = t2_worked_example()
    spec = gen(tmp_path, capsys, "t2.json",
               "--kind", "upper-triangular", "--s", "1", "--t", "1", "--field", "q")
    map_path = tmp_path / "k.json"
    map_path.write_text(dumps_canonical(map_to_dict(kappa)))
    code, _, err = run(capsys, "decompose", spec, str(map_path), "--arity", "2")
    assert code == 2
    assert "arity" in err


def test_verify_exit_codes(tmp_path, capsys):
    m3 = gen(tmp_path, capsys, "m3.json",
             "--kind", "full-matrix", "--r", "3", "--field", "gf:7")
    code, out, _ = run(capsys, "verify", m3, "--arity", "3")
    assert code == 0
    rep = json.loads(out)
    assert rep["details"]["theorem_applicable"] is True
    assert rep["details"]["space_dim"] == 1

    t2 = gen(tmp_path, capsys, "t2.json",
             "--kind", "upper-triangular", "--s", "1", "--t", "1", "--field", "q")
    code, out, _ = run(capsys, "verify", t2, "--arity", "3")
    assert code == 1  # hypothesis records fail even though nothing is asserted
    rep = json.loads(out)
    assert rep["details"]["theorem_applicable"] is False
    assert rep["details"]["space_dim"] > 0


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2
    assert "invalid JSON" in err


def test_invalid_context_load_refused(tmp_path, capsys):
    spec = gen(tmp_path, capsys, "m2.json",
               "--kind", "full-matrix", "--r", "2", "--field", "q")
    data = json.loads(open(spec).read())
    data["pair_mn"] = data["pair_mn"] + [[0, 0, 0, "1"]]
    broken = tmp_path / "broken.json"
    broken.write_text(dumps_canonical(data))
    # analysis commands refuse to load an invalid context
    code, _, err = run(capsys, "center", str(broken))
    assert code == 2
    # but validate reports the violations with exit 1
    code, out, _ = run(capsys, "validate", str(broken))
    assert code == 1
    rep = json.loads(out)
    assert rep["checks"][0]["status"] == "fail"
    assert len(rep["checks"]) > 1


def test_budget_exit_code(tmp_path, capsys, monkeypatch):
    spec = gen(tmp_path, capsys, "m3.json",
               "--kind", "full-matrix", "--r", "3", "--field", "gf:7")
    monkeypatch.setenv("GMALG_BUDGET", "10")
    code, _, err = run(capsys, "verify", spec, "--arity", "3")
    assert code == 3
    assert "budget" in err.lower()


def test_gen_requires_dimension_flags(capsys):
    code, _, err = run(capsys, "gen", "--kind", "full-matrix", "--field", "q")
    assert code == 2
    code, _, err = run(capsys, "gen", "--kind", "zero-pairing", "--field", "q")
    assert code == 2


def test_gen_field_guards(capsys, tmp_path):
    code, _, err = run(capsys, "gen", "--kind", "full-matrix", "--r", "3",
                       "--field", "gf:2", "-o", str(tmp_path / "x.json"))
    assert code == 2
    code, _, err = run(capsys, "gen", "--kind", "full-matrix", "--r", "1",
                       "--field", "q", "-o", str(tmp_path / "x.json"))
    assert code == 2
