import csv
import io
import json

import pytest

from bernbound.cli import CLAIMS, SWEEP_COLUMNS, RunConfig, UsageError, _exit_status, main, to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_rows(capsys):
    code, out, _ = run(capsys, "eval", "--expr", "x^2", "--n", "10", "--points", "0.5", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["x", "f", "bernstein", "difference"]
    assert [float(v) for v in rows[1]] == pytest.approx([0.5, 0.25, 0.275, 0.025], abs=1e-15)


def test_eval_identity(capsys):
    code, out, _ = run(capsys, "eval", "--expr", "x", "--n", "10", "--points", "0.5", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["rows"][0] == {"x": 0.5, "f": 0.5, "bernstein": 0.5, "difference": 0.0}


def test_eval_syntax_error(capsys):
    code, out, err = run(capsys, "eval", "--expr", "sin(", "--n", "10")
    assert code == 2 and out == ""
    assert "offset 4" in err


def test_usage_errors(capsys):
    assert run(capsys, "eval", "--n", "3")[0] == 2
    assert run(capsys, "eval", "--expr", "x", "--builtin", "exp", "--n", "3")[0] == 2
    assert run(capsys, "eval", "--builtin", "nope", "--n", "3")[0] == 2
    assert run(capsys, "eval", "--expr", "x", "--n", "3", "--points", "1.5")[0] == 2
    assert run(capsys, "verify", "--expr", "x", "--claims", "eq9.9")[0] == 2
    assert run(capsys, "sweep", "--expr", "x", "--n-from", "1", "--n-to", "3")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "eval", "--expr", "log(x)", "--n", "3")[0] == 2


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(grid_points=16)
    with pytest.raises(UsageError):
        RunConfig(grid_points=4096)
    with pytest.raises(UsageError):
        RunConfig(slack=0.5)
    assert RunConfig(grid_points=17, slack=0.0).grid().grid_points == 17


def test_grid_env_override(capsys, monkeypatch):
    monkeypatch.setenv("BB_GRID_POINTS", "1025")
    code, out, _ = run(capsys, "verify", "--expr", "x^2", "--n", "20", "--claims", "eq1.5-upper")
    assert code == 0 and json.loads(out)["config"]["grid_points"] == 1025
    code, out, _ = run(capsys, "verify", "--expr", "x^2", "--n", "20", "--claims", "eq1.5-upper", "--grid", "513")
    assert json.loads(out)["config"]["grid_points"] == 513
    monkeypatch.setenv("BB_GRID_POINTS", "1024")
    assert run(capsys, "verify", "--expr", "x^2", "--n", "20")[0] == 2


def test_verify_square_all_hold(capsys):
    code, out, _ = run(capsys, "verify", "--expr", "x^2", "--n", "10,100")
    doc = json.loads(out)
    assert code == 0
    assert list(doc) == ["function", "config", "reports", "thresholds"]
    checked = [r for r in doc["reports"] if not r.get("skipped")]
    assert {r["claim_id"] for r in checked} == set(CLAIMS)
    assert all(r["holds"] for r in checked)


def test_verify_sin_corollary_violation(capsys):
    code, out, _ = run(capsys, "verify", "--expr", "sin(x)", "--claims", "cor1", "--n", "50")
    doc = json.loads(out)
    assert code == 3
    (r,) = doc["reports"]
    assert r["holds"] is None and r["hypothesis_ok"] is False and "m > 0" in r["note"]


def test_verify_affine_trivial(capsys):
    code, out, _ = run(capsys, "verify", "--expr", "1 + 0.5*x", "--n", "20")
    assert code == 0
    assert all(r["holds"] for r in json.loads(out)["reports"])


def test_exit_status_contract():
    ok = {"holds": True, "hypothesis_ok": True}
    bad = {"holds": False, "hypothesis_ok": True}
    violation = {"holds": None, "hypothesis_ok": False}
    report_only = {"holds": False, "hypothesis_ok": False}
    skipped = {"holds": None, "hypothesis_ok": False, "skipped": True}
    assert _exit_status([ok, skipped]) == 0
    assert _exit_status([ok, bad, violation]) == 1
    assert _exit_status([ok, violation]) == 3
    assert _exit_status([ok, report_only]) == 3


def test_hypothesis_exit_code(capsys):
    assert run(capsys, "verify", "--expr", "exp(x)", "--n", "2", "--claims", "cor1")[0] == 3
    assert run(capsys, "verify", "--expr", "x^2", "--n", "10", "--claims", "eq2.7")[0] == 3


def test_verify_is_deterministic(capsys):
    argv = ("verify", "--builtin", "atan", "--n", "7,30")
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b


def test_json_floats_have_17_digits():
    assert to_json({"a": 0.1, "b": [1, True, None]}) == '{\n  "a": 0.10000000000000001,\n  "b": [\n    1,\n    true,\n    null\n  ]\n}'


def test_sweep_square_ratio(capsys):
    code, out, _ = run(capsys, "sweep", "--expr", "x^2", "--n-from", "10", "--n-to", "100", "--n-step", "15")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert tuple(out.splitlines()[0].split(",")) == SWEEP_COLUMNS
    assert [int(r["n"]) for r in rows] == list(range(10, 101, 15))
    assert all(float(r["ratio"]) == pytest.approx(0.5, rel=1e-2) for r in rows)
    assert rows[0]["thmE_bound"] == "" and rows[-1]["thmE_bound"] != ""


def test_sweep_affine_zero(capsys):
    code, out, _ = run(capsys, "sweep", "--expr", "x", "--n-from", "5", "--n-to", "9")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert all(abs(float(r["err_norm"])) <= 1e-12 and abs(float(r["dt_modulus"])) <= 1e-12 for r in rows)
    assert all(r["ratio"] == "" and r["an_value"] == "" for r in rows)


def test_sweep_geometric_an_decay(capsys):
    code, out, _ = run(capsys, "sweep", "--expr", "exp(x)", "--n-from", "10", "--n-to", "10000", "--geometric")
    rows = list(csv.DictReader(io.StringIO(out)))
    ns = [int(r["n"]) for r in rows]
    an = [float(r["an_value"]) for r in rows]
    assert ns[0] == 10 and ns[-1] == 10000 and ns[1] == 20
    assert all(b < a for a, b in zip(an, an[1:]))
    by_n = dict(zip(ns, an))
    assert by_n[10] / by_n[80] >= 1.2 and by_n[80] / by_n[640] >= 1.2


def test_thresholds_exp(capsys):
    code, out, _ = run(capsys, "thresholds", "--expr", "exp(x)", "--n-max", "40")
    doc = json.loads(out)
    t = {e["formula_id"]: e for e in doc["thresholds"]}
    assert code == 0
    assert t["cor1-n1"]["n_value"] == 7567
    assert t["rem3-n2-w3phi"]["n_value"] > 1
    assert t["thm1-n1"]["n_value"] is None and "n_max" in t["thm1-n1"]["note"]


def test_thresholds_square(capsys):
    doc = json.loads(run(capsys, "thresholds", "--expr", "x^2", "--n-max", "30", "--mu0", "0.99")[1])
    t = {e["formula_id"]: e["n_value"] for e in doc["thresholds"]}
    assert t["thm1-n1"] == 2 and t["thm2-n0"] == 2


def test_thresholds_sin(capsys):
    doc = json.loads(run(capsys, "thresholds", "--builtin", "sin", "--n-max", "30")[1])
    t = {e["formula_id"]: e for e in doc["thresholds"]}
    assert t["cor1-n1"]["n_value"] is None
    assert t["rem3-n2-c4"]["n_value"] > 1 and t["rem3-n2-w3phi"]["n_value"] > 1


def test_examples_output(capsys):
    code, out, _ = run(capsys, "examples")
    doc = json.loads(out)
    assert code == 0
    consts = {c["name"]: c["digits12"] for c in doc["constants"]}
    assert consts["4/27"] == "0.148148148148"
    assert consts["max x*phi(x)^2 (grid)"] == "0.148148148148"
    assert consts["lambda0=32/(27*pi^3)"] == "0.0382240408097"
    assert consts["sin(1/2)"] == "0.479425538604"
    assert consts["sin(1/2)/4"] == "0.119856384651"
    t = {e["formula_id"]: e["n_value"] for e in doc["thresholds"]}
    assert t["ex2-cos-paper-printed"] == 1896 and t["ex2-cos-corollary-formula"] == 3508
    assert any("1896" in s and "3508" in s for s in doc["notes"])


def test_examples_human(capsys):
    code, out, _ = run(capsys, "examples", "--format", "human")
    assert code == 0
    assert "ex2-cos-paper-printed" in out and "3508" in out and "0.148148148148" in out
