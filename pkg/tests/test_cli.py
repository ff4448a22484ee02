import csv
import io
import json
import os
import shutil
import subprocess
import sys

import pytest

from twistor_jump_lab.cli import SCHEMA, main, to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out)


# classify

def test_classify_s2(capsys):
    code, doc = report(capsys, "classify", "--k", "4", "--a", "1", "--point", "1,0,0,0,0")
    assert code == 0
    assert doc["results"]["type"] == [2, 0]
    assert doc["results"]["I"] == "0" and doc["results"]["J"] == "0"
    (check,) = doc["checks"]
    assert check["status"] == "skip" and check["detail"].startswith("documented-deviation")


def test_classify_s1(capsys):
    code, doc = report(capsys, "classify", "--k", "4", "--a", "1", "--point", "0,0,0,0,1")
    assert code == 0 and doc["results"]["type"] == [4, -2]


def test_classify_generic(capsys):
    code, doc = report(capsys, "classify", "--k", "4", "--a", "1", "--point", "1,1,1,-1,1")
    assert code == 0
    assert doc["results"]["type"] == [1, 1]
    assert doc["results"]["I"] == "-1" and doc["results"]["J"] == "2"
    assert doc["checks"][0]["status"] == "pass"
    assert doc["results"]["survivors"] == {"-2": "2", "-1": "2", "0": "2", "1": "-2"}


def test_classify_other_k(capsys):
    code, doc = report(capsys, "classify", "--k", "3", "--point", "1,0,0,0")
    assert code == 0 and "I" not in doc["results"] and doc["checks"] == []


def test_classify_off_cone_is_skipped(capsys):
    code, doc = report(capsys, "classify", "--k", "4", "--point", "1,1,1,1,0")
    assert code == 0 and doc["checks"][0]["status"] == "skip"


@pytest.mark.parametrize("point", ["1,0,0,0", "1,0,0,0,0,0", "1,x,0,0,0", "1/0,0,0,0,0", "0.5,0,0,0,0"])
def test_classify_usage_errors(capsys, point):
    code, out, err = run(capsys, "classify", "--k", "4", "--point", point)
    assert code == 2 and out == "" and err.startswith("twjl classify:")


def test_classify_with_model_file(capsys, tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"k": 4, "terms": [{"c": "a", "m": -2, "j": 2}], "params": {}}))
    code, doc = report(capsys, "classify", "--k", "4", "--a", "1", "--point", "0,0,0,0,1", "--model", str(path))
    assert code == 0 and doc["results"]["type"] == [4, -2]
    assert doc["checks"][0]["status"] == "skip"


def test_classify_model_errors(capsys, tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"k": 3, "terms": []}))
    assert run(capsys, "classify", "--k", "4", "--point", "0,0,0,0,1", "--model", str(path))[0] == 2
    assert run(capsys, "classify", "--k", "4", "--point", "0,0,0,0,1", "--model", str(tmp_path / "none"))[0] == 2
    path.write_text("{")
    assert run(capsys, "classify", "--k", "4", "--point", "0,0,0,0,1", "--model", str(path))[0] == 2


# ghpotential

def test_ghpotential_k3(capsys):
    code, doc = report(capsys, "ghpotential", "--k", "3")
    assert code == 0
    assert doc["results"] == {"numerator": "-X^2+Y^2+3Z^2", "denominator": "4a^3(X+Y)^{5/2}"}


def test_ghpotential_value(capsys):
    code, doc = report(capsys, "ghpotential", "--k", "4", "--at", "3,1,1")
    assert code == 0
    assert doc["results"]["value"] == "19/512"
    assert doc["results"]["value_float"] == 19 / 512
    code, doc = report(capsys, "ghpotential", "--k", "4", "--at", "2,1,1")
    assert doc["results"]["value"] == "1/81*sqrt(3)"


def test_ghpotential_float_has_17_digits(capsys):
    code, out, _ = run(capsys, "ghpotential", "--k", "4", "--at", "2,1,1", "--json")
    line = next(l for l in out.splitlines() if "value_float" in l)
    assert line.strip() == '"value_float": 2.1383343303319473e-02'


@pytest.mark.parametrize("argv", [["--k", "1"], ["--k", "3", "--at", "-1,0,1"], ["--k", "3", "--at", "1,1"],
                                  ["--k", "3", "--a", "0"], ["--k", "3", "--a", "0", "--dump-grid"]])
def test_ghpotential_usage_errors(capsys, argv):
    if "--at" in argv:
        i = argv.index("--at")
        argv[i:i + 2] = [f"--at={argv[i + 1]}"]
    code, out, err = run(capsys, "ghpotential", *argv)
    assert code == 2 and out == "" and err


def test_dump_grid(capsys):
    code, out, _ = run(capsys, "ghpotential", "--k", "2", "--dump-grid")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows
    assert all(float(r["X"]) + float(r["Y"]) > 0 for r in rows)
    row = next(r for r in rows if (r["X"], r["Y"], r["Z"]) == ("1.0", "0.0", "1.0"))
    assert float(row["V"]) == -0.5


# verify

def test_verify_cascade(capsys):
    code, doc = report(capsys, "verify", "--suite", "cascade")
    assert code == 0
    assert doc["results"]["cascade_types"] == {
        "S1": [4, -2], "S2": [2, 0], "S3": [3, -1], "S4": [2, 0], "S5": [2, 0], "S6": [2, 0]}
    statuses = {c["name"]: c["status"] for c in doc["checks"]}
    assert statuses["quartic.S2"] == statuses["quartic.S4"] == "skip"


def test_verify_potentials_waves_pass(capsys):
    code, doc = report(capsys, "verify", "--suite", "potentials")
    statuses = {c["name"]: c["status"] for c in doc["checks"]}
    assert all(statuses[f"wave.k{k}"] == "pass" for k in range(2, 7))
    # the k=3 tabulated sign disagrees, so the suite exits 1
    assert statuses["closed_form.k3"] == "fail" and code == 1
    assert all(c["detail"] for c in doc["checks"] if c["status"] == "fail")


def test_verify_text_output(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "schrodinger")
    assert code == 0
    assert "PASS" in out and out.rstrip().endswith("0 fail, 0 skip")


def test_unknown_suite_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nope"])
    assert exc.value.code == 2


def test_report_schema(capsys):
    _, doc = report(capsys, "verify", "--suite", "legendre", "--seed", "3")
    assert set(doc) == {"schema", "command", "inputs", "results", "checks", "seed"}
    assert doc["schema"] == SCHEMA and doc["seed"] == 3
    assert all(set(c) == {"name", "status", "detail"} for c in doc["checks"])


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("TWJL_SEED", "11")
    _, doc = report(capsys, "verify", "--suite", "schrodinger")
    assert doc["seed"] == 11
    _, doc = report(capsys, "verify", "--suite", "schrodinger", "--seed", "4")
    assert doc["seed"] == 4
    monkeypatch.setenv("TWJL_SEED", "x")
    assert run(capsys, "verify", "--suite", "schrodinger")[0] == 2


def test_to_json_float_rendering():
    text = to_json({"a": 0.1, "b": [1.0], "c": "0.1"})
    assert json.loads(text) == {"a": 0.1, "b": [1.0], "c": "0.1"}
    assert "1.0000000000000001e-01" in text


def _twjl():
    exe = shutil.which("twjl")
    return [exe] if exe else [sys.executable, "-m", "twistor_jump_lab.cli"]


def test_verify_all_is_byte_identical():
    env = dict(os.environ)
    env.pop("TWJL_SEED", None)
    argv = _twjl() + ["verify", "--suite", "all", "--seed", "7", "--json"]
    first = subprocess.run(argv, capture_output=True, env=env)
    second = subprocess.run(argv, capture_output=True, env=env)
    assert first.stdout == second.stdout and first.stdout
    assert first.returncode == second.returncode == 1
    doc = json.loads(first.stdout)
    failed = sorted(c["name"] for c in doc["checks"] if c["status"] == "fail")
    assert failed == ["curvature.resultant.k2_folded", "potentials.closed_form.k3",
                      "sparling-tod.sign_change.eps+1.sphere"]


def test_usage_error_via_entry_point():
    done = subprocess.run(_twjl() + ["classify", "--k", "4", "--point", "1,2"], capture_output=True, text=True)
    assert done.returncode == 2 and "twjl classify" in done.stderr and done.stdout == ""
