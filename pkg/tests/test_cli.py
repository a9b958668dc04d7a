import csv
import io
import json
import subprocess
import sys

import pytest

from stirling_records.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_stirling_all_agrees(capsys):
    code, env = run_json(capsys, "stirling", "--n", "6", "--d", "4", "--method", "all")
    assert code == 0
    assert env["schema_version"] == "1" and env["command"] == "stirling"
    rows = env["results"]
    assert len(rows) == 6 and {r["value"] for r in rows} == {"65"}
    assert all(r["agreement"] is True for r in rows)


@pytest.mark.parametrize("args,value", [
    (("--n", "5", "--d", "5", "--method", "euler"), "1"),
    (("--n", "7", "--d", "3", "--method", "record-dp"), "301"),
])
def test_stirling_single(capsys, args, value):
    code, env = run_json(capsys, "stirling", *args)
    assert code == 0 and env["results"][0]["value"] == value


@pytest.mark.parametrize("d,n,which,coeffs,degree", [
    ("3", "3", "g", ["6"], "0"),
    ("1", "2", "f", ["-1", "2"], "1"),
    ("2", "3", "g-stirling", ["-6", "6"], "1"),
])
def test_poly(capsys, d, n, which, coeffs, degree):
    code, env = run_json(capsys, "poly", "--d", d, "--n", n, "--which", which)
    assert code == 0
    assert [r["coeff"] for r in env["results"]] == coeffs
    assert {r["degree"] for r in env["results"]} == {degree}


def test_simulate_forced(capsys):
    code, env = run_json(capsys, "simulate", "--n", "1", "--d", "1", "--x", "1", "--trials", "100", "--seed", "3")
    (row,) = env["results"]
    assert code == 0 and row["estimate"] == 1.0 and row["exact"] == "1"
    assert row["z_score"] is None and row["z_defined"] is False


def test_simulate_pinned(capsys):
    code, env = run_json(capsys, "simulate", "--n", "3", "--d", "2", "--x", "4",
                         "--trials", "1000000", "--seed", "1")
    (row,) = env["results"]
    assert row["exact"] == "9/32" and abs(row["z_score"]) <= 5


def test_verify_default(capsys):
    code, env = run_json(capsys, "verify", "--n-max", "8")
    assert code == 0
    rows = {r["identity_id"]: r for r in env["results"]}
    assert all(rows[f"I{i}"]["status"] == "pass" for i in range(1, 13))
    assert rows["D1"]["status"] == "fail" and rows["D1"]["diagnostic"] is True
    assert rows["D1"]["cx_lhs"] != rows["D1"]["cx_rhs"]


def test_verify_only(capsys):
    code, env = run_json(capsys, "verify", "--n-max", "1", "--only", "I2")
    assert code == 0 and [r["status"] for r in env["results"]] == ["pass"]
    code, env = run_json(capsys, "verify", "--n-max", "6", "--only", "I9", "--detail")
    cell = next(r for r in env["results"] if (r["n"], r["d"]) == ("6", "4"))
    assert cell["lhs"] == cell["rhs"] == "65"


def test_bench_counts(capsys):
    code, env = run_json(capsys, "bench", "--n", "14", "--d", "7", "--methods", "record,record-dp")
    rec, dp = env["results"]
    assert code == 0 and rec["value"] == dp["value"]
    assert int(dp["mults"]) < int(rec["mults"])
    code, env = run_json(capsys, "bench", "--n", "5", "--d", "5", "--methods", "record,record-dp,euler,duality")
    assert {r["value"] for r in env["results"]} == {"1"}


def test_json_round_trip_and_csv_parity(capsys):
    for argv in (["stirling", "--n", "6", "--d", "4", "--method", "all"],
                 ["simulate", "--n", "3", "--d", "2", "--x", "9/2", "--trials", "5000", "--seed", "2"],
                 ["verify", "--n-max", "4"]):
        _, text = run(capsys, *argv)
        env = json.loads(text)
        assert json.dumps(env, sort_keys=True, indent=2) + "\n" == text
        _, text_csv = run(capsys, *argv, "--format", "csv")
        rows = csv_rows(text_csv)
        assert len(rows) == len(env["results"])
        for jrow, crow in zip(env["results"], rows):
            for k, v in jrow.items():
                expected = "" if v is None else ("true" if v is True else "false" if v is False else str(v))
                assert crow[k] == expected


def test_exact_values_quoted_in_csv(capsys):
    _, text = run(capsys, "simulate", "--n", "3", "--d", "2", "--x", "4", "--trials", "100", "--seed", "1",
                  "--format", "csv")
    line = text.splitlines()[1]
    assert '"9/32"' in line and '"3"' in line


@pytest.mark.parametrize("argv,code", [
    (["stirling", "--n", "6"], 2),
    (["stirling", "--n", "3", "--d", "5", "--method", "record"], 2),
    (["simulate", "--n", "3", "--d", "2", "--x", "1"], 2),
    (["simulate", "--n", "3", "--d", "2", "--x", "0.5"], 2),
    (["verify", "--only", "I42"], 2),
    (["poly", "--d", "4", "--n", "2"], 2),
    (["stirling", "--n", "14", "--d", "3", "--method", "oracle"], 2),
    (["stirling", "--n", "30", "--d", "10", "--method", "record", "--max-enum", "50"], 2),
])
def test_usage_exit_codes(capsys, argv, code):
    try:
        rc = main(argv)
    except SystemExit as exc:  # argparse rejects malformed flags itself
        rc = exc.code
    assert rc == code


def test_disagreement_exit_code(monkeypatch, capsys):
    from stirling_records import stirling_engine as se
    monkeypatch.setattr(se, "stirling_via_duality", lambda n, d, ops=None: 66)
    code, env = run_json(capsys, "stirling", "--n", "6", "--d", "4", "--method", "all")
    assert code == 1 and env["results"][0]["agreement"] is False


def test_verify_failure_exit_code(monkeypatch, capsys):
    from stirling_records import identity_suite
    monkeypatch.setattr(identity_suite.se, "stirling_via_duality", lambda n, d, ops=None: 7)
    code, env = run_json(capsys, "verify", "--n-max", "3", "--only", "I9")
    assert code == 1 and env["results"][0]["cx_lhs"] == "7"


def test_subprocess_entry_point(tmp_path):
    out = tmp_path / "s.json"
    proc = subprocess.run([sys.executable, "-m", "stirling_records", "stirling", "--n", "6", "--d", "4",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == ""
    assert json.loads(out.read_text())["results"][0]["value"] == "65"
    proc = subprocess.run([sys.executable, "-m", "stirling_records", "stirling", "--n", "x"],
                          capture_output=True, text=True)
    assert proc.returncode == 2


def test_timing_flag(capsys):
    _, env = run_json(capsys, "stirling", "--n", "6", "--d", "4")
    assert env["timing_ms"] == 0
    _, env = run_json(capsys, "stirling", "--n", "6", "--d", "4", "--timing")
    assert isinstance(env["timing_ms"], int)
