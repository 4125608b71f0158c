"""Command-line interface: exit codes, artefacts, determinism."""

import csv
import json

from transversals.cli import (
    EXIT_EXHAUSTED,
    EXIT_NEGATIVE,
    EXIT_SUCCESS,
    EXIT_USAGE,
    main,
)


def run_gen(tmp_path, name, *args):
    path = tmp_path / name
    rc = main(["gen", "--out", str(path), *args])
    assert rc == EXIT_SUCCESS
    return path


def test_gen_writes_json_and_is_deterministic(tmp_path):
    a = run_gen(tmp_path, "a.json", "--family", "random", "--n", "8",
                "--delta", "0.6", "--seed", "5")
    b = run_gen(tmp_path, "b.json", "--family", "random", "--n", "8",
                "--delta", "0.6", "--seed", "5")
    assert a.read_text() == b.read_text()
    obj = json.loads(a.read_text())
    assert obj["n"] == 8 and len(obj["members"]) == 8


def test_solve_success_writes_certificate(tmp_path, capsys):
    inst = run_gen(tmp_path, "inst.json", "--family", "random", "--n", "10",
                   "--delta", "0.7", "--seed", "1")
    cert = tmp_path / "cert.json"
    rc = main(["solve", "--in", str(inst), "--out-cert", str(cert)])
    assert rc == EXIT_SUCCESS
    report = json.loads(capsys.readouterr().out)
    assert report["outcome"] == "success"
    assert report["certificate"] == str(cert)
    # round-trip through verify
    rc = main(["verify", "--in", str(inst), "--cert", str(cert),
               "--link", "edge(2,1)"])
    assert rc == EXIT_SUCCESS


def test_solve_negative_exit_code(tmp_path, capsys):
    inst = run_gen(tmp_path, "dirac.json", "--family", "dirac-extremal",
                   "--n", "6")
    rc = main(["solve", "--in", str(inst)])
    assert rc == EXIT_NEGATIVE
    assert json.loads(capsys.readouterr().out)["outcome"] == "none"


def test_solve_exhausted_exit_code(tmp_path, capsys):
    inst = run_gen(tmp_path, "inst.json", "--family", "random", "--n", "10",
                   "--delta", "0.6", "--seed", "2")
    rc = main(["solve", "--in", str(inst), "--budget-nodes", "2"])
    assert rc == EXIT_EXHAUSTED
    assert json.loads(capsys.readouterr().out)["outcome"] == "exhausted"


def test_solve_pipeline_engine_with_trace(tmp_path, capsys):
    inst = run_gen(tmp_path, "inst.json", "--family", "random", "--n", "10",
                   "--delta", "0.7", "--seed", "3")
    rc = main(["solve", "--in", str(inst), "--engine", "pipeline", "--trace"])
    out = json.loads(capsys.readouterr().out)
    assert rc in (EXIT_SUCCESS, EXIT_EXHAUSTED)
    assert "trace" in out and out["trace"]


def test_verify_rejects_tampered_certificate(tmp_path, capsys):
    inst = run_gen(tmp_path, "inst.json", "--family", "random", "--n", "8",
                   "--delta", "0.7", "--seed", "4")
    cert = tmp_path / "cert.json"
    assert main(["solve", "--in", str(inst), "--out-cert", str(cert)]) == EXIT_SUCCESS
    capsys.readouterr()
    obj = json.loads(cert.read_text())
    obj["phi"][0] = obj["phi"][1]  # duplicate a colour
    cert.write_text(json.dumps(obj))
    rc = main(["verify", "--in", str(inst), "--cert", str(cert)])
    assert rc == EXIT_NEGATIVE
    assert json.loads(capsys.readouterr().out)["reason"] == "DuplicateColour"


def test_usage_errors_exit_3(tmp_path, capsys):
    assert main(["solve"]) == EXIT_USAGE  # missing --in
    capsys.readouterr()
    assert main(["gen", "--family", "bogus", "--n", "5"]) == EXIT_USAGE
    capsys.readouterr()
    assert main(["solve", "--in", str(tmp_path / "missing.json")]) == EXIT_USAGE


def read_scan(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_scan_writes_csv(tmp_path):
    out = tmp_path / "scan.csv"
    rc = main(["scan", "--n", "8", "--delta-from", "0.3", "--delta-to", "0.5",
               "--delta-step", "0.1", "--trials", "5", "--seed", "1",
               "--out", str(out)])
    assert rc == EXIT_SUCCESS
    rows = read_scan(out)
    assert [r["delta"] for r in rows] == ["0.3", "0.4", "0.5"]
    for r in rows:
        parts = int(r["successes"]) + int(r["nones"]) + int(r["exhausted"])
        assert parts == int(r["trials"]) == 5


def test_scan_zero_trials_header_only(tmp_path):
    out = tmp_path / "scan.csv"
    rc = main(["scan", "--n", "8", "--delta-from", "0.4", "--delta-to", "0.4",
               "--trials", "0", "--out", str(out)])
    assert rc == EXIT_SUCCESS
    rows = read_scan(out)
    assert len(rows) == 1 and rows[0]["trials"] == "0"


def test_scan_jobs_deterministic(tmp_path):
    args = ["scan", "--n", "8", "--delta-from", "0.4", "--delta-to", "0.5",
            "--delta-step", "0.1", "--trials", "4", "--seed", "9"]
    seq = tmp_path / "seq.csv"
    par = tmp_path / "par.csv"
    assert main(args + ["--out", str(seq)]) == EXIT_SUCCESS
    assert main(args + ["--jobs", "2", "--out", str(par)]) == EXIT_SUCCESS
    drop_time = lambda rows: [
        {k: v for k, v in r.items() if k != "mean_time"} for r in rows
    ]
    assert drop_time(read_scan(seq)) == drop_time(read_scan(par))
