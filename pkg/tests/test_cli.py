import json
import os
import subprocess
import sys

import numpy as np
import pytest

from polycurvelets.cli import run


def verdict(capsys):
    out = capsys.readouterr().out.strip().splitlines()
    return json.loads(out[-1])


def test_selftest(capsys):
    assert run(["selftest", "--d", "3", "--quick"]) == 0
    v = verdict(capsys)
    assert v["passed"] and v["suite"] == "selftest"
    assert set(v["checks"]) == {"admissibility", "quadrature", "addition_theorem"}


def test_verify_parseval(capsys):
    assert run(["frame", "verify-parseval", "--d", "3", "--J", "2", "--trials", "3"]) == 0
    v = verdict(capsys)
    assert v["max_relative_defect"] < 1e-12


def test_usage_errors(capsys):
    assert run(["selftest", "--bogus"]) == 2
    assert run(["selftest", "--qu"]) == 2  # no abbreviations
    assert run(["frame"]) == 2
    assert run(["edge", "slopes", "--jmin", "7", "--jmax", "5"]) == 2
    assert run(["edge", "scan", "--r", "4.0"]) == 2
    assert run(["frame", "analyze", "--input", "nope"]) == 2
    assert run(["selftest", "--config", "/nonexistent.json"]) == 2


def test_resource_error(capsys):
    assert run(["frame", "verify-parseval", "--d", "4", "--J", "6"]) == 3
    assert run(["frame", "analyze", "--d", "3", "--J", "3", "--atom-cap", "100"]) == 3


def test_thread_env(monkeypatch, capsys):
    monkeypatch.setenv("POLYCURVELETS_THREADS", "zero")
    assert run(["selftest", "--quick"]) == 2
    monkeypatch.setenv("POLYCURVELETS_THREADS", "2")
    assert run(["selftest", "--quick"]) == 0


def test_csv_outputs_are_deterministic(tmp_path, capsys):
    paths = []
    for k in range(2):
        p = tmp_path / f"a{k}.csv"
        assert run(["frame", "analyze", "--d", "3", "--J", "2", "--input", "random:degree=3,seed=5",
                    "--out", str(p)]) == 0
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    data = np.genfromtxt(paths[0], delimiter=",", names=True)
    assert data.dtype.names == ("j", "r", "s", "re", "im")
    assert len(data) == 1 + 75 + 405


def test_other_csv_commands(tmp_path, capsys):
    p = tmp_path / "prof.csv"
    assert run(["curvelet", "profile", "--j", "3", "--grid", "11", "--out", str(p)]) == 0
    assert p.read_text().splitlines()[0] == "t,varphi,value"
    assert len(p.read_text().splitlines()) == 122
    p = tmp_path / "ac.csv"
    assert run(["autocorr", "--d", "4", "--j", "2", "--samples", "5", "--out", str(p)]) == 0
    assert verdict(capsys)["passed"]
    assert p.read_text().splitlines()[0] == "t,closed_form,brute_force,normalized"
    p = tmp_path / "scan.csv"
    assert run(["edge", "scan", "--j", "5", "--grid", "41", "--out", str(p)]) == 0
    assert abs(verdict(capsys)["peak_offset"]) < 0.2
    p = tmp_path / "rule.csv"
    assert run(["quadrature", "export", "--d", "4", "--N", "3", "--out", str(p)]) == 0
    assert p.read_text().splitlines()[0] == "x1,x2,x3,x4,weight"


def test_localization_check(capsys):
    assert run(["localization", "check", "--jmin", "4", "--jmax", "6", "--decay-q", "1", "2",
                "--grid", "40"]) == 0


def test_config_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"window": {"kind": "spline_q", "q": 2}, "trials": 2, "J": 2}))
    out = tmp_path / "a.csv"
    assert run(["frame", "verify-parseval", "--config", str(cfg)]) == 0
    v = verdict(capsys)
    assert v["trials"] == 2 and v["J"] == 2
    assert run(["frame", "verify-parseval", "--config", str(cfg), "--trials", "1"]) == 0
    assert verdict(capsys)["trials"] == 1
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert run(["selftest", "--config", str(cfg)]) == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "polycurvelets", "selftest", "--quick"],
                       capture_output=True, text=True, env={**os.environ})
    assert r.returncode == 0
    assert json.loads(r.stdout.strip().splitlines()[-1])["passed"]
