from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from hpcalc.cli import main

ROOT = Path(__file__).resolve().parent.parent
SESSIONS = sorted((ROOT / "demos" / "sessions").glob("*.hpc"))
CORRUPTED = ROOT / "demos" / "sessions" / "invalid" / "corrupted.hpc"


def test_corpus_size():
    assert len(SESSIONS) >= 6


@pytest.mark.parametrize("path", SESSIONS, ids=lambda p: p.name)
def test_corpus_exits_zero(path, capsys):
    assert main([str(path), "--samples", "10", "--strict"]) == 0


def test_corrupted_exits_two(capsys):
    assert main([str(CORRUPTED)]) == 2
    err = capsys.readouterr().err
    assert "corrupted.hpc:3:20: error" in err


def test_missing_file(capsys):
    assert main([str(ROOT / "nope.hpc")]) == 2


def test_boundary_output(tmp_path, capsys):
    p = tmp_path / "b.hpc"
    p.write_text("ring Q vars x\npotential f = x^2\nclass c1 alpha = x*d(x) s = 1 l = 0\nboundary c1\n")
    assert main([str(p)]) == 0
    assert "boundary c1: x*dx*dt" in capsys.readouterr().out


def test_failing_check_exits_one(tmp_path, capsys):
    p = tmp_path / "bad.hpc"
    p.write_text("ring Q vars x\nmf m A = [[x]] B = [[x + 1]] pot = x^2\nverify-square m\n")
    assert main([str(p)]) == 1


def test_invariant_violation_is_a_failed_check(tmp_path, capsys):
    p = tmp_path / "bad.hpc"
    p.write_text("ring Q vars x\npotential f = x\nclass c alpha = x^2 s = 1 l = 0\nboundary c\n")
    assert main([str(p)]) == 1


def test_json_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main([str(SESSIONS[0]), "--samples", "5", "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data and all(list(r) == ["name", "anchor", "status", "witness", "millis"] for r in data)
    assert {r["status"] for r in data} == {"pass"}


def test_deterministic_under_seed(tmp_path, capsys):
    reports = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        main([str(SESSIONS[0]), "--samples", "5", "--seed", "7", "--json", str(out)])
        reports.append([(r["name"], r["status"], r["witness"]) for r in json.loads(out.read_text())])
    assert reports[0] == reports[1]


def test_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("ring Q vars x\nkoszul-homology x^2 5\n"))
    assert main(["-"]) == 0
    assert "H[0]=2" in capsys.readouterr().out


def test_console_script():
    r = subprocess.run(
        [sys.executable, "-m", "hpcalc.cli", str(CORRUPTED)], capture_output=True, text=True, check=False
    )
    assert r.returncode == 2 and ":3:20:" in r.stderr
