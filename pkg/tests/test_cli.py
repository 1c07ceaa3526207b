import csv
import io
import json
import shutil
import subprocess
import sys

import pytest

from logdeg import cli
from logdeg.degree import DegreeResult


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_degree_n3():
    code, out, _ = run("degree", "--n", "3")
    assert code == 0
    assert out.strip() == "80"


def test_degree_invalid():
    assert run("degree", "--n", "2")[0] == 2
    assert run("degree")[0] == 2
    assert run("degree", "--n", "3", "--workers", "0")[0] == 2
    assert run("degree", "--n", "3", "--format", "xml")[0] == 2
    assert run("table", "--from", "5", "--to", "3")[0] == 2
    assert run("frobnicate")[0] == 2


def test_resource_cap(monkeypatch):
    code, _, err = run("degree", "--n", "5", "--max-n", "4")
    assert code == 2 and "resource cap" in err
    monkeypatch.setenv("LOGDEG_MAX_N", "3")
    assert run("degree", "--n", "4")[0] == 2
    monkeypatch.setenv("LOGDEG_MAX_N", "x")
    assert run("degree", "--n", "4")[0] == 2


def test_table_csv_check():
    code, out, _ = run("table", "--from", "3", "--to", "5", "--format", "csv", "--check")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["n", "degree", "pre_division_total", "term_count", "elapsed_ms"]
    assert [r["degree"] for r in rows] == ["80", "4035", "165984"]


def test_json_schema():
    code, out, _ = run("degree", "--n", "3", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert set(d) == {"n", "degree", "pre_division_total", "term_count", "elapsed_ms"}
    assert d["degree"] == "80" and d["pre_division_total"] == "480"
    assert isinstance(d["n"], int) and isinstance(d["term_count"], int) and isinstance(d["elapsed_ms"], int)
    code, out, _ = run("table", "--from", "3", "--to", "4", "--format", "json")
    assert [r["degree"] for r in json.loads(out)] == ["80", "4035"]


def test_check_mismatch_fails(monkeypatch):
    def fake(n, **kw):
        return DegreeResult(n, 81, 486, 1, 0.0)

    monkeypatch.setattr(cli, "degree_L111", fake)
    code, _, err = run("degree", "--n", "3", "--check")
    assert code == 1 and "MISMATCH" in err


def test_unverified_marker(monkeypatch):
    monkeypatch.setattr(cli, "degree_L111", lambda n, **kw: DegreeResult(n, 7, 42, 1, 0.0))
    code, out, err = run("degree", "--n", "9", "--check")
    assert code == 0
    assert out.strip() == "7 unverified"
    assert "unverified" in err
    code, out, _ = run("table", "--from", "8", "--to", "9")
    assert "unverified" in out.splitlines()[1] and "unverified" not in out.splitlines()[0]


def test_dump_classes_to_stderr():
    code, out, err = run("degree", "--n", "3", "--dump-classes")
    assert code == 0 and out.strip() == "80"
    assert "[(B0)red] = " in err and "c(E1) = " in err


def test_selfcheck():
    code, out, _ = run("selfcheck", "--n", "3")
    assert code == 0
    assert out.count("PASS") == len(out.splitlines())
    code, out, _ = run("selfcheck", "--n", "3", "--format", "json")
    assert all(r["passed"] for r in json.loads(out))


def test_oracle_small():
    code, out, _ = run("oracle", "--seed", "5", "--forms", "10", "--lemma", "3")
    assert code == 0
    assert out.splitlines()[0] == "seed=5"
    assert all(line.startswith("PASS") for line in out.splitlines()[1:])
    assert run("oracle", "--seed", "-1")[0] == 2


def test_oracle_deterministic():
    a = run("oracle", "--seed", "9", "--forms", "8", "--lemma", "2", "--format", "json")[1]
    b = run("oracle", "--seed", "9", "--forms", "8", "--lemma", "2", "--format", "json", "--workers", "2")[1]
    assert a == b


def test_bench():
    code, out, _ = run("bench", "--from", "3", "--to", "3")
    assert code == 0
    assert out.startswith("n=3 ") and "total_ms=" in out


@pytest.mark.skipif(shutil.which("logdeg") is None, reason="console script not installed")
def test_console_script():
    p = subprocess.run(["logdeg", "degree", "--n", "3"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.strip() == "80"
    p = subprocess.run(["logdeg", "degree", "--n", "2"], capture_output=True, text=True)
    assert p.returncode == 2


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "logdeg", "degree", "--n", "3"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.strip() == "80"
