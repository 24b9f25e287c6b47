import csv
import json
import subprocess
import sys

import pytest

from framefactor.cli import fixture_names, main
from helpers import fixture


def run(*args):
    return main([str(a) for a in args])


def test_fixtures_listed(capsys):
    assert run("fixtures") == 0
    out = capsys.readouterr().out
    for n in ["haar", "ex3.1", "ex3.2", "ex3.3", "ex3.4", "ex3.5", "ex4.1", "ex6.1"]:
        assert n in out
    assert len(fixture_names()) == 8


def test_fixtures_dump(tmp_path):
    assert run("fixtures", "--dump", tmp_path) == 0
    assert json.loads((tmp_path / "ex3.1.json").read_text()) == fixture("ex3.1")


def test_construct_ex32(tmp_path, capsys):
    out = tmp_path / "bank.json"
    assert run("construct", "ex3.2", "--nb", 2, "--out", out) == 0
    assert "s=2 eps=+,-" in capsys.readouterr().out
    d = json.loads(out.read_text())
    assert [h["eps"] for h in d["highpass"]] == [1, -1] and d["nb"] == 2


def test_construct_haar_stdout(capsys):
    assert run("construct", "haar", "--nb", 1) == 0
    cap = capsys.readouterr()
    assert len(json.loads(cap.out)["highpass"]) == 1 and "s=1" in cap.err


def test_construct_too_many_moments(capsys):
    assert run("construct", "ex3.2", "--nb", 3) == 2
    assert "vanishing-moment bound exceeded" in capsys.readouterr().err


def test_verify(tmp_path, capsys):
    assert run("verify", "ex3.1") == 0
    assert capsys.readouterr().out.startswith("PASS")
    d = fixture("ex3.1")
    d["bank"]["highpass"][0]["b"]["coeffs"][1][0] += 1e-3
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(d))
    assert run("verify", f) == 3
    assert capsys.readouterr().out.startswith("FAIL")


def test_verify_roundtrip(tmp_path):
    out = tmp_path / "h.json"
    assert run("construct", "haar", "--out", out) == 0
    assert run("verify", out) == 0


def test_factorize(tmp_path, capsys):
    out = tmp_path / "u.json"
    assert run("factorize", "ex4.1", "--out", out) == 0
    d = json.loads(out.read_text())
    assert (d["m_plus"], d["m_minus"]) == (1, 1) and d["residual"] <= 1e-9


def test_factorize_identity(tmp_path):
    one = {"lo": 0, "coeffs": [[1.0, 0.0]]}
    zero = {"lo": 0, "coeffs": []}
    f = tmp_path / "i.json"
    f.write_text(json.dumps({"rows": 2, "cols": 2, "entries": [[one, zero], [zero, one]]}))
    out = tmp_path / "u.json"
    assert run("factorize", f, "--out", out) == 0
    d = json.loads(out.read_text())
    assert (d["m_plus"], d["m_minus"]) == (2, 0)


def test_factorize_below_bound(capsys):
    assert run("factorize", "ex4.1", "--m1", 0) == 2
    assert "below inertia lower bound" in capsys.readouterr().err


def test_classify(capsys):
    assert run("classify", "ex3.1") == 0
    assert "case=(6)/(iv)" in capsys.readouterr().out
    assert run("classify", "haar") == 0
    assert "case=(1)/(i)" in capsys.readouterr().out


def test_smoothness(capsys):
    assert run("smoothness", "ex3.3") == 0
    assert abs(float(capsys.readouterr().out.split("=")[1]) - 1.4408) < 1e-3


def read_csv(p):
    with open(p) as fh:
        return list(csv.reader(fh))


def test_render_haar(tmp_path):
    pre = tmp_path / "haar"
    assert run("render", "haar", "--level", 8, "--out-prefix", pre) == 0
    rows = read_csv(f"{pre}_functions.csv")
    assert rows[0] == ["x", "phi", "psi1"]
    for x, phi, _ in rows[1:]:
        assert abs(float(phi) - (1.0 if 0 <= float(x) < 1 else 0.0)) < 1e-6
    assert read_csv(f"{pre}_det.csv")[0] == ["xi", "detM"]


def test_render_det_columns(tmp_path):
    assert run("render", "ex3.1", "--level", 3, "--out-prefix", tmp_path / "a") == 0
    d = [float(r[1]) for r in read_csv(tmp_path / "a_det.csv")[1:]]
    assert min(d) < 0 < max(d)
    assert run("render", "ex3.4", "--level", 3, "--out-prefix", tmp_path / "b") == 0
    d = [float(r[1]) for r in read_csv(tmp_path / "b_det.csv")[1:]]
    assert max(d) <= 1e-9


def test_missing_file(capsys):
    assert run("verify", "/nonexistent/x.json") == 2


def test_bad_json(tmp_path):
    f = tmp_path / "x.json"
    f.write_text("{")
    assert run("verify", f) == 2


def test_grid_flag(capsys):
    assert run("verify", "ex3.1", "--grid", 32) == 2
    assert run("verify", "ex3.1", "--grid", 128) == 0


def test_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("construct", "ex3.5", "--out", a)
    run("construct", "ex3.5", "--out", b)
    assert a.read_text() == b.read_text()


def test_console_script_module():
    r = subprocess.run([sys.executable, "-m", "framefactor.cli", "fixtures"], capture_output=True, text=True)
    assert r.returncode == 0 and "ex6.1" in r.stdout
