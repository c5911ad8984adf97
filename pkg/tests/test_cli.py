import json
import subprocess
import sys

import pytest

from slopekit.cli import main
from slopekit.harness import load_report_body
from slopekit.linalg import IntegerMatrix


@pytest.fixture
def mats(tmp_path):
    paths = {}
    for name, m in {
        "diag": IntegerMatrix.diag([1, 2, 4]),
        "ident": IntegerMatrix.identity(3),
        "sing": IntegerMatrix(((1, 2), (2, 4))),
    }.items():
        paths[name] = tmp_path / f"{name}.json"
        m.save(paths[name])
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_polygon_text(mats, capsys):
    code, out, _ = run(capsys, "polygon", mats["diag"], "--p", 2)
    assert code == 0 and "slopes: 0:1 1:1 2:1" in out
    _, out, _ = run(capsys, "polygon", mats["ident"], "--p", 3)
    assert "slopes: 0:3" in out
    _, out, _ = run(capsys, "polygon", mats["sing"], "--p", 5)
    assert "kernel multiplicity: 1" in out


def test_polygon_json(mats, capsys):
    code, out, _ = run(capsys, "polygon", mats["diag"], "--p", 2, "--format", "json")
    doc = json.loads(out)
    assert doc["slopes"] == {"0/1": 1, "1/1": 1, "2/1": 1}
    assert doc["vertices"] == [[0, 0], [1, 0], [2, 1], [3, 3]]


def test_polygon_csv(mats, capsys, tmp_path):
    out = tmp_path / "pts.csv"
    code, _, _ = run(capsys, "polygon", mats["diag"], "--p", 2, "--format", "csv", "--out", out)
    assert code == 0
    assert out.read_text().startswith("index,valuation\n0,0\n")
    assert (tmp_path / "pts.vertices.csv").read_text().splitlines()[-1] == "3,3"


def test_polygon_svg(mats, capsys):
    code, out, _ = run(capsys, "polygon", mats["diag"], "--p", 2, "--shape", "2,1,0", "--n", 2, "--format", "svg")
    assert code == 0
    assert out.count("<polyline") == 3
    for name in ("polygon", "B", "T"):
        assert f'id="{name}"' in out
    assert 'data-scale="40"' in out


def test_polygon_errors(mats, capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"t": 2, "entries": [["1"]]}')
    assert run(capsys, "polygon", bad, "--p", 2)[0] == 2
    assert run(capsys, "polygon", tmp_path / "missing.json", "--p", 2)[0] == 2
    assert run(capsys, "polygon", mats["diag"], "--p", 4)[0] == 2
    assert run(capsys, "polygon", mats["diag"], "--p", 2, "--shape", "1,1,1,1")[0] == 2


def test_verify_exit_codes(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, err = run(capsys, "verify", "divisibility", "--d", 1, "--h", 1, "--n", 3, "--p", 3,
                       "--trials", 200, "--seed", 42, "--out", out)
    assert code == 0 and "0 failures" in err
    body = load_report_body(out.read_text())
    assert body["totals"]["trials"] == 200 and body["config"]["seed"] == 42
    assert run(capsys, "verify", "layers", "--shape", "3,2,1", "--trials", 500, "--seed", 7)[0] == 0
    assert run(capsys, "verify", "congruence", "--d", 1, "--h", 1, "--n", 3, "--t-prime", 9)[0] == 2
    assert run(capsys, "verify", "slopes", "--d", 1, "--h", 1)[0] == 2
    assert run(capsys, "verify", "slopes")[0] == 2
    assert run(capsys, "verify", "divisibility", "--shape", "2,1", "--entry-bound", 1)[0] == 2


def test_verify_failure_exit_code(capsys, monkeypatch):
    from slopekit import harness

    def broken(config):
        rep = harness.VerificationReport("divisibility", config.echo(), trials_run=1)
        rep.failures.append(harness.Failure(0, 0, 1, 0, 1))
        return rep

    monkeypatch.setattr(harness, "run_divisibility", broken)
    assert run(capsys, "verify", "divisibility", "--shape", "2,1")[0] == 1


def test_verify_reproducible(capsys, tmp_path):
    bodies = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        run(capsys, "verify", "slopes", "--d", 2, "--h", 1, "--n", 2, "--p", 5, "--trials", 15, "--seed", 9, "--out", out)
        bodies.append(out.read_text().split("\n", 1)[1])
    assert bodies[0] == bodies[1]


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--d", 2, "--h", 1, "--n", 3)
    assert code == 0 and "sigma = [1,3,5]" in out and "c = 1/1" in out
    _, out, _ = run(capsys, "bounds", "--d", 1, "--h", 1, "--alpha", 1)
    assert "n(alpha) = 5" in out
    _, out, _ = run(capsys, "bounds", "--iq", "--m", 2, "--alpha", 1)
    assert "closed-form bound = 24" in out and "chord bound = 10/1" in out
    _, out, _ = run(capsys, "bounds", "--iq", "--m", 1, "--alpha", 2, "--format", "json")
    assert json.loads(out)["iq"]["findings"][0]["kind"] == "closed-form-bound-violated"
    _, out, _ = run(capsys, "bounds", "--shape", "3,2,1,0,0,0", "--format", "json")
    assert json.loads(out)["c"] == "1/1"


def test_bounds_errors(capsys):
    assert run(capsys, "bounds")[0] == 2
    assert run(capsys, "bounds", "--iq", "--m", 2)[0] == 2
    assert run(capsys, "bounds", "--d", 0, "--h", 1, "--n", 3)[0] == 2
    assert run(capsys, "bounds", "--alpha", "1/0", "--d", 1, "--h", 1)[0] == 2
    assert run(capsys, "bounds", "--n", 3)[0] == 2


def test_shape(capsys, tmp_path):
    code, out, _ = run(capsys, "shape", "--d", 1, "--h", 1, "--n", 3, "--t", 6)
    assert code == 0 and out.strip() == "3,2,1,0,0,0"
    f = tmp_path / "k.json"
    IntegerMatrix.diag([27, 9, 3, 1]).save(f)
    _, out, _ = run(capsys, "shape", f, "--p", 3, "--n", 3)
    assert out.strip() == "3,2,1,0"
    assert run(capsys, "shape", f, "--p", 3)[0] == 2
    assert run(capsys, "shape")[0] == 2


def test_console_entry_point():
    argv = [sys.executable, "-m", "slopekit", "bounds", "--d", "2", "--h", "1", "--n", "3"]
    out = subprocess.run(argv, capture_output=True, text=True)
    assert out.returncode == 0 and "sigma = [1,3,5]" in out.stdout
