import io
import json
import subprocess
import sys

import pytest

from minkarr.cli import main
from minkarr.geometry import body_to_json, triangle


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_construct_pipe_verify_subprocess():
    cmd = [sys.executable, "-m", "minkarr.cli"]
    c = subprocess.run(cmd + ["construct", "cube-grid", "--d", "2"], capture_output=True, text=True, check=True)
    v = subprocess.run(cmd + ["verify", "--mode", "minkowski", "--intersecting"], input=c.stdout, capture_output=True, text=True)
    assert v.returncode == 0
    rep = json.loads(v.stdout)
    assert rep["count"] == 9 and rep["ok"]


def test_verify_empty_arrangement(capsys, monkeypatch):
    doc = json.dumps({"body": body_to_json(triangle()), "homothets": []})
    code, rep = run(capsys, monkeypatch, ["verify", "--intersecting"], doc)
    assert code == 0 and rep["count"] == 0


def test_verify_failure_and_malformed(capsys, monkeypatch):
    doc = json.dumps({"body": body_to_json(triangle()), "homothets": [{"lambda": "1", "v": ["0", "0"]}, {"lambda": "1", "v": ["0", "0"]}]})
    code, rep = run(capsys, monkeypatch, ["verify"], doc)
    assert code == 1 and rep["first_violation"] == {"i": 0, "j": 1, "condition": "minkowski"}
    code, rep = run(capsys, monkeypatch, ["verify"], "{not json")
    assert code == 2 and rep is None
    code, _ = run(capsys, monkeypatch, ["verify"], json.dumps({"body": {"dim": 2, "shape": {"ball": {"r": "0.5"}}}}))
    assert code == 2
    code, _ = run(capsys, monkeypatch, ["verify"], json.dumps([1, 2]))
    assert code == 2


def test_strict_mode_flag(capsys, monkeypatch, tmp_path):
    code, doc = run(capsys, monkeypatch, ["construct", "cube-grid", "--d", "1"])
    p = tmp_path / "grid.json"
    p.write_text(json.dumps(doc))
    code, rep = run(capsys, monkeypatch, ["verify", str(p), "--mode", "strict"])
    assert code == 1 and rep["minkowski"] and not rep["strict"]


@pytest.mark.parametrize("argv,mode", [
    (["construct", "cube-grid", "--d", "3"], "minkowski"),
    (["construct", "icosahedron"], "strict"),
    (["construct", "amplified-icosahedron", "--k", "1"], "strict"),
    (["construct", "triangle-product", "--d", "4"], "minkowski"),
    (["construct", "circles8"], "strict"),
    (["construct", "triangles10"], "minkowski"),
])
def test_construct_outputs_round_trip(capsys, monkeypatch, argv, mode):
    code, doc = run(capsys, monkeypatch, argv)
    assert code == 0
    code, rep = run(capsys, monkeypatch, ["verify", "--mode", mode, "--intersecting", "--threads", "2"], json.dumps(doc))
    assert code == 0 and rep["ok"]


def test_construct_missing_parameter(capsys, monkeypatch):
    code, _ = run(capsys, monkeypatch, ["construct", "cube-grid"])
    assert code == 2


def test_bound_kappa_upper_from_file(capsys, monkeypatch, tmp_path):
    p = tmp_path / "triangle.json"
    p.write_text(json.dumps(body_to_json(triangle())))
    code, rep = run(capsys, monkeypatch, ["bound", "kappa-upper", "--body", str(p)])
    assert code == 0
    assert rep["inputs"]["theta"] == "2" and rep["inputs"]["N"] == "5" and rep["value"] == "216"


def test_bound_other_reports(capsys, monkeypatch):
    code, rep = run(capsys, monkeypatch, ["bound", "centroid-kappa-upper", "--d", "2"])
    assert rep["value"] == "576"
    code, rep = run(capsys, monkeypatch, ["bound", "packing-upper", "--body", "triangle", "--lambda", "3"])
    assert rep["value"] == "36"
    code, rep = run(capsys, monkeypatch, ["bound", "hadwiger-lower", "--d", "5"])
    assert "approx" in rep["value"]
    code, rep = run(capsys, monkeypatch, ["bound", "chain-upper", "--d", "2"])
    assert rep["inputs"]["I_bound"] == "11"


def test_bad_body_file(capsys, monkeypatch, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    code, _ = run(capsys, monkeypatch, ["bound", "kappa-upper", "--body", str(p)])
    assert code == 2


def test_sample_commands(capsys, monkeypatch):
    code, doc = run(capsys, monkeypatch, ["sample", "strict-translates", "--body", "cube:3", "--seed", "3", "--oversample", "4"])
    assert code == 0
    code, rep = run(capsys, monkeypatch, ["verify", "--mode", "strict", "--intersecting"], json.dumps(doc))
    assert code == 0
    code, doc = run(capsys, monkeypatch, ["sample", "boundary-points", "--body", "simplex:3", "--oversample", "16"])
    assert code == 0
    code, rep = run(capsys, monkeypatch, ["verify", "--mode", "strict", "--intersecting"], json.dumps(doc))
    assert code == 0
    code, doc = run(capsys, monkeypatch, ["sample", "uniform", "--body", "triangle", "--n", "5"])
    assert code == 0 and doc["count"] == 5
    code, doc = run(capsys, monkeypatch, ["sample", "projection-direction", "--body", "triangle"])
    assert code == 0 and doc["residual"]["approx"] <= 1e-9


def test_same_seed_same_output(capsys, monkeypatch):
    argv = ["sample", "uniform", "--body", "square", "--n", "3", "--seed", "9"]
    assert run(capsys, monkeypatch, argv) == run(capsys, monkeypatch, argv)


def test_search_command(capsys, monkeypatch):
    code, doc = run(capsys, monkeypatch, ["search", "--body", "disc", "--m", "3", "--mode", "strict"])
    assert code == 0
    code, rep = run(capsys, monkeypatch, ["verify", "--mode", "strict", "--intersecting"], json.dumps(doc))
    assert code == 0
    code, doc = run(capsys, monkeypatch, ["search", "--body", "disc", "--m", "30", "--restarts", "1", "--steps", "20"])
    assert code == 1 and doc["found"] is False


def test_estimate_f_command(capsys, monkeypatch):
    code, doc = run(capsys, monkeypatch, ["estimate-f", "--body", "disc", "--t", "1", "--n", "20000"])
    assert code == 0 and doc["within_bound"] is True
    code, _ = run(capsys, monkeypatch, ["estimate-f", "--body", "disc", "--t", "2"])
    assert code == 2


def test_argparse_rejects_bad_flags():
    with pytest.raises(SystemExit) as e:
        main(["verify", "--mode", "sloppy"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["bound", "kappa-upper", "--body", "triangle", "--d", "0"])
    assert e.value.code == 2
