import json
import math
import subprocess
import sys

import pytest

from ncspaces.cli import main
from ncspaces.families import theta_R
from ncspaces.rmatrix import dump_rmatrix
from ncspaces.scalars import gauss


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, args in {"r0": ["classical"], "theta35": ["theta", "--cos", "3/5", "--sin", "4/5"]}.items():
        p = tmp_path / f"{name}.json"
        assert main(["make", *args, "--out", str(p)]) == 0
        paths[name] = p
    bad = theta_R(3 / 5, 4 / 5).replace((0, 0, 0, 0), 0.5)
    paths["corrupted"] = tmp_path / "corrupted.json"
    paths["corrupted"].write_text(dump_rmatrix(bad))
    paths["tmp"] = tmp_path
    return paths


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_passes(files, capsys):
    code, out, _ = run(["check", files["r0"]], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and len(doc["reports"]) == 6


def test_check_corrupted(files, capsys):
    code, out, _ = run(["check", files["corrupted"], "--format", "text"], capsys)
    assert code == 1 and "FAIL at" in out


def test_reduce_theta(files, capsys):
    code, out, _ = run(["reduce", files["theta35"]], capsys)
    doc = json.loads(out)
    assert code == 0 and (doc["k1"], doc["k2"]) == (1, 1)
    assert abs(doc["theta"][0][0] - math.atan2(0.8, 0.6)) < 1e-12


def test_reduce_refuses(files, capsys):
    code, out, _ = run(["reduce", files["corrupted"]], capsys)
    assert code == 1 and not json.loads(out)["passed"]


def test_dims(files, capsys):
    code, out, _ = run(["dims", files["theta35"]], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["primal"] == [1, 4, 10, 20, 35, 56, 84]
    assert doc["dual"][:6] == [1, 4, 6, 4, 1, 0]
    code, _, err = run(["dims", files["theta35"], "--max-degree", "8", "--cap", "6"], capsys)
    assert code == 2 and "cap" in err


def test_clifford_and_koszul(files, capsys):
    code, out, _ = run(["clifford", files["theta35"]], capsys)
    assert code == 0 and json.loads(out)["dimension"] == 16
    code, out, _ = run(["koszul", files["theta35"]], capsys)
    assert code == 0 and json.loads(out)["passed"]
    code, _, err = run(["koszul", files["theta35"], "--max-degree", "7"], capsys)
    assert code == 2 and "cap" in err


def test_unreadable_and_malformed(files, capsys):
    code, _, err = run(["check", files["tmp"] / "missing.json"], capsys)
    assert code == 2 and "cannot read" in err
    broken = files["tmp"] / "broken.json"
    broken.write_text('{"n1": 2, "n2": 2, "entries": [{"l": 3, "a": 1, "b": 1, "m": 1, "re": "1", "im": "0"}]}')
    code, _, err = run(["check", broken], capsys)
    assert code == 2 and "out of range" in err
    code, _, _ = run(["frobnicate"], capsys)
    assert code == 2


def test_json_output_is_byte_identical(files, capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(["reduce", files["theta35"], "--seed", "7"], capsys)
        outs.append(out)
    assert outs[0] == outs[1]
    a = files["tmp"] / "a.json"
    b = files["tmp"] / "b.json"
    run(["check", files["theta35"], "--out", a], capsys)
    run(["check", files["theta35"], "--out", b], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_make_deformation_exact(files, capsys):
    code, out, _ = run(["make", "deformation", "--n1", "3", "--n2", "3", "--k1", "1", "--k2", "1",
                        "--theta", '[[["3/5", "4/5"]]]', "--eps", "[[null, -1], [1, 1]]"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert all(isinstance(e["re"], str) for e in doc["entries"])


def test_console_script_module_entry(files):
    proc = subprocess.run([sys.executable, "-m", "ncspaces.cli", "check", str(files["theta35"]),
                           "--format", "text"], capture_output=True, text=True)
    assert proc.returncode == 0 and "euclidean: pass" in proc.stdout
