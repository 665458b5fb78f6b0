from __future__ import annotations

import json
import subprocess
import sys

import pytest

from coxtetra.cli import main
from coxtetra.reference import decomposition_fixture_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_rex(capsys):
    code, out, _ = run(capsys, "rex", "A3")
    assert code == 0 and json.loads(out)["vertex_count"] == 16
    code, out, _ = run(capsys, "rex", "C3", "--format", "text")
    assert "vertices=42" in out


def test_rex_export(capsys, tmp_path):
    path = tmp_path / "b3.tsv"
    code, out, _ = run(capsys, "rex", "B3", "--export", str(path))
    assert code == 0
    assert len(path.read_text().splitlines()) == json.loads(out)["edge_count"] == 60


def test_rex_cap_exit_code(capsys):
    code, _, err = run(capsys, "rex", "H3", "--max-vertices", "10")
    assert code == 3 and "cap" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["rex", "E8"])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "derive", "C3", "--flip")
    assert code == 2
    code, _, _ = run(capsys, "verify", "h3-sym")
    assert code == 2
    code, _, _ = run(capsys, "figure3", "C", "12")
    assert code == 2


def test_derive_a3(capsys):
    code, out, _ = run(capsys, "derive", "A3", "--format", "text")
    assert code == 0
    assert out.strip() == "R_{1,2,4} R_{1,3,5} R_{2,3,6} R_{4,5,6} = R_{4,5,6} R_{2,3,6} R_{1,3,5} R_{1,2,4}"


def test_derive_h3_json(capsys):
    code, out, _ = run(capsys, "derive", "H3")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert data["checks"]["lhs_counts"] == {"Y": 3, "Y^-1": 3, "R": 5, "R^-1": 5}
    assert data["equation"]["ambient_length"] == 15


def test_derive_f4_flip(capsys):
    code, out, _ = run(capsys, "derive", "F4", "--flip")
    data = json.loads(out)
    assert code == 0 and data["checks"]["flip_matches_flipped_route"]
    assert data["checks"]["lhs_counts"] == {"R": 16, "S": 16, "K": 18}
    first = data["equation"]["lhs"][-1]
    assert first == {"kind": "S", "indices": [14, 15, 16], "inverted": False}


def test_derive_latex(capsys):
    code, out, _ = run(capsys, "derive", "B3", "--format", "latex")
    assert code == 0 and "K_{9, 7, 5, 3}" in out


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "c3", "--exhaustive", "2")
    data = json.loads(out)
    assert code == 0 and data["states_tested"] == 19683 and data["passed"]
    code, out, _ = run(capsys, "verify", "tetra", "--exhaustive", "0", "--format", "text")
    assert code == 0 and "states=1 " in out
    code, _, err = run(capsys, "verify", "c3", "--exhaustive", "9")
    assert code == 3 and "sampled" in err
    code, _, _ = run(capsys, "verify", "c3", "--exhaustive", "1", "--samples", "5")
    assert code == 2


def test_verify_is_deterministic(capsys):
    argv = ("verify", "f4", "--samples", "2000", "--max", "4", "--seed", "5")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and json.loads(a)["seed"] == 5


def test_verify_candidate(capsys, tmp_path):
    cand = tmp_path / "y.json"
    cand.write_text(json.dumps({"carrier": [0, 1]}))
    code, out, _ = run(capsys, "verify", "h3-sym", "--candidate", str(cand))
    assert code == 1 and json.loads(out)["failure_count"] > 0
    cand.write_text(json.dumps({"carrier": [0]}))
    code, _, _ = run(capsys, "verify", "h3", "--candidate", str(cand))
    assert code == 0


def test_figure3(capsys):
    code, out, _ = run(capsys, "figure3", "C", "211202341")
    assert code == 0 and out.count("(313106119)") == 2
    code, out, _ = run(capsys, "figure3", "B", "211202341", "--format", "json")
    data = json.loads(out)
    assert data["left"][-1]["state"] == [3, 1, 4, 1, 0, 5, 1, 1, 7] == data["right"][-1]["state"]
    code, out, _ = run(capsys, "figure3", "C", "000000000", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert all(step["state"] == [0] * 9 for step in data["left"] + data["right"])


def test_decompose(capsys, tmp_path):
    code, out, _ = run(capsys, "decompose")
    data = json.loads(out)
    assert code == 0 and data["c3_count"] == 12 and data["b3_count"] == 12
    bad = json.loads(decomposition_fixture_text())
    y = bad["stages"][7]["Y"]
    y[0], y[1] = y[1], y[0]
    path = tmp_path / "corrupted.json"
    path.write_text(json.dumps(bad))
    code, out, _ = run(capsys, "decompose", "--fixture", str(path), "--format", "text")
    assert code == 1 and "stage" in out


def test_output_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = run(capsys, "rex", "A2", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["vertex_count"] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "coxtetra", "rex", "A3", "--format", "text"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "vertices=16" in res.stdout
