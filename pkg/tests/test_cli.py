import json

import numpy as np
import pytest
from scipy.optimize import bisect

from quasitoric import cli, fixtures

from conftest import S, T


@pytest.fixture
def specs(tmp_path):
    out = {}
    for name in fixtures.NAMES:
        path = tmp_path / f"{name}.poly"
        path.write_text(fixtures.spec_text(name))
        out[name] = str(path)
    return out


def run(args, tmp_path):
    out = tmp_path / "report.json"
    code = cli.run(args + ["--out", str(out)])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


def test_inspect_interval(specs, tmp_path):
    code, rep = run(["inspect", specs["interval"]], tmp_path)
    assert code == 0
    assert rep["polytope"]["simple"] and len(rep["polytope"]["vertices"]) == 2


def test_inspect_octahedron(specs, tmp_path):
    code, rep = run(["inspect", specs["octahedron"]], tmp_path)
    assert code == 2
    assert rep["polytope"]["simple"] is False
    assert len(rep["polytope"]["nonsimple_vertex"]["facets"]) == 4


def test_inspect_missing(tmp_path, capsys):
    assert cli.run(["inspect", str(tmp_path / "missing.poly")]) == 1
    assert "cannot read" in capsys.readouterr().err


def test_inspect_invalid(tmp_path):
    bad = tmp_path / "bad.poly"
    bad.write_text(json.dumps({"n": 1, "normals": [[0], [-1]], "offsets": [0, -1]}))
    assert cli.run(["inspect", str(bad)]) == 2


def test_atlas_reports(specs, tmp_path):
    code, rep = run(["atlas", specs["interval"]], tmp_path)
    assert code == 0
    assert rep["atlas"]["interval"]["transition_slope"] == pytest.approx(-S / T, abs=1e-12)
    code, rep = run(["atlas", specs["pentagon"]], tmp_path)
    assert code == 0 and len(rep["atlas"]["charts"]) == 5
    two_a = 2 * np.cos(2 * np.pi / 5)
    phases = np.array([g["phase"] for c in rep["atlas"]["charts"] for g in c["gamma_generators"]])
    assert np.any(np.abs(np.abs(phases) - two_a) < 1e-12)
    assert rep["atlas"]["cocycle"]["status"] == "pass"
    code, rep = run(["atlas", specs["square"]], tmp_path)
    assert code == 0 and rep["atlas"]["all_gamma_trivial"] is True


def test_project(specs, tmp_path):
    code, rep = run(["project", specs["interval"], "--point", "1,1"], tmp_path)
    assert code == 0
    pr = rep["projection"]
    assert pr["psi_residual"] <= 1e-10
    theta = bisect(lambda x: T * np.exp(-4 * np.pi * T * x) + np.exp(-4 * np.pi * x) - T,
                   0, 1, xtol=1e-15)
    assert pr["exponent"][1] / S == pytest.approx(theta, abs=1e-12)
    assert pr["roundtrip_residual"] <= 1e-8


def test_project_level_point(specs, tmp_path):
    # (0, sqrt(t)) lies on the level set
    code, rep = run(["project", specs["interval"], "--point", f"0, {float(np.sqrt(T))!r}"], tmp_path)
    assert code == 0 and abs(rep["projection"]["Y"][0]) < 1e-12


def test_project_point_file(specs, tmp_path):
    pf = tmp_path / "pt.json"
    pf.write_text("[[1, 0.5], 2]")
    code, rep = run(["project", specs["interval"], "--point-file", str(pf)], tmp_path)
    assert code == 0 and rep["point"] == [[1.0, 0.5], [2.0, 0.0]]


def test_project_outside(specs, tmp_path, capsys):
    code, rep = run(["project", specs["interval"], "--point", "0,0"], tmp_path)
    assert code == 2
    assert "not in C^d_Delta" in rep["error"]
    assert rep["face_diagnosis"]["zero_coordinates"] == [1, 2]


def test_project_bad_point(specs, tmp_path):
    assert cli.run(["project", specs["interval"], "--point", "1,x"]) == 2
    assert cli.run(["project", specs["interval"], "--point", "1,2,3"]) == 2


def test_verify_pentagon_and_determinism(specs, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", specs["pentagon"], "--samples", "20", "--seed", "7"]
    assert cli.run(args + ["--out", str(a)]) == 0
    assert cli.run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    names = [c["name"] for c in rep["checks"]]
    assert len(names) == len(set(names))
    assert {c["status"] for c in rep["checks"]} <= {"pass", "skip"}
    assert len(rep["input"]["sha256"]) == 64


def test_verify_tight_tolerance_fails(specs, tmp_path, capsys):
    code, rep = run(["verify", specs["interval"], "--samples", "10", "--tol-psi", "1e-16"],
                    tmp_path)
    assert code == 3
    assert rep["status"] == "fail" and rep["failed"]
    assert "failed checks" in capsys.readouterr().err


def test_verify_interval_has_closed_form_checks(specs, tmp_path):
    code, rep = run(["verify", specs["interval"], "--samples", "20"], tmp_path)
    assert code == 0
    by_name = {c["name"]: c for c in rep["checks"]}
    assert by_name["kahler.cover_transition"]["status"] == "pass"
    assert by_name["interval.kernel_direction"]["status"] == "pass"


def test_example_commands(tmp_path):
    code, rep = run(["example", "interval", "--samples", "10"], tmp_path)
    assert code == 0
    assert rep["atlas"]["interval"]["n_direction_ratio"] == pytest.approx(S / T, abs=1e-12)
    code, rep = run(["example", "pentagon", "--samples", "10"], tmp_path)
    assert code == 0
    assert {c["name"]: c["status"] for c in rep["checks"]}["pentagon.kernel_family"] == "pass"
    code, rep = run(["example", "square", "--samples", "10"], tmp_path)
    assert code == 0 and rep["atlas"]["all_gamma_trivial"]
    code, rep = run(["example", "interval", "--s", "1", "--t", "2", "--samples", "10"], tmp_path)
    assert code == 0
    assert {c["name"]: c["status"] for c in rep["checks"]}["rational.chart_group_orders"] == "pass"
    assert cli.run(["example", "cube"]) == 2


def test_config_validation(specs):
    assert cli.run(["verify", specs["interval"], "--tol-psi", "-1"]) == 2
    assert cli.run(["verify", specs["interval"], "--samples", "0"]) == 2
