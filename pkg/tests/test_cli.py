import csv
import json
import subprocess
import sys

import pytest

from conftest import DESIGN_E, H_E
from pentamotion import __version__
from pentamotion.cli import TRACE_HEADER, run

DESIGN = dict(zip(("A", "C", "a_r", "a_c", "a4"), DESIGN_E))


def write_cfg(tmp_path, **kw):
    cfg = {"design": dict(DESIGN), **kw}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if code == 0 else None)


def test_classify_report(tmp_path, capsys):
    code, doc = run_json(capsys, ["classify", "--config", write_cfg(tmp_path, p5=6)])
    assert code == 0
    res = doc["result"]
    assert res["ptype"] == "Type1"
    assert (res["v"], res["w"]) == (pytest.approx(10), pytest.approx(61))
    assert res["p4"] == pytest.approx(100 / 41)
    assert res["R1_sq"] == pytest.approx(927514 / 8405)
    assert doc["version"] == __version__
    assert doc["config"]["p5"] == 6


def test_unsupported_type_exits_1(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"design": {"A": -1, "C": -5, "a_r": 7, "a_c": 4, "a4": 0}}))
    assert run(["classify", "--config", str(path)]) == 1
    assert "UnsupportedType" in capsys.readouterr().err


@pytest.mark.parametrize("cfg", [
    {"design": {"A": 1}},
    {"design": dict(DESIGN), "h": [1, 2]},
    {"design": dict(DESIGN), "bogus": 1},
])
def test_schema_errors_exit_1(tmp_path, capsys, cfg):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    assert run(["trace", "--config", str(path)]) == 1
    assert "schema" in capsys.readouterr().err


def test_missing_motion_spec_exits_1(tmp_path, capsys):
    assert run(["trace", "--config", write_cfg(tmp_path)]) == 1
    assert run(["trace", "--config", write_cfg(tmp_path, h=list(H_E), p5=6)]) == 1


def test_numeric_failure_exits_2(tmp_path, capsys):
    cfg = write_cfg(tmp_path, p5=1e6, sampling={"count": 30})
    assert run(["trace", "--config", cfg]) == 2


def test_trace_outputs(tmp_path, capsys):
    out = tmp_path / "out"
    code, doc = run_json(capsys, ["trace", "--config", write_cfg(tmp_path, h=list(H_E)), "--out", str(out)])
    assert code == 0 and doc["result"]["residuals"]["passed"]
    raw = (out / "motion.csv").read_bytes()
    assert raw.count(b"\r\n") == 201 and b"\n" not in raw.replace(b"\r\n", b"")
    rows = list(csv.reader(raw.decode().splitlines()))
    assert rows[0] == list(TRACE_HEADER)
    assert len(rows[0]) == 1 + 6 + 9 + 3 + 7
    # 17 significant digits round-trip the doubles
    vals = [v for v in rows[1][1:] if "e" not in v.lower()]
    assert any(len(v.lstrip("-").replace(".", "").lstrip("0")) >= 15 for v in vals)
    text = (out / "trace.json").read_text()
    assert json.loads(text) == doc
    keys = list(json.loads(text).keys())
    assert keys == sorted(keys)


def test_p5_config_derives_h(tmp_path, capsys):
    code, doc = run_json(capsys, ["trace", "--config", write_cfg(tmp_path, p5=6.0, sampling={"count": 40})])
    assert code == 0
    assert doc["result"]["motion"]["p5"] == pytest.approx(6.0, rel=1e-9)
    assert doc["result"]["residuals"]["passed"]


def test_surface_obj_and_quintic(tmp_path, capsys):
    out = tmp_path / "out"
    cfg = write_cfg(tmp_path, h=list(H_E), sampling={"count": 50, "n_gamma": 20})
    code, doc = run_json(capsys, ["surface", "--config", cfg, "--out", str(out)])
    assert code == 0
    assert doc["result"]["quintic"]["max"] <= 1e-6
    lines = (out / "surface.obj").read_text().splitlines()
    verts = [ln for ln in lines if ln.startswith("v ")]
    faces = [ln for ln in lines if ln.startswith("f ")]
    assert len(verts) == 50 * 20 and len(faces) == 49 * 19
    assert all(len(f.split()) == 5 for f in faces)
    assert all(len(v.split()) == 4 for v in verts)


def test_outputs_byte_identical(tmp_path, capsys):
    cfg = write_cfg(tmp_path, h=list(H_E), sampling={"count": 30})
    for name in ("a", "b"):
        assert run(["surface", "--config", cfg, "--out", str(tmp_path / name)]) == 0
        assert run(["trace", "--config", cfg, "--out", str(tmp_path / name)]) == 0
    capsys.readouterr()
    for f in ("surface.obj", "generators.csv", "motion.csv", "trace.json", "surface.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_reality_and_workspace(tmp_path, capsys):
    code, doc = run_json(capsys, ["reality", "--config", write_cfg(tmp_path, t=69 / 20)])
    assert code == 0
    iv = doc["result"]["interval"]
    assert iv["lower"] == pytest.approx(3.02850, abs=1e-5)
    assert iv["upper"] == pytest.approx(7.82039, abs=1e-5)
    code, doc = run_json(capsys, ["workspace", "--config", write_cfg(tmp_path, t=69 / 20, leg_range=[8, 12])])
    assert code == 0 and doc["result"]["free"] is True
    assert run(["workspace", "--config", write_cfg(tmp_path, t=69 / 20)]) == 1
    assert run(["reality", "--config", write_cfg(tmp_path)]) == 1


def test_krames_command(tmp_path, capsys):
    out = tmp_path / "out"
    code, doc = run_json(capsys, ["krames", "--config", write_cfg(tmp_path, h=list(H_E)), "--out", str(out)])
    assert code == 0
    assert doc["result"]["max_rms"] <= 1e-8
    assert doc["result"]["max_center_offset"] <= 1e-8
    rows = list(csv.reader((out / "krames.csv").read_text().splitlines()))
    assert [r[0] for r in rows[1:]].count("p_bar") == 2
    assert [r[0] for r in rows[1:]].count("P_bar") == 10


def test_verify_worked_example(tmp_path, capsys):
    code, doc = run_json(capsys, ["verify", "--config", write_cfg(tmp_path, h=list(H_E))])
    assert code == 0
    res = doc["result"]
    assert res["passed"]
    assert res["appendix_cubics"]["passed"]
    assert res["quintic"]["max"] <= 1e-6


def test_verify_v0_design(tmp_path, capsys):
    path = tmp_path / "v0.json"
    path.write_text(json.dumps({"design": {"A": -1, "C": -5, "a_r": 2, "a_c": 4, "a4": 2},
                                "h": [1, 0.3, -0.7], "sampling": {"count": 60}}))
    code, doc = run_json(capsys, ["verify", "--config", str(path)])
    assert code == 0
    assert doc["result"]["motion"]["special_v0"] is True
    assert doc["result"]["residuals"]["passed"]
    assert "quintic" not in doc["result"]


def test_tolerance_precedence(tmp_path, capsys, monkeypatch):
    cfg = write_cfg(tmp_path, tolerance=1e-7)
    _, doc = run_json(capsys, ["classify", "--config", cfg])
    assert doc["tolerance"] == 1e-7
    monkeypatch.setenv("PENTAMOTION_TOL", "1e-6")
    _, doc = run_json(capsys, ["classify", "--config", cfg])
    assert doc["tolerance"] == 1e-6
    _, doc = run_json(capsys, ["classify", "--config", cfg, "--tol", "1e-5"])
    assert doc["tolerance"] == 1e-5
    assert run(["classify", "--config", cfg, "--tol", "-1"]) == 1


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "pentamotion.cli", "classify", "--config", write_cfg(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "classify"
