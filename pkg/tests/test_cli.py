import json
import subprocess
import sys
from pathlib import Path

import pytest

from logsurf import schema
from logsurf.cli import main
from logsurf.discrepancy import classify
from logsurf.fixtures import gmrlc_fixtures, toric_a1_cartier_boundary

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    lines = [json.loads(line) for line in out.splitlines() if line.strip()]
    return code, lines


def test_classify_a1(capsys):
    code, (rep,) = run(capsys, "classify", "--model", FIX / "a1.json", "--delta", '{"D1":"1","D2":"1"}')
    assert code == 0
    assert rep["mrlc"]["value"] is False and rep["gmrlc"]["value"] is True
    assert rep["gmrlc"]["witness"] == ["E"]
    assert rep["delta_Y"]["E"] == 2


def test_classify_smooth(capsys):
    code, (rep,) = run(capsys, "classify", "--model", FIX / "empty-boundary-smooth.json")
    assert code == 0 and rep["klt"]["value"] is True


def test_classify_fractional_delta_file(capsys, tmp_path):
    f = tmp_path / "delta.json"
    f.write_text('{"D1": "1/3"}')
    code, (rep,) = run(capsys, "classify", "--model", FIX / "a1.json", "--delta", f"@{f}")
    assert code == 0 and rep["delta_Y"]["E"] == "1/3"


def test_mmp_f1(capsys):
    code, (tr,) = run(capsys, "mmp", "--fan", FIX / "f1_fan.json")
    assert code == 0
    assert tr["birational_steps"] == 1
    assert tr["outcome"]["kind"] == "mori_fiber_space" and tr["outcome"]["base_dimension"] == 0
    assert tr["universe_complete"] is True and tr["warnings"] == []


def test_mmp_trace_stream_and_dot(capsys, tmp_path):
    code, lines = run(capsys, "mmp", "--fan", FIX / "f1_fan.json", "--trace", "--dot", tmp_path)
    assert code == 0 and len(lines) == 2
    assert lines[0]["step"] == 1 and lines[0]["ray"]["kind"] == "birational"
    assert "outcome" in lines[1]
    dots = sorted(p.name for p in tmp_path.iterdir())
    assert dots == ["step01_after.dot", "step01_before.dot"]


def test_mmp_refusal(capsys):
    code, (err,) = run(capsys, "mmp", "--model", FIX / "genus2_cone.json")
    assert code == 3 and err["error"] == "NotGMRLC"


def test_multiplier_refusal_without_snc(capsys, tmp_path):
    obj = json.loads((FIX / "a2_chain.json").read_text())
    obj["snc_attested"] = False
    f = tmp_path / "m.json"
    f.write_text(json.dumps(obj))
    code, (err,) = run(capsys, "multiplier", "--model", f)
    assert code == 3 and err["error"] == "NotLogResolution"


def test_multiplier_three_lines(capsys):
    code, (out,) = run(capsys, "multiplier", "--model", FIX / "plane_three_lines.json",
                       "--delta", '{"L1":1,"L2":1,"L3":1}')
    assert code == 0 and out["klt"] is False and out["floor_delta_Y"]["E"] == 2


@pytest.mark.parametrize("delta, rule", [
    ('{"D1":"3/2"}', "boundary_coefficient_range"),
    ('{"Q":"1"}', "unknown_curve"),
    ('{"D1": 0.5}', "schema"),
    ('{"D1": ', "json"),
])
def test_validation_errors(capsys, delta, rule):
    code, (err,) = run(capsys, "classify", "--model", FIX / "a1.json", "--delta", delta)
    assert code == 2
    assert err["violations"][0]["rule"] == rule


def test_invalid_model(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"curves": [{"id": "E", "self_int": -1, "genus": 0, "k_dot": 0}],
                             "contracted": ["E"]}))
    code, (err,) = run(capsys, "classify", "--model", f)
    assert code == 2 and err["violations"][0]["rule"] == "adjunction"


def test_not_contractible(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"curves": [{"id": "E", "self_int": 0, "genus": 0, "k_dot": -2}],
                             "contracted": ["E"]}))
    code, (err,) = run(capsys, "minres", "--model", f)
    assert code == 2 and err["error"] == "NotContractible"


def test_pullback_residuals(capsys):
    code, (out,) = run(capsys, "pullback", "--model", FIX / "a2_chain.json", "--delta", '{"L":1}')
    assert code == 0
    assert out["delta_Y"] == {"E1": "2/3", "E2": "1/3", "L": 1}
    assert set(out["exceptional_residuals"].values()) == {0}


def test_pullback_out_of_range(capsys):
    argv = ["pullback", "--model", FIX / "a1.json", "--delta", '{"D1":2}']
    assert run(capsys, *argv)[0] == 2
    code, (out,) = run(capsys, *argv, "--allow-out-of-range")
    assert code == 0 and out["delta_Y"]["E"] == 2


def test_fundcycle(capsys):
    code, (out,) = run(capsys, "fundcycle", "--model", FIX / "elliptic_cone.json")
    assert code == 0
    assert out["points"] == [{"component": ["E"], "fundamental_cycle": {"E": 1},
                              "arithmetic_genus": 1, "rational": False}]


def test_minres_roundtrip(capsys):
    code, (out,) = run(capsys, "minres", "--model", FIX / "a2_chain.json")
    assert code == 0
    assert schema.model_to_json(schema.model_from_json(out)) == out


def test_toric_build_and_dot(capsys, tmp_path):
    dot = tmp_path / "g.dot"
    code, (out,) = run(capsys, "toric-build", "--fan", FIX / "p112_fan.json", "--dot", dot)
    assert code == 0
    model = schema.model_from_json(out["model"])
    assert len(model.contracted) == 1
    text = dot.read_text()
    assert text.count("label=") == len(model.config.curves)
    assert text.count(" -- ") == sum(model.config.intersections.values())
    assert "C^2=-2 g=0" in text


def test_dot_multi_edge():
    model, _ = toric_a1_cartier_boundary()
    text = schema.model_to_dot(model)
    assert text.count('"D1" -- "D2"') == 6


@pytest.mark.parametrize("name, model, delta", gmrlc_fixtures(), ids=lambda x: x if isinstance(x, str) else "")
def test_report_roundtrip(name, model, delta):
    rep = classify(model, delta)
    js = schema.report_to_json(rep)
    again = schema.report_to_json(schema.report_from_json(json.loads(json.dumps(js))))
    assert again == js
    m = schema.model_to_json(model)
    assert schema.model_to_json(schema.model_from_json(json.loads(json.dumps(m)))) == m


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "logsurf.cli", "classify", "--model",
                           str(FIX / "empty-boundary-smooth.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["klt"]["value"] is True
