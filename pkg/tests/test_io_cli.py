import json
import math
from pathlib import Path

import pytest

from slot_pricer import ValidationError
from slot_pricer.cli import main
from slot_pricer.io import InstanceFile, dump_instance, dumps_result, instance_hash, load_instance, parse_instance

REF1 = Path(__file__).resolve().parents[1] / "instances" / "ref1.json"

GOOD = """{
  "schema": "slot-pricing/1",
  "distance": {"family": "quadratic", "a": 1, "c": -1},
  "slots": [
    {"t": 0, "capacity": 2},
    {"t": 2, "capacity": 2}
  ],
  "measure": {"breakpoints": [-1, 3], "densities": [0.5]}
}
"""


def test_round_trip(ref1):
    doc = load_instance(REF1)
    assert doc.instance == ref1
    again = parse_instance(dump_instance(doc))
    assert again == doc
    assert instance_hash(again.instance) == instance_hash(ref1)


@pytest.mark.parametrize(
    "old, new, line, field",
    [
        ('{"t": 2, "capacity": 2}', '{"t": 0, "capacity": 2}', 6, "slots[1].t"),
        ('{"t": 2, "capacity": 2}', '{"t": 2, "capacity": -2}', 6, "capacity"),
        ('"a": 1', '"a": 0', 3, "distance.a"),
        ('"densities": [0.5]', '"densities": [0.5, 1]', 8, "measure"),
        ('"quadratic"', '"cubic"', 3, "distance.family"),
    ],
)
def test_errors_point_at_line(old, new, line, field):
    with pytest.raises(ValidationError) as exc:
        parse_instance(GOOD.replace(old, new), "x.json")
    msg = str(exc.value)
    assert msg.startswith(f"x.json:{line}:"), msg
    assert field in msg


def test_malformed_json_line():
    with pytest.raises(ValidationError, match=r"^x.json:4: invalid JSON"):
        parse_instance(GOOD.replace('"slots": [', '"slots": [,'), "x.json")


def test_results_are_strict_json():
    text = dumps_result({"value": "-inf", "b": 1, "a": 2})
    assert text.index('"a"') < text.index('"b"')
    with pytest.raises(ValueError):
        dumps_result({"value": math.inf})


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_cli(capsys):
    code, out, _ = run(capsys, "solve", "--instance", REF1, "--prices", "0.5,1")
    data = json.loads(out)
    assert code == 0
    assert data["profile"] == [0.5, 0.5]
    assert data["value"] == pytest.approx(math.sqrt(0.5))
    assert data["transitions"] == 8
    assert len(data["instance_sha256"]) == 64


def test_solve_infeasible_exit_code(tmp_path, capsys):
    bad = tmp_path / "tiny.json"
    bad.write_text(GOOD.replace('"capacity": 2', '"capacity": 0'))
    code, out, _ = run(capsys, "solve", "--instance", bad, "--prices=-1,0.5")
    assert code == 1
    assert json.loads(out)["value"] == "-inf"


def test_validation_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(GOOD.replace('"t": 2', '"t": -2'))
    code, _, err = run(capsys, "validate", "--instance", bad)
    assert code == 2
    assert f"{bad}:6:" in err
    code, _, _ = run(capsys, "validate", "--instance", tmp_path / "missing.json")
    assert code == 2


def test_mode_exit_code(tmp_path, capsys):
    hyp = tmp_path / "hyp.json"
    hyp.write_text(GOOD.replace('"quadratic", "a": 1, "c": -1', '"hyperbolic", "a": 1, "c": -2'))
    code, _, err = run(capsys, "bounds", "--instance", hyp, "--deltas", "0.1")
    assert code == 3
    assert "strong convexity" in err


def test_bad_delta_exit_code(capsys):
    code, _, _ = run(capsys, "bounds", "--instance", REF1, "--deltas", "0.1,-1")
    assert code == 2


def _strip_time(text):
    data = json.loads(text)
    data.pop("wall_time_s")
    return data


def test_bounds_deterministic_across_threads(capsys, monkeypatch):
    _, one, _ = run(capsys, "bounds", "--instance", REF1, "--deltas", "0.5,0.25", "--threads", "1")
    monkeypatch.setenv("SLOT_PRICER_THREADS", "4")
    _, many, _ = run(capsys, "bounds", "--instance", REF1, "--deltas", "0.25,0.5")
    assert _strip_time(one) == _strip_time(many)
    data = _strip_time(one)
    assert data["constants"]["L"] == 0.5
    assert [r["delta"] for r in data["reports"]] == [0.5, 0.25]
    for r in data["reports"]:
        assert r["lb"] <= r["ub"] + 1e-9


def test_bounds_warns_above_delta_max(capsys):
    code, out, _ = run(capsys, "bounds", "--instance", REF1, "--deltas", "20")
    assert code == 0
    assert "delta_max" in json.loads(out)["warnings"][0]
    _, out, _ = run(capsys, "bounds", "--instance", REF1, "--deltas", "20", "--no-warn-delta-max")
    assert json.loads(out)["warnings"] == []


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("SLOT_PRICER_THREADS", "many")
    code, _, _ = run(capsys, "bounds", "--instance", REF1, "--deltas", "0.5")
    assert code == 2


def test_check_cli(capsys):
    code, out, _ = run(capsys, "check", "--instance", REF1, "--profile", "0.5,1.0")
    data = json.loads(out)
    assert code == 0
    assert data["revenue"] == pytest.approx(0.35355339, abs=1e-8)
    assert data["slots"][1]["served_region"] == [2.0, 2.0]
    assert data["slots"][1]["load"] == 0.0
    assert data["slots"][0]["envelope_region"][0] == "-inf"
    code, _, _ = run(capsys, "check", "--instance", REF1, "--profile", "0.5")
    assert code == 2


def test_oracle_cli(capsys):
    code, out, _ = run(capsys, "oracle", "--instance", REF1, "--grid", "0.5")
    data = json.loads(out)
    assert code == 0
    assert data["solver_agrees"]
    assert data["profiles_evaluated"] == len(data["parameters"]["prices"]) ** 2


def test_envelope_csv(tmp_path, capsys):
    out = tmp_path / "env.csv"
    code, _, _ = run(capsys, "envelope", "--instance", REF1, "--profile", "0.5,1.0", "--samples", "11", "--output", out)
    lines = out.read_text().splitlines()
    assert code == 0
    assert lines[0] == "x,envelope,slot,served"
    rows = [line.split(",") for line in lines[1:]]
    xs = [float(r[0]) for r in rows]
    assert xs == sorted(xs) and len(xs) >= 11
    assert 1.125 in xs  # region boundaries are always sampled
    code, _, _ = run(capsys, "envelope", "--instance", REF1, "--profile", "0.5,1.0", "--range", "2,1")
    assert code == 2
