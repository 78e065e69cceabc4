import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from adelharm.cli import main
from adelharm.scenario import ScenarioError, parse_scenario, parse_scenario_text, scenario_from_dict
from adelharm.suites import Report, emit_report, load_counterexample, run_suite

ROOT = Path(__file__).resolve().parent.parent
SCEN = ROOT / "scenarios"

EMPTY_JSON = """{
  "tool": "adelharm",
  "version": "0.1.0",
  "scenario": "empty",
  "seed": 0,
  "truncated": false,
  "summary": {},
  "suites": {},
  "counterexamples": []
}
"""

EMPTY_MD = """# adelharm report: empty

- version: 0.1.0
- seed: 0

| suite | pass | fail | unknown |
|---|---|---|---|
"""

SMALL = {"level0_max_order": 6, "level0_random": 2, "homs": 4, "pairs": 3, "category_models": 2,
         "category_pairs": 2, "smooth_models": 1, "smooth_random": 2, "poisson_models": 1, "poisson_functions": 3}


def write(tmp_path, obj, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def test_minimal_scenario():
    sc = scenario_from_dict({"model": {"level": 1, "components": {"(0)": [2]}}})
    assert sc.model.components == {"(0)": [2]} and sc.seed == 0


def test_trivial_factor_rejected():
    with pytest.raises(ScenarioError) as exc:
        scenario_from_dict({"model": {"level": 1, "components": {"(0)": [1]}}})
    assert any("trivial factor" in msg for _, msg in exc.value.problems)


def test_unknown_suite_lists_valid():
    with pytest.raises(ScenarioError) as exc:
        scenario_from_dict({"suite": "bogus"})
    (loc, msg), = exc.value.problems
    assert loc == "suite" and "level0, category, smooth, poisson, all" in msg


def test_every_problem_reported():
    with pytest.raises(ScenarioError) as exc:
        scenario_from_dict({"suite": "bogus", "colour": 1, "model": {"level": 1, "components": {"(0)": [1]}}})
    locs = {loc for loc, _ in exc.value.problems}
    assert {"suite", "colour"} <= locs and len(exc.value.problems) == 3


def test_malformed_json():
    with pytest.raises(ScenarioError) as exc:
        parse_scenario_text("{nope")
    assert "malformed JSON" in exc.value.problems[0][1]


def test_missing_file(tmp_path):
    with pytest.raises(ScenarioError):
        parse_scenario(tmp_path / "absent.json")


def test_empty_report_skeleton():
    assert emit_report(Report("empty", 0)) == EMPTY_JSON.encode()
    assert emit_report(Report("empty", 0), "md") == EMPTY_MD.encode()


def test_level0_default_passes(tmp_path, capsys):
    path = write(tmp_path, {"name": "small", "sizes": SMALL})
    assert main(["verify", path, "--suite", "level0"]) == 0
    rep = json.loads(capsys.readouterr().out)
    s = rep["summary"]["level0"]
    assert s["fail"] == 0 and s["pass"] > 0


def test_determinism_and_workers(tmp_path):
    sc = scenario_from_dict({"name": "det", "sizes": SMALL, "seed": 7})
    a = emit_report(run_suite(sc, "all"))
    b = emit_report(run_suite(sc, "all"))
    c = emit_report(run_suite(sc, "all", workers=2))
    assert a == b == c
    assert emit_report(run_suite(sc, "level0", seed=8)) != emit_report(run_suite(sc, "level0"))


def test_corrupted_fixture_round_trip(tmp_path, capsys):
    code = main(["verify", str(SCEN / "corrupt.json")])
    assert code == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["summary"]["category"]["fail"] == 1
    (cx,) = rep["counterexamples"]
    assert cx["case"].startswith("corrupted")
    replay = run_suite(load_counterexample(cx["scenario"]))
    assert replay.failures == 1
    (case,) = replay.suites["category"]["cases"]
    assert case["id"] == cx["case"] and case["detail"] == cx["detail"]
    path = write(tmp_path, cx["scenario"])
    assert main(["verify", path]) == 1


def test_poisson_standard(capsys):
    assert main(["poisson", str(SCEN / "poisson_standard.json")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["equal"] and out["lhs"] == out["rhs"]
    assert main(["verify", str(SCEN / "poisson_standard.json"), "--suite", "poisson"]) == 0


def test_dual_and_fourier_commands(capsys):
    assert main(["dual", str(SCEN / "level2.json")]) == 0
    rows = json.loads(capsys.readouterr().out)["levels"]
    assert all(r["perp"] for r in rows)
    assert main(["fourier", str(SCEN / "level2.json")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["functions"] and out["germs"]


def test_truncation_exit_code(tmp_path, capsys):
    path = write(tmp_path, {"sizes": dict(SMALL, max_cases=3)})
    assert main(["verify", path, "--suite", "level0"]) == 3
    assert json.loads(capsys.readouterr().out)["truncated"] is True


def test_usage_errors(tmp_path, capsys):
    path = write(tmp_path, {"sizes": SMALL})
    assert main(["verify", path, "--suite", "nope"]) == 2
    assert "valid suites are" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 2
    bad = write(tmp_path, {"model": {"level": 1, "components": {"(0)": [1]}}}, "bad.json")
    assert main(["verify", bad]) == 2
    assert "trivial factor" in capsys.readouterr().err


def test_bad_literals_are_schema_errors(tmp_path, capsys):
    sc = {"model": {"level": 2, "components": {"(0,0)": [2], "(1,0)": [3]}, "cut": [0, 0]},
          "germs": [{"flavor": "E", "window": [0, 1], "data": [[[1, 0], "1"]]}],
          "functions": [{"group": [2], "values": [[[0, 0], "1"]]}],
          "schwartz": [{"a": [0], "z": [0, 0]}]}
    path = write(tmp_path, sc)
    for cmd in ("verify", "fourier", "poisson", "dual"):
        assert main([cmd, path]) == 2
        err = capsys.readouterr().err
        assert "germs.0" in err and "functions.0" in err and "schwartz" in err


def test_markdown_and_output_file(tmp_path):
    path = write(tmp_path, {"name": "md", "sizes": SMALL})
    out = tmp_path / "r.md"
    assert main(["verify", path, "--suite", "level0", "--format", "md", "-o", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("# adelharm report: md") and "| level0 |" in text


def test_caps_make_cases_unknown(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("ADELHARM_MAX_ORDER", "4")
    path = write(tmp_path, {"sizes": SMALL})
    assert main(["verify", path, "--suite", "level0"]) == 0
    s = json.loads(capsys.readouterr().out)["summary"]["level0"]
    assert s["unknown"] > 0 and s["fail"] == 0


@pytest.mark.skipif(shutil.which("adelharm") is None, reason="console script not installed")
def test_console_script(tmp_path):
    path = write(tmp_path, {"sizes": SMALL})
    r = subprocess.run(["adelharm", "verify", path, "--suite", "category"], capture_output=True)
    assert r.returncode == 0 and json.loads(r.stdout)["summary"]["category"]["fail"] == 0
