import json
import shutil
import subprocess

import pytest

from regulator_lab import cli, suites
from regulator_lab.report import build_report, strip_timings, to_json, to_tsv
from regulator_lab.suites import ConfigError, RunConfig, SuiteResult


def run(args, tmp_path):
    return cli.main(args + ["--run-file", str(tmp_path / "run.json")])


def test_verify_ce_and_report_json(tmp_path, capsys):
    assert run(["verify", "ce", "--N", "2"], tmp_path) == 0
    out = tmp_path / "r.json"
    assert cli.main(["report", "--format", "json", "--out", str(out),
                     "--run-file", str(tmp_path / "run.json")]) == 0
    rep = json.loads(out.read_text())
    assert rep["schema_version"] == 1
    (suite,) = rep["suites"]
    assert set(suite) == {"suite", "status", "witnesses", "valuation_bounds", "timings"}
    assert suite["witnesses"]["betti"]["value"] == [1, 1, 0, 1, 1]
    assert suite["witnesses"]["p2_closed"]["status"] == "pass"


def test_report_tsv_line_count(tmp_path):
    assert run(["verify", "all", "--N", "1"], tmp_path) == 0
    out = tmp_path / "r.tsv"
    cli.main(["report", "--format", "tsv", "--out", str(out), "--run-file", str(tmp_path / "run.json")])
    lines = out.read_text().splitlines()
    assert len(lines) == len(suites.SUITES) + 1
    assert lines[0].split("\t")[0] == "suite"


def test_empty_report(tmp_path):
    out = tmp_path / "empty.json"
    assert cli.main(["report", "--format", "json", "--out", str(out),
                     "--run-file", str(tmp_path / "missing.json")]) == 0
    rep = json.loads(out.read_text())
    assert rep["suites"] == [] and rep["schema_version"] == 1
    assert to_tsv(rep).count("\n") == 1


def test_determinism(tmp_path):
    texts = []
    for i in range(2):
        rf = tmp_path / f"run{i}.json"
        assert cli.main(["verify", "lazard", "--seed", "3", "--run-file", str(rf)]) == 0
        texts.append(to_json(strip_timings(json.loads(rf.read_text()))))
    assert texts[0] == texts[1]


def test_shadow_records_seed(tmp_path):
    rf = tmp_path / "a.json"
    assert cli.main(["shadow", "--N", "2", "--seed", "9", "--run-file", str(rf)]) == 0
    rep = json.loads(rf.read_text())
    assert rep["suites"][0]["suite"] == "shadow"
    assert rep["config"]["seed"] == 9


@pytest.mark.parametrize("args", [["verify", "ce", "--N", "4"], ["verify", "ce", "--p", "9"],
                                  ["verify", "ce", "--p", "2"], ["verify", "ce", "--m", "0"],
                                  ["verify", "weil", "--weil-degree", "1"],
                                  ["verify", "normalization", "--max-level", "6"],
                                  ["shadow", "--N", "3"]])
def test_config_errors_exit_3(args, tmp_path):
    assert run(args, tmp_path) == 3


def test_unknown_suite_exit_code(tmp_path):
    with pytest.raises(SystemExit) as e:
        run(["verify", "nope"], tmp_path)
    assert e.value.code == 3


def test_precision_exhaustion_exit_4(tmp_path):
    assert run(["verify", "lazard", "--p", "3", "--m", "1", "--D", "9"], tmp_path) == 4


def test_suite_failure_exit_2(tmp_path, monkeypatch):
    def failing(cfg):
        res = SuiteResult("ce")
        res.check("planted", False)
        return res
    monkeypatch.setitem(suites.RUNNERS, "ce", failing)
    assert run(["verify", "ce"], tmp_path) == 2
    rep = json.loads((tmp_path / "run.json").read_text())
    assert rep["overall"] == "fail"


def test_recorded_never_fails():
    res = SuiteResult("x")
    res.record("sign", -1)
    assert res.status == "pass"
    assert res.witnesses["sign"]["status"] == "recorded"
    assert build_report([res])["overall"] == "pass"


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(N=0).validate()
    assert RunConfig().validate().D == 10


def test_phi_psi_sign_is_recorded(tmp_path):
    assert run(["verify", "phi-psi", "--N", "2", "--max-level", "3"], tmp_path) == 0
    rep = json.loads((tmp_path / "run.json").read_text())
    w = rep["suites"][0]["witnesses"]
    assert w["per_degree_sign"]["status"] == "recorded"
    assert w["per_degree_sign"]["value"] == {"0": 1, "1": -1, "2": "vacuous"}


@pytest.mark.skipif(shutil.which("regulator-lab") is None, reason="console script not installed")
def test_console_script(tmp_path):
    p = subprocess.run(["regulator-lab", "verify", "ce", "--N", "1", "--run-file",
                        str(tmp_path / "r.json")], capture_output=True, text=True)
    assert p.returncode == 0
    assert "ce: pass" in p.stdout
