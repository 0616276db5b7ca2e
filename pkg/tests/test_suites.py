import pytest

from regulator_lab.suites import SUITES, RunConfig, run_suite


@pytest.mark.parametrize("name", SUITES + ("shadow",))
def test_suite_passes_at_default_config(name):
    res = run_suite(name, RunConfig().validate())
    failed = [k for k, w in res.witnesses.items() if w["status"] == "fail"]
    assert res.status == "pass", failed
    assert res.witnesses
    assert "seconds" in res.timings


def test_recorded_witnesses_present():
    res = run_suite("suspension", RunConfig().validate())
    assert res.witnesses["chern_weil_class_2"]["status"] == "recorded"
    assert res.witnesses["suspension_scalars_vs_p2"]["status"] == "recorded"


def test_effective_level_is_capped_for_gl3():
    res = run_suite("phi-psi", RunConfig(N=3, max_level=5).validate())
    assert res.witnesses["effective_max_level"]["value"] == 3
    assert res.status == "pass"


def test_lazard_valuation_bounds():
    res = run_suite("lazard", RunConfig(p=5, D=12, m=6).validate())
    assert res.status == "pass"
    assert all(b["min_absprec"] >= b["required"] for b in res.valuation_bounds)
