import json

import pytest

from rotforge.verify import CheckResult, dilution_grid_deviation, encoder_deviation, run_verify


@pytest.fixture(scope="module")
def report():
    return run_verify()


def test_all_checks_pass(report):
    assert report.passed, report.failed()
    names = {c.name for c in report.checks}
    for level in (4, 5, 6, 7, 8):
        assert f"dp_mek_outcome[l={level}]" in names
        assert f"single_error_detection[l={level}]" in names
    assert "generic_bound_violations" in names


def test_errata_are_flagged(report):
    assert set(report.errata) == {"p_expression", "eps_l_squared"}


def test_report_serialises(report):
    data = json.loads(json.dumps(report.to_json()))
    assert data["passed"] is True
    assert data["info"]["monte_carlo"]["violations"] == 0


def test_negative_control_fails_only_pivot_checks():
    rep = run_verify(pivot_sign=-1, trials=20)
    assert not rep.passed
    assert rep.failed()
    assert all("v_form" in n for n in rep.failed())


def test_components():
    assert encoder_deviation() < 1e-12
    assert dilution_grid_deviation(levels=range(3, 6), n_eps=5) < 1e-12
    assert CheckResult("x", 0.0, 0.0).passed
    assert not CheckResult("x", 1e-3, 1e-4).passed
