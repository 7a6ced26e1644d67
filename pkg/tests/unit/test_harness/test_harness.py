# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

import math
import os

import mpmath
import pytest
import yaml

import harness
import moments


def _reports(flagged=0):
    return [
        moments.MomentReport(
            X=x,
            alpha=0.1,
            beta=0.3,
            lhs=x + x**0.5,
            term1=float(x),
            term2=0.0,
            n_count=int(x),
            flagged_count=flagged,
        )
        for x in (100.0, 200.0, 400.0, 800.0)
    ]


def test_property_result_text():
    """PASS and FAIL lines with and without detail."""
    result = harness.PropertyResult("symbols", "reciprocity", True, 10, 0.0)
    assert result.to_text() == "PASS symbols.reciprocity count=10 worst=0"
    failed = harness.PropertyResult(
        "lfunc", "functional_equation", False, 3, 0.125, "t in [-5, 5]"
    )
    assert failed.to_text() == "FAIL lfunc.functional_equation count=3 worst=0.125 t in [-5, 5]"
    assert failed.to_json()["property"] == "functional_equation"


def test_unknown_suite(config):
    """Unknown suites raise ValueError."""
    with pytest.raises(ValueError):
        harness.verify("everything", config)


def test_stirling_suite(config):
    """The Stirling suite checks 5 x 61 points within the bound."""
    (result,) = harness.verify("stirling", config)
    assert result.passed
    assert result.count == 5 * 61
    assert result.worst < harness.STIRLING_BOUND


def test_symbol_suite_is_reproducible(config):
    """A fixed seed gives identical results."""
    first = harness.verify("symbols", config)
    second = harness.verify("symbols", config)
    assert first == second
    assert all(result.passed for result in first)


def test_verify_restores_precision(config):
    """verify leaves mpmath's precision unchanged."""
    before = mpmath.mp.dps
    config = config.model_copy(update={"precision_digits": 25})
    harness.verify("stirling", config)
    assert mpmath.mp.dps == before


def test_unknown_experiment(config):
    """Unknown experiments raise ValueError."""
    with pytest.raises(ValueError):
        harness.report("thm99", config)


def test_experiment_report_pass_rule():
    """A report passes on a small slope with no flagged twists."""
    assert harness.ExperimentReport("thm12", _reports(), 0.5, 1.0, 0.75).passed
    assert not harness.ExperimentReport("thm12", _reports(), 0.9, 1.0, 0.75).passed
    assert not harness.ExperimentReport("thm11", _reports(flagged=1), 0.5, 1.0, 0.75).passed


def test_write_report(tmp_path):
    """Rows, residuals, Q polynomial rows and the fit go to four files."""
    extra = [{"X": 100.0, "lhs": 1.5, "X_times_Q": 1.25, "relative_deviation": 0.2}]
    result = harness.ExperimentReport("cor13", _reports(), 0.5, 1.0, 0.75, extra)
    paths = harness.write_report(result, str(tmp_path))
    assert [os.path.basename(p) for p in paths] == [
        "cor13.csv",
        "cor13_residuals.csv",
        "cor13_q_poly.csv",
        "cor13_fit.yaml",
    ]
    with open(paths[0]) as f:
        lines = f.read().splitlines()
    assert lines[0].startswith("X,alpha,beta,lhs_re")
    assert len(lines) == 5
    with open(paths[1]) as f:
        assert f.read().splitlines()[1] == "100,10"
    with open(paths[3]) as f:
        fit = yaml.safe_load(f)
    assert fit == {"slope": 0.5, "r2": 1.0, "bound": 0.75, "passed": True}


def test_write_report_without_extra_rows(tmp_path):
    """Without extra rows three files are written."""
    result = harness.ExperimentReport("thm11", _reports(), 0.5, 1.0, 0.75)
    assert len(harness.write_report(result, str(tmp_path))) == 3


def test_write_manifest(config):
    """The manifest records the seed and a rounded runtime."""
    path = harness.write_manifest(config, 1.23456, ["a.csv"])
    assert os.path.basename(path) == harness.MANIFEST_NAME
    with open(path) as f:
        manifest = yaml.safe_load(f)
    assert manifest["seed"] == config.seed
    assert manifest["runtime_s"] == 1.235
    assert manifest["outputs"] == ["a.csv"]
    assert manifest["config"]["threads"] == 1
    assert set(manifest["versions"]) == {"numpy", "scipy", "mpmath", "pydantic", "PyYAML"}


def test_short_grid_report_skips_the_fit(config):
    """Fewer than four grid points leave the slope undefined and fail."""
    config = config.model_copy(update={"x_grid": [20.0, 40.0], "weight": "exp_decay"})
    result = harness.report("thm12", config)
    assert [r.X for r in result.reports] == [20.0, 40.0]
    assert math.isnan(result.slope)
    assert not result.passed


@pytest.mark.parametrize("exponent, passed", [(1.1, True), (1.3, False)])
def test_second_moment_gate(monkeypatch, exponent, passed):
    """The growth check fits over 500..4000 and fails slopes above 1.2."""
    seen = []

    def fake_second_moment(x):
        seen.append(x)
        return float(x) ** exponent

    monkeypatch.setattr(moments, "second_moment_lhs", fake_second_moment)
    result = harness._second_moment_growth()
    assert seen == [500, 1000, 2000, 4000]
    assert result.worst == pytest.approx(exponent)
    assert result.passed is passed
