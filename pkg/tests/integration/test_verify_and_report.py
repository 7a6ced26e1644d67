# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""End-to-end verification suites and report experiments."""

import csv

import pytest
import yaml

from tests.integration.helpers import result_lines, run_cli


@pytest.mark.parametrize("suite", ["symbols", "gauss", "poisson", "stirling"])
def test_quick_suite_passes(gaussian_moments, out_dir, suite):
    """Each quick suite prints only PASS lines."""
    status, out, err = run_cli(gaussian_moments, ["verify", suite], out_dir)
    lines = result_lines(out)
    assert status == 0, err
    assert lines
    assert all(line.startswith("PASS") for line in lines)


def test_suite_output_is_reproducible(gaussian_moments, tmp_path):
    """The same seed prints the same results."""
    args = ["--seed", "12345", "verify", "symbols"]
    _, first, _ = run_cli(gaussian_moments, args, tmp_path / "first")
    _, second, _ = run_cli(gaussian_moments, args, tmp_path / "second")
    assert first == second


def test_first_moment_report(gaussian_moments, out_dir):
    """report thm12 writes its files and passes a loose bound."""
    args = [
        "--weight",
        "exp_decay",
        "--x-grid",
        "50,100,200,400",
        "--fit-bound",
        "5",
        "report",
        "thm12",
    ]
    status, _, err = run_cli(gaussian_moments, args, out_dir)
    assert status == 0, err
    with open(out_dir / "thm12.csv") as f:
        rows = list(csv.DictReader(f))
    assert [float(row["X"]) for row in rows] == [50.0, 100.0, 200.0, 400.0]
    with open(out_dir / "thm12_fit.yaml") as f:
        fit = yaml.safe_load(f)
    assert fit["passed"] is True
    assert (out_dir / "thm12_residuals.csv").exists()
    assert (out_dir / "manifest.yaml").exists()


def test_ratios_rows(gaussian_moments, out_dir):
    """ratios prints one CSV row per grid point."""
    args = ["--output", "csv", "--weight", "exp_decay", "--x-grid", "50,100", "ratios"]
    status, out, err = run_cli(gaussian_moments, args, out_dir)
    assert status == 0, err
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 2
    assert rows[0]["beta"] == "0.3"
    assert rows[0]["flagged"] == "0"
