# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""Unit tests for the family sums and the multiple Dirichlet series checks."""

import math

import numpy as np
import pytest

import moments
from zi_core import CapExceededError, GaussianInt, is_squarefree


def _report(x, residual, term1=1.0):
    return moments.MomentReport(
        X=x,
        alpha=0.2,
        beta=None,
        lhs=term1 + residual,
        term1=term1,
        term2=0.0,
        n_count=1,
    )


def test_check_cap():
    """X above the cap is refused unless forced."""
    moments.check_cap(100, max_x=1000)
    moments.check_cap(5000, max_x=1000, force=True)
    with pytest.raises(CapExceededError):
        moments.check_cap(5000, max_x=1000)


def test_family_support(exp_decay):
    """The family support keeps the weights above the floor."""
    re, im, weights = moments.family_support(100, exp_decay)
    norms = re * re + im * im
    assert len(re) == len(im) == len(weights)
    assert (weights >= exp_decay.maximum * 1e-12).all()
    assert np.allclose(weights, np.exp(-norms / 100))
    assert norms[0] == 1


def test_first_moment_sum_argument_checks(exp_decay):
    """alpha at 1/2 and X above the cap are rejected."""
    with pytest.raises(ValueError):
        moments.first_moment_sum(50, 0.5, exp_decay)
    with pytest.raises(CapExceededError):
        moments.first_moment_sum(20_000, 0.2, exp_decay)


def test_first_moment_sum_is_thread_independent(exp_decay):
    """Splitting the family across threads leaves the sum unchanged."""
    single = moments.first_moment_sum(30, 0.2, exp_decay, threads=1)
    double = moments.first_moment_sum(30, 0.2, exp_decay, threads=2)
    assert single == double
    assert single.n_count > 0


def test_ratios_on_the_diagonal_sum_the_weights(exp_decay):
    """At alpha = beta each twist contributes its weight."""
    _, _, weights = moments.family_support(40, exp_decay)
    family = moments.ratios_sum(40, 0.2, 0.2, exp_decay)
    assert family.flagged == ()
    assert family.n_count == len(weights)
    assert family.value.real == pytest.approx(math.fsum(weights.tolist()), rel=1e-12)


def test_ratios_need_positive_beta(exp_decay):
    """beta = 0 is rejected."""
    with pytest.raises(ValueError):
        moments.ratios_sum(40, 0.2, 0, exp_decay)


def test_moment_report_row():
    """Residuals and the CSV row of a report."""
    report = _report(100.0, 0.5)
    assert report.residual == pytest.approx(0.5)
    assert report.relative_residual == pytest.approx(0.5)
    row = report.to_row()
    assert row["beta"] == ""
    assert row["alpha"] == "0.2"
    assert "runtime_s" not in row
    assert row["abs_residual"] == pytest.approx(0.5)


def test_exponent_fit_recovers_power():
    """A residual of 3 X**0.5 fits slope 0.5 exactly."""
    reports = [_report(x, 3 * x**0.5) for x in (100.0, 200.0, 400.0, 800.0, 1600.0)]
    slope, r2 = moments.exponent_fit(reports)
    assert slope == pytest.approx(0.5, abs=1e-9)
    assert r2 == pytest.approx(1.0, abs=1e-12)


def test_exponent_fit_of_constant_residual():
    """A constant residual fits slope 0."""
    slope, r2 = moments.exponent_fit([_report(x, 2.0) for x in (10.0, 20.0, 40.0, 80.0)])
    assert slope == pytest.approx(0.0, abs=1e-12)
    assert r2 == 1.0


def test_exponent_fit_needs_four_reports():
    """Fewer than four grid points raise ValueError."""
    with pytest.raises(ValueError):
        moments.exponent_fit([_report(x, 1.0) for x in (10.0, 20.0, 40.0)])


def test_squarefree_primary():
    """Only squarefree primary elements are kept."""
    re, im = moments.squarefree_primary(100)
    elements = [GaussianInt(a, b) for a, b in zip(re.tolist(), im.tolist())]
    assert all(is_squarefree(n) for n in elements)
    assert GaussianInt(9) not in elements
    assert GaussianInt(-3) in elements


def test_second_moment_is_positive_and_increasing():
    """The second moment grows with X."""
    small = moments.second_moment_lhs(30)
    large = moments.second_moment_lhs(60)
    assert 0 < small < large


def test_second_moment_argument_check():
    """Re s below 1/2 is rejected."""
    with pytest.raises(ValueError):
        moments.second_moment_lhs(30, s=0.3)


def test_double_series_symmetry():
    """Both sides of the double series agree within the truncation estimate."""
    comparison = moments.double_dirichlet_A(2, 2, 100)
    assert comparison.difference <= comparison.truncation_estimate


def test_double_series_needs_absolute_convergence():
    """Shifts outside absolute convergence are rejected."""
    with pytest.raises(ValueError):
        moments.double_dirichlet_A(1.2, 2, 50)


def test_triple_series_symmetry():
    """Both sides of the triple series agree within the truncation estimate."""
    comparison = moments.triple_dirichlet_A(2, 2, 2.5, 100)
    assert comparison.difference <= comparison.truncation_estimate


def test_square_part_euler_product():
    """The square part matches its Euler product."""
    comparison = moments.square_part_A1(2, 2, 10**4)
    assert comparison.difference <= comparison.truncation_estimate


@pytest.mark.slow
def test_first_moment_residual_is_below_the_main_term(exp_decay):
    """At X = 2000 the residual is under a tenth of the main term."""
    report = moments.first_moment_report(2000, 0.2, exp_decay)
    assert report.n_count > 1000
    assert report.relative_residual < 0.1


@pytest.mark.slow
def test_ratios_residual_is_below_the_main_term(exp_decay):
    """At X = 2000 no twist is flagged and the residual is small."""
    report = moments.ratios_report(2000, 0.2, 0.3, exp_decay)
    assert report.flagged_count == 0
    assert report.relative_residual < 0.1
