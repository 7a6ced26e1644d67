# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""Unit tests for Hecke L-functions and the family evaluator."""

import math

import numpy as np
import pytest

import lfunctions
from characters import primitive_inducing, quad_symbol
from zi_core import ONE, ONE_PLUS_I, GaussianInt, enumerate_primary, primary_lattice


@pytest.mark.parametrize("s", [1, 2, 0.5, 3.7, 0.25 + 2j, -1.5 + 0.5j])
def test_complex_gamma_matches_mpmath(s):
    """The double-precision Gamma agrees with 30-digit mpmath."""
    assert lfunctions.complex_gamma(s) == pytest.approx(
        lfunctions.complex_gamma(s, digits=30), rel=1e-11
    )


def test_complex_gamma_values():
    """Gamma(1), Gamma(1/2) and the recurrence."""
    assert lfunctions.complex_gamma(1) == pytest.approx(1, rel=1e-14)
    assert lfunctions.complex_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    s = 0.3 + 4j
    assert lfunctions.complex_gamma(s + 1) == pytest.approx(s * lfunctions.complex_gamma(s))


@pytest.mark.parametrize("s", [0, -1, -7])
def test_complex_gamma_poles(s):
    """Non-positive integers are poles."""
    with pytest.raises(lfunctions.PoleError):
        lfunctions.complex_gamma(s)


def test_zeta_k_at_two(zeta_oracle):
    """zeta_K(2) = zeta(2) L(2, chi_4)."""
    assert lfunctions.zeta_K(2).real == pytest.approx(1.50670300992, rel=1e-10)
    assert lfunctions.zeta_K(2) == pytest.approx(zeta_oracle(2), rel=1e-12)


@pytest.mark.parametrize("s", [0.7, 0.3, -0.5, 2.5 + 1j, 0.5 + 5j])
def test_zeta_k_matches_hurwitz(s, zeta_oracle):
    """zeta_K agrees with the Hurwitz-zeta oracle."""
    assert lfunctions.zeta_K(s) == pytest.approx(zeta_oracle(s), rel=1e-9)


def test_zeta_k_special_points():
    """Values at 0 and -2, the pole at 1 and the 2-part removed."""
    assert lfunctions.zeta_K(0) == -0.25
    assert lfunctions.zeta_K(-2) == 0
    with pytest.raises(lfunctions.PoleError):
        lfunctions.zeta_K(1)
    assert lfunctions.zeta_K2(2) == pytest.approx(0.75 * lfunctions.zeta_K(2))


def test_zeta_k_residue():
    """The residue at s = 1 is pi/4."""
    estimate, distance = lfunctions.zeta_K_residue_check(1e-4)
    assert estimate == pytest.approx(math.pi / 4, abs=1e-6)
    assert distance < 1e-6


def test_zeta_k_reflection():
    """The functional equation of zeta_K."""
    for alpha in (0.05, 0.2, 0.45):
        left = lfunctions.zeta_K(2 * alpha)
        right = (
            math.pi ** (4 * alpha - 1)
            * lfunctions.complex_gamma(1 - 2 * alpha)
            / lfunctions.complex_gamma(2 * alpha)
            * lfunctions.zeta_K(1 - 2 * alpha)
        )
        assert left == pytest.approx(right, rel=1e-9)


def test_direct_series_of_zeta_is_within_its_tail_bound():
    """The sharp sum for zeta_K(2) is within its rigorous tail bound."""
    evaluation = lfunctions.direct_series(primitive_inducing(ONE), 2, truncation=20_000)
    assert evaluation.method == "direct_series"
    assert abs(evaluation.value - lfunctions.zeta_K(2)) <= evaluation.est_error


def test_direct_series_needs_absolute_convergence(small_character):
    """Re s = 1 is rejected."""
    with pytest.raises(ValueError):
        lfunctions.direct_series(small_character, 1)


@pytest.mark.parametrize("s", [2, 2 + 3j, 3.5])
def test_smoothed_series_agrees_with_sharp_truncation(small_character, s):
    """The exp-smoothed series with its Mellin correction matches the sharp sum."""
    smoothed = lfunctions.direct_series(small_character, s, truncation=100_000)
    sharp = lfunctions.direct_series(small_character, s, truncation=100_000, smoothing="sharp")
    assert abs(smoothed.value - sharp.value) <= smoothed.est_error + sharp.est_error
    assert smoothed.est_error < 1e-2


def test_mellin_correction_is_needed(small_character):
    """Dropping the correction at Re(s) = 3.5 leaves an error of order L(s-1)/T."""
    truncation = 100_000
    corrected = lfunctions.direct_series(small_character, 3.5, truncation=truncation)
    coefficients = lfunctions.ideal_coefficients(small_character, truncation)
    t = truncation / lfunctions.SMOOTHING_SPAN
    norms = coefficients.norms.astype(np.float64)
    bare = math.fsum((coefficients.values * norms**-3.5 * np.exp(-norms / t)).tolist())
    assert abs(bare - corrected.value) > 100 * corrected.est_error


def test_direct_series_rejects_unknown_smoothing(small_character):
    """Unknown smoothings raise ValueError."""
    with pytest.raises(ValueError):
        lfunctions.direct_series(small_character, 2, smoothing="gaussian")


def test_ideal_coefficients_oracle_agrees(small_character):
    """Fast coefficients agree with the Euler-criterion oracle."""
    fast = lfunctions.ideal_coefficients(small_character, 500)
    oracle = lfunctions.ideal_coefficients(small_character, 500, oracle=True)
    assert np.array_equal(fast.norms, oracle.norms)
    assert np.array_equal(fast.values, oracle.values)


def test_root_number_has_modulus_one(small_character):
    """|W(chi)| = 1."""
    assert abs(lfunctions.root_number(small_character)) == pytest.approx(1, abs=1e-10)


def test_root_number_of_odd_kernel_is_real():
    """Root numbers of characters with odd kernel are real."""
    for c in enumerate_primary(300):
        character = primitive_inducing(c)
        if character.is_trivial or not character.is_primitive:
            continue
        root = lfunctions.root_number(character)
        assert abs(root.imag) < 1e-8
        assert abs(root.real) == pytest.approx(1, abs=1e-8)


def test_root_number_from_splits(small_character):
    """Forcing the functional equation recovers the root number."""
    forced = lfunctions.root_number_from_splits(small_character, 0.4 + 1.1j)
    assert forced == pytest.approx(lfunctions.root_number(small_character), abs=1e-6)


@pytest.mark.parametrize("s", [0.3 + 1.5j, 0.5 + 4j, 0.75 - 2j])
def test_functional_equation(small_character, s):
    """The completed L-function is symmetric under s -> 1 - s."""
    assert lfunctions.verify_functional_equation(small_character, s) < 1e-8


def test_completed_l_of_zeta_has_poles():
    """The completed zeta_K has a pole at 1."""
    with pytest.raises(lfunctions.PoleError):
        lfunctions.completed_l(primitive_inducing(ONE), 1)


def test_afe_agrees_with_direct_series(small_character):
    """afe and direct_series agree at s = 2."""
    afe = lfunctions.l_value(small_character, 2, method="afe")
    direct = lfunctions.l_value(small_character, 2, method="direct_series", truncation=50_000)
    assert afe.method == "afe"
    assert abs(afe.value - direct.value) <= afe.est_error + direct.est_error


def test_l_value_rejects_unknown_method(small_character):
    """Unknown methods raise ValueError."""
    with pytest.raises(ValueError):
        lfunctions.l_value(small_character, 0.5, method="guess")


def test_l_value_of_trivial_character_is_zeta():
    """The principal character gives zeta_K."""
    value = lfunctions.l_value(primitive_inducing(ONE), 0.5).value
    assert value == pytest.approx(lfunctions.zeta_K(0.5))


def test_l_value_reflects_left_of_the_critical_line(small_character):
    """Values left of 1/2 come from the functional equation."""
    s = 0.2 + 3j
    left = lfunctions.l_value(small_character, s).value
    scale = lfunctions.conductor_scale(small_character)
    w = lfunctions.root_number(small_character)
    completed_left = scale**s * lfunctions.complex_gamma(s) * left
    right = lfunctions.l_value(small_character, 1 - s).value
    completed_right = scale ** (1 - s) * lfunctions.complex_gamma(1 - s) * right
    assert completed_left == pytest.approx(w * completed_right, rel=1e-8)


def test_imprimitive_value_matches_explicit_sum():
    """L(s, chi_m) for an imprimitive twist against the explicit sum."""
    m = ONE_PLUS_I**2 * GaussianInt(3, 2)
    evaluation = lfunctions.l_value_imprimitive(m, 3, truncation=200_000)
    explicit = math.fsum(
        quad_symbol(m, a) * a.norm() ** -3.0 for a in enumerate_primary(2000)
    )
    assert evaluation.method == "euler_removed"
    assert evaluation.value.real == pytest.approx(explicit, abs=1e-6)


def test_imprimitive_value_of_a_square_twist():
    """A square twist is zeta_K with the Euler factors at its primes removed."""
    m = ONE_PLUS_I**2 * GaussianInt(9)
    value = lfunctions.l_value_imprimitive(m, 2, method="afe").value
    expected = lfunctions.zeta_K(2) * (1 - 2.0**-2) * (1 - 9.0**-2)
    assert value == pytest.approx(expected, rel=1e-9)


def test_poisson_identity():
    """The theta series satisfies its Poisson identity."""
    for n in (GaussianInt(-1, 2), GaussianInt(-3), GaussianInt(3, 2) * GaussianInt(-1, 2)):
        for y in (0.1, 1.0, 7.5):
            assert lfunctions.verify_poisson(n, y) < 1e-10


def test_poisson_rejects_bad_input():
    """Square twists and large y are rejected."""
    with pytest.raises(ValueError):
        lfunctions.verify_poisson(GaussianInt(9), 1.0)
    with pytest.raises(ValueError):
        lfunctions.verify_poisson(GaussianInt(-1, 2), 20)


def test_gauss_sum_expansion_within_tail():
    """The Gauss sum expansion at Re s = -1/2 is within its tail."""
    check = lfunctions.verify_prop24(GaussianInt(-1, 2), -0.5 + 0.7j, 2500)
    assert check.k_cut == 2500
    assert check.residual <= check.tail_estimate


def test_gauss_sum_expansion_needs_negative_real_part():
    """The expansion needs Re s < 0."""
    with pytest.raises(ValueError):
        lfunctions.verify_prop24(GaussianInt(-1, 2), 0.25, 100)


def test_stirling_envelope():
    """The gamma ratio stays within its Stirling envelope."""
    re_values = [0.1, 0.3, 0.5, 0.7, 0.9]
    im_values = [float(t) for t in range(-30, 31)]
    assert lfunctions.stirling_envelope(re_values, im_values) < 20


def test_lower_symbol_matrix_matches_scalar_symbols():
    """The batched symbol matrix agrees with quad_symbol."""
    tree = lfunctions.primary_factor_tree(300)
    upper_re = np.array([-1, 3, -3, 5], dtype=np.int64)
    upper_im = np.array([2, 2, 0, 4], dtype=np.int64)
    matrix = lfunctions.lower_symbol_matrix(tree, upper_re, upper_im)
    for row, (a, b) in enumerate(zip(upper_re.tolist(), upper_im.tolist())):
        for column, (c, d) in enumerate(zip(tree.re.tolist(), tree.im.tolist())):
            assert matrix[row, column] == quad_symbol(GaussianInt(a, b), GaussianInt(c, d))


def test_family_method():
    """Real s off the line 1 takes a batched path."""
    assert lfunctions.family_method(0.5) == "afe"
    assert lfunctions.family_method(2) == "direct"
    assert lfunctions.family_method(0.5 + 1j) == "scalar"
    assert lfunctions.family_method(0.5, digits=30) == "scalar"


def test_family_afe_matches_scalar_path():
    """The batched afe path agrees with the scalar path."""
    re, im, _ = primary_lattice(60)
    batched = lfunctions.family_l_values(re, im, 0.5, method="afe")
    scalar = lfunctions.family_l_values(re, im, 0.5, method="scalar")
    assert np.allclose(batched, scalar, rtol=0, atol=1e-8)


def test_family_oracle_matches_fast_path():
    """Euler-criterion symbols give the same family values."""
    re, im, _ = primary_lattice(20)
    fast = lfunctions.family_l_values(re, im, 0.5)
    oracle = lfunctions.family_l_values(re, im, 0.5, oracle=True)
    assert np.allclose(fast, oracle, rtol=0, atol=1e-8)


def test_family_direct_matches_scalar_path():
    """The batched direct path agrees with the scalar path."""
    re, im, _ = primary_lattice(30)
    direct = lfunctions.family_l_values(re, im, 2.5, truncation=20_000)
    scalar = lfunctions.family_l_values(re, im, 2.5, method="scalar")
    assert np.allclose(direct, scalar, rtol=0, atol=1e-3)


def test_family_values_do_not_depend_on_threads():
    """Chunking across threads leaves the values unchanged."""
    re, im, _ = primary_lattice(80)
    one = lfunctions.family_l_values(re, im, 0.6, threads=1, chunk_size=8)
    two = lfunctions.family_l_values(re, im, 0.6, threads=2, chunk_size=8)
    assert np.array_equal(one, two)


def test_family_values_on_empty_input():
    """An empty family gives an empty array."""
    empty = np.zeros(0, dtype=np.int64)
    assert len(lfunctions.family_l_values(empty, empty, 0.5)) == 0
