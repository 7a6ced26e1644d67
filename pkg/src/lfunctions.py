# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""Hecke L-functions of quadratic characters of Q(i).

Values are computed from the theta-function splitting of the completed L-function

    Lambda(s, chi) = A**s Gamma(s) L(s, chi),   A = sqrt(N(q)) / pi,

which expresses Lambda at any s as two rapidly convergent incomplete-gamma sums glued
by the root number. The same splitting with two different split points gives the
functional-equation checks. :func:`family_l_values` evaluates L(s, chi_{(1+i)^2 n}) for
many n at once with numpy, and is what the moment sums run on.
"""

import cmath
import concurrent.futures
import functools
import logging
import math
import typing
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special

from characters import (
    ImprimitiveCharacterError,
    QuadraticCharacter,
    SymbolTable,
    decompose_twist,
    prime_symbol,
    primitive_inducing,
    quad_symbol_naive,
    twist_character,
)
from gauss_sums import character_gauss_sum, twisted_gauss_lookup
from zi_core import (
    ONE,
    ONE_PLUS_I,
    CapExceededError,
    GaussianInt,
    GaussianLike,
    NotPrimaryError,
    classify_type,
    exact_quotient,
    factor,
    is_primary,
    primary_lattice,
    primary_primes,
)

logger = logging.getLogger(__name__)

ZETA_K_RESIDUE = math.pi / 4
DEFAULT_DIRECT_TRUNCATION = 200_000
DIRECT_SMOOTHINGS = ("exp", "sharp")
# exp(-36) is below double precision
SMOOTHING_SPAN = 36.0
POISSON_MAX_NORM = 10**4
FAMILY_CHUNK_SIZE = 128

_LANCZOS_G = 7
_LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


class PoleError(ArithmeticError):
    """Evaluation at (or numerically too close to) a pole."""


@dataclass(frozen=True)
class LEvaluation:
    """One L-value with its method and error estimate.

    ``est_error`` is a rigorous tail bound for the sharp ``direct_series``, and a
    heuristic envelope of the first omitted terms for the smoothed series and ``afe``.
    """

    s: complex
    value: complex
    method: str
    truncation_norm: int
    est_error: float

    def to_json(self) -> typing.Dict[str, typing.Any]:
        """JSON object with the value split into real and imaginary parts."""
        return {
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "est_error": self.est_error,
            "truncation_norm": self.truncation_norm,
            "method": self.method,
        }


@dataclass(frozen=True)
class CompletedL:
    """Lambda(s, chi) = (|D_K| N(q))**(s/2) (2 pi)**(-s) Gamma(s) L(s, chi)."""

    character: QuadraticCharacter
    s: complex
    lambda_value: complex
    split: float = 1.0


def _is_nonpositive_integer(s: complex) -> bool:
    return s.imag == 0 and s.real <= 0 and s.real == math.floor(s.real)


def complex_gamma(s: complex, digits: typing.Optional[int] = None) -> complex:
    """Gamma(s) by the Lanczos approximation with reflection for Re(s) < 1/2.

    With ``digits`` the value comes from mpmath at that working precision.
    """
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise PoleError(f"Gamma has a pole at {s}")
    if digits is not None:
        with mpmath.workdps(digits):
            return complex(mpmath.gamma(mpmath.mpc(s.real, s.imag)))
    if s.real < 0.5:
        return math.pi / (cmath.sin(math.pi * s) * complex_gamma(1 - s))
    z = s - 1
    series = _LANCZOS_COEFFICIENTS[0]
    for k, coefficient in enumerate(_LANCZOS_COEFFICIENTS[1:], start=1):
        series += coefficient / (z + k)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * cmath.exp((z + 0.5) * cmath.log(t) - t) * series


def stirling_envelope(
    re_values: typing.Sequence[float], im_values: typing.Sequence[float]
) -> float:
    """max |Gamma(1-s)/Gamma(s)| * (1+|s|)**(2 Re(s) - 1) over a grid of s."""
    worst = 0.0
    for sigma in re_values:
        for t in im_values:
            s = complex(sigma, t)
            ratio = abs(complex_gamma(1 - s) / complex_gamma(s))
            worst = max(worst, ratio * (1 + abs(s)) ** (2 * sigma - 1))
    return worst


def conductor_scale(character: QuadraticCharacter) -> float:
    """A = sqrt(N(q)) / pi, so that Lambda(s) = A**s Gamma(s) L(s)."""
    return math.sqrt(character.conductor_norm) / math.pi


def _cutoff_argument(s: complex, digits: typing.Optional[int]) -> float:
    """Incomplete-gamma argument beyond which terms are negligible."""
    precision = digits if digits is not None else 15
    return 2.31 * (precision + 3) + 2.0 * abs(s)


@dataclass(frozen=True)
class IdealCoefficients:
    """chi(b) over the ideals b of norm <= bound (zero values dropped), sorted by norm."""

    norms: np.ndarray
    values: np.ndarray
    bound: int


def ideal_coefficients(
    character: QuadraticCharacter, bound: int, oracle: bool = False
) -> IdealCoefficients:
    """Dirichlet coefficients of L(s, chi) up to ``bound``.

    Ideals are (1+i)**k * (primary a). With ``oracle`` the values at primary a come
    from the Euler-criterion symbol one element at a time.
    """
    bound = max(int(bound), 1)
    re, im, norm = primary_lattice(bound)
    if oracle:
        values = np.array(
            [
                character.psi_part(x) * quad_symbol_naive(x, character.kernel)
                for x in (GaussianInt(a, b) for a, b in zip(re.tolist(), im.tolist()))
            ],
            dtype=np.int8,
        )
    else:
        values = character.values_at_primary(re, im)
    all_norms = [norm]
    all_values = [values.astype(np.float64)]
    at_two = character.value_at_one_plus_i()
    if at_two:
        power = 2
        sign = float(at_two)
        while power <= bound:
            keep = norm * power <= bound
            all_norms.append(norm[keep] * power)
            all_values.append(values[keep].astype(np.float64) * sign)
            power *= 2
            sign *= at_two
    norms = np.concatenate(all_norms)
    coefficients = np.concatenate(all_values)
    nonzero = coefficients != 0
    norms, coefficients = norms[nonzero], coefficients[nonzero]
    order = np.argsort(norms, kind="stable")
    return IdealCoefficients(norms[order], coefficients[order], bound)


def _upper_gamma(a: complex, x: np.ndarray, digits: typing.Optional[int]) -> typing.List:
    """Gamma(a, x) for each x; scipy for real positive a, mpmath otherwise."""
    if digits is None and a.imag == 0 and a.real > 0:
        values = special.gammaincc(a.real, x) * special.gamma(a.real)
        return [complex(v) for v in values.tolist()]
    with mpmath.workdps(digits or 15):
        mp_a = mpmath.mpc(a.real, a.imag)
        return [mpmath.gammainc(mp_a, mpmath.mpf(float(v))) for v in x.tolist()]


def _theta_sum(
    coefficients: IdealCoefficients,
    scale: float,
    s: complex,
    split: float,
    digits: typing.Optional[int],
) -> typing.Tuple[complex, int]:
    """sum chi(b) (A/N(b))**s Gamma(s, N(b) split / A) and the largest norm used."""
    limit = scale * _cutoff_argument(s, digits) / split
    keep = coefficients.norms <= limit
    norms = coefficients.norms[keep]
    values = coefficients.values[keep]
    if not len(norms):
        return 0j, 0
    gammas = _upper_gamma(s, norms * split / scale, digits)
    if digits is None:
        powers = np.exp(s * np.log(scale / norms.astype(np.float64)))
        terms = values * powers * np.array(gammas, dtype=np.complex128)
        total = complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))
    else:
        with mpmath.workdps(digits):
            mp_s = mpmath.mpc(s.real, s.imag)
            total = complex(
                mpmath.fsum(
                    float(v) * mpmath.power(mpmath.mpf(scale) / int(n), mp_s) * g
                    for v, n, g in zip(values.tolist(), norms.tolist(), gammas)
                )
            )
    return total, int(norms[-1])


def _required_bound(character: QuadraticCharacter, s: complex, split: float, digits) -> int:
    scale = conductor_scale(character)
    x_max = _cutoff_argument(s, digits)
    return int(math.ceil(scale * x_max * max(split, 1.0 / split))) + 1


def _pole_terms(s: complex, split: float) -> complex:
    """Contribution of the poles of Lambda at s = 0, 1 for the trivial character."""
    return 0.25 * (split ** (s - 1) / (s - 1) - split**s / s)


def root_number(character: QuadraticCharacter) -> complex:
    """W(chi) = g(1, chi) / sqrt(N(q))."""
    if not character.is_primitive:
        raise ImprimitiveCharacterError(f"root number needs a primitive character: {character}")
    if character.is_trivial:
        return 1 + 0j
    return character_gauss_sum(character) / math.sqrt(character.conductor_norm)


def completed_l(
    character: QuadraticCharacter,
    s: complex,
    split: float = 1.0,
    digits: typing.Optional[int] = None,
    root: typing.Optional[complex] = None,
    oracle: bool = False,
) -> CompletedL:
    """Lambda(s, chi) from the theta splitting at ``split``.

    ``oracle`` takes the coefficients from the Euler-criterion symbol.
    """
    if not character.is_primitive:
        raise ImprimitiveCharacterError(
            f"completed L-function needs a primitive character, got {character}"
        )
    s = complex(s)
    if character.is_trivial and s in (0, 1):
        raise PoleError(f"Lambda(s) of the trivial character has a pole at {s}")
    scale = conductor_scale(character)
    bound = _required_bound(character, s, split, digits)
    coefficients = ideal_coefficients(character, bound, oracle)
    w = root_number(character) if root is None else root
    first, _ = _theta_sum(coefficients, scale, s, split, digits)
    second, _ = _theta_sum(coefficients, scale, 1 - s, 1.0 / split, digits)
    value = first + w * second
    if character.is_trivial:
        value += _pole_terms(s, split)
    return CompletedL(character, s, value, split)


def root_number_from_splits(
    character: QuadraticCharacter,
    s: complex,
    splits: typing.Tuple[float, float] = (1.0, 1.3),
) -> complex:
    """The root number forced by split-independence of the theta splitting."""
    s = complex(s)
    scale = conductor_scale(character)
    y1, y2 = splits
    bound = max(_required_bound(character, s, y, None) for y in splits)
    coefficients = ideal_coefficients(character, bound)
    direct = [_theta_sum(coefficients, scale, s, y, None)[0] for y in splits]
    dual = [_theta_sum(coefficients, scale, 1 - s, 1.0 / y, None)[0] for y in splits]
    numerator = direct[0] - direct[1]
    if character.is_trivial:
        numerator += _pole_terms(s, y1) - _pole_terms(s, y2)
    return numerator / (dual[1] - dual[0])


def verify_functional_equation(
    character: QuadraticCharacter,
    s: complex,
    split: float = 1.25,
    digits: typing.Optional[int] = None,
) -> float:
    """|Lambda(s) - W Lambda(1-s)| / |Lambda(s)|, the two sides split differently."""
    s = complex(s)
    w = root_number(character)
    left = completed_l(character, s, 1.0, digits, root=w).lambda_value
    right = w * completed_l(character, 1 - s, split, digits, root=w).lambda_value
    return abs(left - right) / abs(left)


def _zeta_k_theta(s: complex, digits: int) -> complex:
    """zeta_K(s) from the theta splitting at split 1 (A = 1/pi, W = 1)."""
    with mpmath.workdps(digits + 5):
        mp_s = mpmath.mpc(s.real, s.imag)
        x_max = 2.31 * (digits + 5) + 2 * abs(s)
        bound = int(x_max / math.pi) + 2
        counts = _ideal_counts(bound)
        total = mpmath.mpf(0)
        for n in range(1, bound + 1):
            if not counts[n]:
                continue
            x = mpmath.pi * n
            total += int(counts[n]) * (
                mpmath.power(x, -mp_s) * mpmath.gammainc(mp_s, x)
                + mpmath.power(x, mp_s - 1) * mpmath.gammainc(1 - mp_s, x)
            )
        total += mpmath.mpf(1) / 4 * (1 / (mp_s - 1) - 1 / mp_s)
        value = total * mpmath.power(mpmath.pi, mp_s) / mpmath.gamma(mp_s)
        return complex(value)


@functools.lru_cache(maxsize=8)
def _ideal_counts(bound: int) -> np.ndarray:
    """Number of ideals of each norm k <= bound: sum over d | k of chi_{-4}(d)."""
    counts = np.zeros(bound + 1, dtype=np.int64)
    for d in range(1, bound + 1, 2):
        counts[d::d] += 1 if d % 4 == 1 else -1
    counts.flags.writeable = False
    return counts


def zeta_K(s: complex, digits: typing.Optional[int] = None) -> complex:
    """The Dedekind zeta function of Q(i).

    Reflected through its functional equation for Re(s) < 1/2.
    """
    s = complex(s)
    if s == 1:
        raise PoleError("zeta_K has a pole at s = 1")
    precision = digits if digits is not None else 15
    if _is_nonpositive_integer(s):
        return -0.25 + 0j if s == 0 else 0j
    if s.real < 0.5:
        with mpmath.workdps(precision + 5):
            mp_s = mpmath.mpc(s.real, s.imag)
            factor_ = (
                mpmath.power(mpmath.pi, 2 * mp_s - 1) * mpmath.gamma(1 - mp_s) / mpmath.gamma(mp_s)
            )
            return complex(factor_ * _zeta_k_theta(1 - s, precision))
    return _zeta_k_theta(s, precision)


def zeta_K2(s: complex, digits: typing.Optional[int] = None) -> complex:
    """zeta_K with the Euler factor at 1+i removed: zeta_K(s) (1 - 2**-s)."""
    s = complex(s)
    return zeta_K(s, digits) * (1 - 2 ** (-s))


def zeta_K_evaluation(s: complex, digits: typing.Optional[int] = None) -> LEvaluation:
    """zeta_K(s) wrapped as an LEvaluation with a precision-sized error."""
    value = zeta_K(s, digits)
    precision = digits if digits is not None else 15
    return LEvaluation(complex(s), value, "afe", 0, abs(value) * 10.0 ** (-precision + 1))


def zeta_K_residue_check(eps: float = 1e-4) -> typing.Tuple[float, float]:
    """Richardson estimate of lim (s-1) zeta_K(s) at s = 1+eps and its distance to pi/4."""
    f_full = (eps * zeta_K(1 + eps)).real
    f_half = (eps / 2 * zeta_K(1 + eps / 2)).real
    estimate = 2 * f_half - f_full
    return estimate, abs(estimate - ZETA_K_RESIDUE)


def direct_series(
    character: QuadraticCharacter,
    s: complex,
    truncation: int = DEFAULT_DIRECT_TRUNCATION,
    smoothing: str = "exp",
) -> LEvaluation:
    """The Dirichlet series of L(s, chi) over N(b) <= truncation, Re(s) > 1.

    ``smoothing="exp"`` sums chi(b) N(b)**-s exp(-N(b)/T) with T = truncation / 36 and
    subtracts the Mellin correction: moving the contour of
    (1/2 pi i) int Gamma(u) T**u L(s+u) du left past the poles of Gamma gives
    L(s) = S_T(s) - sum_k (-1)**k T**-k L(s-k) / k!, and every term with Re(s-k) > 1
    is summed from the same coefficients. ``est_error`` then bounds the first term
    that cannot be summed this way. ``smoothing="sharp"`` truncates at the norm bound
    with a rigorous tail bound; the trivial character always uses it.
    """
    s = complex(s)
    sigma = s.real
    if sigma <= 1:
        raise ValueError(f"the Dirichlet series needs Re(s) > 1, got {s}")
    if smoothing not in DIRECT_SMOOTHINGS:
        raise ValueError(f"unknown smoothing {smoothing!r}, expected one of {DIRECT_SMOOTHINGS}")
    coefficients = ideal_coefficients(character, truncation)
    log_norms = np.log(coefficients.norms.astype(np.float64))

    def sharp_sum(z: complex, weights: typing.Any = 1.0) -> complex:
        terms = coefficients.values * weights * np.exp(-z * log_norms)
        return complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))

    if smoothing == "sharp" or character.is_trivial:
        tail = dirichlet_tail_bound(sigma, truncation)
        return LEvaluation(s, sharp_sum(s), "direct_series", truncation, tail)

    t = truncation / SMOOTHING_SPAN
    value = sharp_sum(s, np.exp(-coefficients.norms / t))
    est_error = math.exp(-SMOOTHING_SPAN) * dirichlet_tail_bound(sigma, truncation)
    k = 1
    while sigma - k > 1:
        weight = (-1) ** k / (math.factorial(k) * t**k)
        value -= weight * sharp_sum(s - k)
        est_error += abs(weight) * dirichlet_tail_bound(sigma - k, truncation)
        k += 1
    est_error += 2 * _l_envelope(character, s - k) / (math.factorial(k) * t**k)
    logger.debug(f"smoothed series of {character} at {s}: {k - 1} correction terms, T={t:.1f}")
    return LEvaluation(s, value, "direct_series", truncation, est_error)


def _l_envelope(character: QuadraticCharacter, s: complex) -> float:
    """Convexity-type envelope of |L(s, chi)| for 0 < Re(s) <= 1."""
    analytic = character.conductor_norm * (1 + abs(s)) ** 2
    return analytic ** ((1 - s.real) / 2) * (math.log(analytic) + 2)


def dirichlet_tail_bound(sigma: float, truncation: float) -> float:
    """Bound for the sum of N(b)**-sigma over ideals with N(b) > truncation.

    Uses #{b : N(b) <= x} <= (pi/4) x + 2 sqrt(x) + 1 and partial summation.
    """
    t = float(truncation)
    return sigma * (
        (math.pi / 4) * t ** (1 - sigma) / (sigma - 1)
        + 2 * t ** (0.5 - sigma) / (sigma - 0.5)
        + t ** (-sigma) / sigma
    )


def _gaussian_cutoff(s: complex, x: float) -> complex:
    """V_s(x) = (1/2 pi i) int_(1) Gamma(s+u)/Gamma(s) x**-u exp(u**2) du/u."""
    mp_s = mpmath.mpc(s.real, s.imag)
    gamma_s = mpmath.gamma(mp_s)
    c = 1.0

    def integrand(t):
        u = mpmath.mpc(c, t)
        return mpmath.gamma(mp_s + u) / gamma_s * mpmath.power(x, -u) * mpmath.exp(u * u) / u

    return complex(mpmath.quad(integrand, [-mpmath.inf, 0, mpmath.inf]) / (2 * mpmath.pi))


def _afe_gaussian(
    character: QuadraticCharacter, s: complex, w: complex
) -> typing.Tuple[complex, int]:
    scale = conductor_scale(character)
    bound = int(scale * _cutoff_argument(s, None)) + 1
    coefficients = ideal_coefficients(character, bound)
    dual = w * scale ** (1 - 2 * s) * complex_gamma(1 - s) / complex_gamma(s)
    total = 0j
    for value, n in zip(coefficients.values.tolist(), coefficients.norms.tolist()):
        x = n / scale
        total += value * n ** (-s) * _gaussian_cutoff(s, x)
        total += dual * value * n ** (s - 1) * _gaussian_cutoff(1 - s, x)
    return total, bound


def _afe(
    character: QuadraticCharacter,
    s: complex,
    digits: typing.Optional[int],
    smoothing: str,
    oracle: bool = False,
) -> LEvaluation:
    w = root_number(character)
    scale = conductor_scale(character)
    if smoothing == "gaussian":
        value, bound = _afe_gaussian(character, s, w)
    elif smoothing == "incomplete_gamma":
        completed = completed_l(character, s, 1.0, digits, root=w, oracle=oracle)
        gamma_s = complex_gamma(s, digits)
        value = completed.lambda_value / (cmath.exp(s * math.log(scale)) * gamma_s)
        bound = _required_bound(character, s, 1.0, digits)
    else:
        raise ValueError(f"unknown smoothing {smoothing!r}")
    x_max = _cutoff_argument(s, digits)
    envelope = math.exp(-x_max) * x_max ** (abs(s.real) + 1) * (math.pi / 4) * scale
    dual_size = scale ** (1 - 2 * s.real) * bound ** (s.real - 1)
    est_error = envelope * max(bound ** (-s.real), dual_size)
    return LEvaluation(s, value, "afe", bound, est_error)


def l_value(
    character: QuadraticCharacter,
    s: complex,
    method: str = "auto",
    digits: typing.Optional[int] = None,
    smoothing: str = "incomplete_gamma",
    truncation: int = DEFAULT_DIRECT_TRUNCATION,
    oracle: bool = False,
) -> LEvaluation:
    """L(s, chi) for a primitive character.

    ``method`` is ``direct_series`` (Re(s) > 1), ``afe`` or ``auto`` (direct series
    for Re(s) >= 3/2). The afe reflects through the functional equation for
    Re(s) < 1/2.
    """
    if not character.is_primitive:
        raise ImprimitiveCharacterError(
            f"{character} is imprimitive; use l_value_imprimitive instead"
        )
    s = complex(s)
    if method == "auto":
        method = "direct_series" if s.real >= 1.5 else "afe"
    if method == "direct_series":
        return direct_series(character, s, truncation)
    if method != "afe":
        raise ValueError(f"unknown method {method!r}")
    if character.is_trivial:
        return zeta_K_evaluation(s, digits)
    if s.real < 0.5:
        reflected = _afe(character, 1 - s, digits, smoothing, oracle)
        w = root_number(character)
        scale = conductor_scale(character)
        factor_ = (
            w
            * cmath.exp((1 - 2 * s) * math.log(scale))
            * complex_gamma(1 - s, digits)
            / complex_gamma(s, digits)
        )
        return LEvaluation(
            s,
            factor_ * reflected.value,
            "afe",
            reflected.truncation_norm,
            abs(factor_) * reflected.est_error,
        )
    return _afe(character, s, digits, smoothing, oracle)


def removed_euler_factors(
    character: QuadraticCharacter, odd_part: GaussianInt, s: complex
) -> complex:
    """prod (1 - chi(p) N(p)**-s) over 1+i and the primes of odd_part not in the kernel."""
    product = 1 - character.value_at_one_plus_i() * 2 ** (-s)
    for prime, _ in factor(odd_part).factors:
        if exact_quotient(character.kernel, prime) is not None:
            continue
        product *= 1 - character(prime) * prime.norm() ** (-s)
    return product


def l_value_imprimitive(
    m: GaussianLike,
    s: complex,
    method: str = "auto",
    digits: typing.Optional[int] = None,
    truncation: int = DEFAULT_DIRECT_TRUNCATION,
    oracle: bool = False,
) -> LEvaluation:
    """L(s, chi_m) = sum over primary a of (m/a) N(a)**-s.

    Evaluated as the L-function of the primitive inducing character times the
    finitely many Euler factors it does not share with chi_m.
    """
    s = complex(s)
    character = twist_character(m)
    odd_part = decompose_twist(m).odd
    base = l_value(character, s, method, digits, truncation=truncation, oracle=oracle)
    correction = removed_euler_factors(character, odd_part, s)
    return LEvaluation(
        s,
        base.value * correction,
        "euler_removed",
        base.truncation_norm,
        base.est_error * abs(correction),
    )


def _check_poisson_input(n: GaussianInt) -> None:
    if not is_primary(n):
        raise NotPrimaryError(f"{n} is not primary")
    if n.norm() > POISSON_MAX_NORM:
        raise CapExceededError(f"N({n}) exceeds {POISSON_MAX_NORM}")
    if primitive_inducing(n).kernel == ONE:
        raise ValueError(f"{n} is a square; the twisted character is principal")


def twisted_character_values(n: GaussianInt, re: np.ndarray, im: np.ndarray) -> np.ndarray:
    """chi~_n = psi_j (./n), j = type(n), at arrays of Gaussian integers (0 at even ones)."""
    odd = (re - im) % 2 == 1
    values = np.where(odd, SymbolTable(n)(re, im), 0).astype(np.float64)
    if classify_type(n) == 2:
        values = np.where(re % 2 == 0, -values, values)
    return values


def _lattice_rows(radius: int) -> typing.Iterator[typing.Tuple[int, np.ndarray]]:
    column = np.arange(-radius, radius + 1, dtype=np.int64)
    for row in range(-radius, radius + 1):
        yield row, column


def verify_poisson(n: GaussianLike, y: float) -> float:
    """|LHS - RHS| of the Poisson summation identity for chi~_n with a Gaussian weight.

    LHS = sum_{m != 0} chi~_n(m) exp(-2 pi y N(m)),
    RHS = (2 y N(2n))**-1 sum_{k != 0} g(k, chi~_n) exp(-pi N(k) / (2 y N(2n))).
    """
    n = GaussianInt.coerce(n)
    _check_poisson_input(n)
    if not 0.1 <= y <= 10:
        raise ValueError(f"y must lie in [0.1, 10], got {y}")
    q = 4 * n.norm()
    j = classify_type(n)
    left_terms: typing.List[float] = []
    radius = int(math.sqrt(45 / (2 * math.pi * y))) + 2
    for row, column in _lattice_rows(radius):
        re = np.full(column.shape, row)
        values = twisted_character_values(n, re, column)
        norms = re * re + column * column
        left_terms.extend((values * np.exp(-2 * math.pi * y * norms)).tolist())
    right_terms: typing.List[float] = []
    radius = int(math.sqrt(90 * y * q / math.pi)) + 2
    for row, column in _lattice_rows(radius):
        re = np.full(column.shape, row)
        norms = re * re + column * column
        gauss = twisted_gauss_lookup(j, n, re, column)
        gauss = np.where(norms == 0, 0.0, gauss)
        right_terms.extend((gauss * np.exp(-math.pi * norms / (2 * y * q))).tolist())
    left = math.fsum(left_terms)
    right = math.fsum(right_terms) / (2 * y * q)
    return abs(left - right)


@dataclass(frozen=True)
class Prop24Check:
    """Both sides of the Gauss-sum expansion of L(s, chi~_n) for Re(s) < 0."""

    lhs: complex
    rhs: complex
    residual: float
    tail_estimate: float
    k_cut: int


def verify_prop24(n: GaussianLike, s: complex, k_cut: int) -> Prop24Check:
    """Compare L(s, chi~_n) with its expansion in twisted Gauss sums.

    The right side is N(2n)**-s pi**(2s-1) Gamma(1-s) / (4 Gamma(s)) times the sum of
    g(k, chi~_n) N(k)**(s-1) over 0 < N(k) <= k_cut.
    """
    n = GaussianInt.coerce(n)
    s = complex(s)
    _check_poisson_input(n)
    if s.real >= 0:
        raise ValueError(f"the k-sum converges only for Re(s) < 0, got {s}")
    q = 4 * n.norm()
    j = classify_type(n)
    lhs = l_value_imprimitive(ONE_PLUS_I**2 * n, s).value
    prefactor = q ** (-s) * math.pi ** (2 * s - 1) * complex_gamma(1 - s) / (4 * complex_gamma(s))
    radius = math.isqrt(k_cut) + 1
    terms: typing.List[complex] = []
    largest = 0.0
    for row, column in _lattice_rows(radius):
        re = np.full(column.shape, row)
        norms = re * re + column * column
        keep = (norms > 0) & (norms <= k_cut)
        if not keep.any():
            continue
        gauss = twisted_gauss_lookup(j, n, re[keep], column[keep])
        largest = max(largest, float(np.abs(gauss).max()))
        terms.extend((gauss * np.exp((s - 1) * np.log(norms[keep].astype(np.float64)))).tolist())
    total = complex(math.fsum(z.real for z in terms), math.fsum(z.imag for z in terms))
    rhs = prefactor * total
    tail = abs(prefactor) * 2 * largest * math.pi * k_cut**s.real / (-s.real)
    return Prop24Check(lhs, rhs, abs(lhs - rhs), tail, k_cut)


# ---------------------------------------------------------------------------
# Batched family evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimaryFactorTree:
    """Primary elements of norm <= bound, each as (smallest prime) * (primary cofactor)."""

    re: np.ndarray
    im: np.ndarray
    norm: np.ndarray
    primes: typing.Tuple[GaussianInt, ...]
    prime_index: np.ndarray
    cofactor_index: np.ndarray


@functools.lru_cache(maxsize=4)
def primary_factor_tree(bound: int) -> PrimaryFactorTree:
    """Smallest prime factor and cofactor of every primary element up to bound."""
    re, im, norm = primary_lattice(bound)
    position = {(a, b): k for k, (a, b) in enumerate(zip(re.tolist(), im.tolist()))}
    primes = primary_primes(bound)
    prime_position = {p: k for k, p in enumerate(primes)}
    prime_index = np.full(len(re), -1, dtype=np.int64)
    cofactor_index = np.full(len(re), -1, dtype=np.int64)
    for k, (a, b) in enumerate(zip(re.tolist(), im.tolist())):
        if k == 0:
            continue
        element = GaussianInt(a, b)
        smallest = factor(element).factors[0][0]
        cofactor = exact_quotient(element, smallest)
        prime_index[k] = prime_position[smallest]
        cofactor_index[k] = position[(cofactor.re, cofactor.im)]  # type: ignore[union-attr]
    logger.debug(f"primary factor tree up to norm {bound}: {len(re)} elements")
    return PrimaryFactorTree(re, im, norm, primes, prime_index, cofactor_index)


def lower_symbol_matrix(
    tree: PrimaryFactorTree, upper_re: np.ndarray, upper_im: np.ndarray
) -> np.ndarray:
    """M[i, k] = (upper_i / a_k) for every primary a_k in the tree (int8)."""
    count = len(upper_re)
    prime_columns = np.empty((count, len(tree.primes)), dtype=np.int8)
    for k, prime in enumerate(tree.primes):
        prime_columns[:, k] = prime_symbol(prime, upper_re, upper_im)
    matrix = np.empty((count, len(tree.re)), dtype=np.int8)
    matrix[:, 0] = 1
    for k in range(1, len(tree.re)):
        matrix[:, k] = prime_columns[:, tree.prime_index[k]] * matrix[:, tree.cofactor_index[k]]
    return matrix


@dataclass(frozen=True)
class _FamilyMember:
    kernel: GaussianInt
    is_square: bool
    scale: float
    at_two: int
    root: float
    euler: complex


def _family_member(n: GaussianInt, s: complex) -> _FamilyMember:
    character = primitive_inducing(n)
    correction = removed_euler_factors(character, n, s)
    if character.is_trivial:
        return _FamilyMember(ONE, True, 1 / math.pi, 0, 1.0, correction)
    root = root_number(character)
    if abs(root.imag) > 1e-8 or abs(abs(root.real) - 1) > 1e-8:
        logger.warning(f"root number of chi_{n} is {root}, expected +-1")
    return _FamilyMember(
        character.kernel,
        False,
        conductor_scale(character),
        character.value_at_one_plus_i(),
        root.real,
        correction,
    )


def _family_chunk_afe(re: np.ndarray, im: np.ndarray, s: float) -> np.ndarray:
    """L(s, chi_{(1+i)^2 n}) for a chunk of primary n, real 0 < s < 1."""
    members = [_family_member(GaussianInt(a, b), s) for a, b in zip(re.tolist(), im.tolist())]
    result = np.zeros(len(members), dtype=np.complex128)
    squares = [k for k, m in enumerate(members) if m.is_square]
    if squares:
        zeta = zeta_K(s)
        for k in squares:
            result[k] = zeta * members[k].euler
    rows = [k for k, m in enumerate(members) if not m.is_square]
    if not rows:
        return result
    x_max = _cutoff_argument(s, None)
    scales = np.array([members[k].scale for k in rows])
    bound = int(scales.max() * x_max) + 1
    tree = primary_factor_tree(bound)
    kernels_re = np.array([members[k].kernel.re for k in rows], dtype=np.int64)
    kernels_im = np.array([members[k].kernel.im for k in rows], dtype=np.int64)
    symbols = lower_symbol_matrix(tree, kernels_re, kernels_im)
    # ideals (1+i)**e a with value at_two**e * (c1/a)
    norms = [tree.norm]
    columns = [np.arange(len(tree.norm))]
    powers = [0]
    e, two = 1, 2
    while two <= bound:
        keep = np.flatnonzero(tree.norm * two <= bound)
        norms.append(tree.norm[keep] * two)
        columns.append(keep)
        powers.append(e)
        e, two = e + 1, two * 2
    at_two = np.array([members[k].at_two for k in rows], dtype=np.float64)
    roots = np.array([members[k].root for k in rows], dtype=np.float64)
    gamma_ratio = special.gamma(1 - s) / special.gamma(s)
    totals = np.zeros(len(rows), dtype=np.float64)
    for ideal_norms, ideal_columns, power in zip(norms, columns, powers):
        sign = at_two**power
        if power and not sign.any():
            continue
        values = symbols[:, ideal_columns].astype(np.float64) * sign[:, None]
        x = ideal_norms[None, :] / scales[:, None]
        weights = ideal_norms[None, :] ** (-s) * special.gammaincc(s, x)
        weights += (
            (roots * scales ** (1 - 2 * s) * gamma_ratio)[:, None]
            * ideal_norms[None, :] ** (s - 1)
            * special.gammaincc(1 - s, x)
        )
        totals += (values * weights).sum(axis=1)
    for position, k in enumerate(rows):
        result[k] = totals[position] * members[k].euler
    return result


def _family_chunk_direct(re: np.ndarray, im: np.ndarray, s: float, truncation: int) -> np.ndarray:
    """sum over primary a, N(a) <= truncation, of (n/a) N(a)**-s for a chunk of n (real s > 1)."""
    tree = primary_factor_tree(truncation)
    symbols = lower_symbol_matrix(tree, re, im)
    weights = tree.norm.astype(np.float64) ** (-s)
    return (symbols.astype(np.float64) * weights[None, :]).sum(axis=1).astype(np.complex128)


def _family_chunk_scalar(
    re: np.ndarray, im: np.ndarray, s: complex, digits, oracle: bool
) -> np.ndarray:
    values = [
        l_value_imprimitive(ONE_PLUS_I**2 * n, s, digits=digits, oracle=oracle).value
        for n in (GaussianInt(a, b) for a, b in zip(re.tolist(), im.tolist()))
    ]
    return np.array(values, dtype=np.complex128)


def _family_chunk(task: typing.Tuple) -> np.ndarray:
    re, im, s, method, truncation, digits, oracle = task
    if method == "afe":
        return _family_chunk_afe(re, im, s.real)
    if method == "direct":
        return _family_chunk_direct(re, im, s.real, truncation)
    return _family_chunk_scalar(re, im, s, digits, oracle)


def family_method(s: complex, digits: typing.Optional[int] = None) -> str:
    """Batched path for real s in (0, 1) or s > 1, mpmath scalar path otherwise."""
    s = complex(s)
    if digits is not None or s.imag != 0:
        return "scalar"
    if 0 < s.real < 1:
        return "afe"
    if s.real > 1:
        return "direct"
    return "scalar"


def family_l_values(
    re: np.ndarray,
    im: np.ndarray,
    s: complex,
    threads: int = 1,
    method: typing.Optional[str] = None,
    truncation: int = 20_000,
    digits: typing.Optional[int] = None,
    chunk_size: int = FAMILY_CHUNK_SIZE,
    oracle: bool = False,
) -> np.ndarray:
    """L(s, chi_{(1+i)^2 n}) = sum over primary a of (n/a) N(a)**-s for each primary n.

    The chunking is fixed, so the per-n values do not depend on ``threads``. With
    ``oracle`` every value goes through the scalar path with Euler-criterion symbols.
    """
    s = complex(s)
    method = "scalar" if oracle else (method or family_method(s, digits))
    re = np.asarray(re, dtype=np.int64)
    im = np.asarray(im, dtype=np.int64)
    tasks = [
        (re[k : k + chunk_size], im[k : k + chunk_size], s, method, truncation, digits, oracle)
        for k in range(0, len(re), chunk_size)
    ]
    logger.info(f"evaluating {len(re)} family L-values at s = {s} ({method}, {len(tasks)} chunks)")
    if threads <= 1 or len(tasks) <= 1:
        parts = [_family_chunk(task) for task in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_family_chunk, tasks))
    if not parts:
        return np.zeros(0, dtype=np.complex128)
    return np.concatenate(parts)
