# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""Main terms of the first moment and of the ratios average of quadratic L-values.

Everything here is a closed-form expression in zeta_K, the gamma function, Mellin
transforms of the weight, and two absolutely convergent Euler products. Euler products
are summed as logarithms over the prime-ideal table with an exponential-integral
estimate of the primes beyond the cutoff.
"""

import logging
import math
import typing
from dataclasses import dataclass

import mpmath
import numpy as np

from lfunctions import PoleError, complex_gamma, zeta_K, zeta_K2
from zi_core import prime_norm_table

logger = logging.getLogger(__name__)

WEIGHT_IDS = ("exp_decay", "exp_both", "bump")
SUPPORT_FLOOR = 1e-12
DEFAULT_PRIME_BOUND = 2**21
POLE_DISTANCE = 1e-6
FIRST_MOMENT_VARIANTS = ("consistent", "printed")
Q_POLY_STEPS = (1e-3, 5e-4)


class StripError(ValueError):
    """A Mellin transform was requested outside its strip of convergence."""


class ExtrapolationError(ArithmeticError):
    """The alpha -> 0 extrapolation did not converge or a pole did not cancel."""


def _bump_argument(t):
    return (t - 1.25) / 0.75


@dataclass(frozen=True)
class WeightFunction:
    """A smooth nonnegative weight w(t) on (0, inf) with rapid decay.

    Attributes:
        id: one of ``exp_decay`` (e^-t), ``exp_both`` (e^(-t-1/t)) and ``bump``
            (a compactly supported bump on (1/2, 2)).
    """

    id: str

    def __post_init__(self):
        """Reject unknown weight ids."""
        if self.id not in WEIGHT_IDS:
            raise ValueError(f"unknown weight {self.id!r}, expected one of {WEIGHT_IDS}")

    def __call__(self, t: typing.Union[float, np.ndarray]) -> typing.Union[float, np.ndarray]:
        """w(t) in double precision, elementwise for arrays."""
        t = np.asarray(t, dtype=np.float64)
        if self.id == "exp_decay":
            values = np.exp(-t)
        elif self.id == "exp_both":
            with np.errstate(divide="ignore", over="ignore"):
                values = np.where(t > 0, np.exp(-t - 1 / np.where(t > 0, t, 1)), 0.0)
        else:
            u = _bump_argument(t)
            inside = np.abs(u) < 1
            safe = np.where(inside, u, 0.0)
            values = np.where(inside, np.exp(-1 / (1 - safe * safe)), 0.0)
        return values if values.ndim else float(values)

    def mp_value(self, t):
        """w(t) in mpmath arithmetic."""
        if self.id == "exp_decay":
            return mpmath.exp(-t)
        if self.id == "exp_both":
            return mpmath.exp(-t - 1 / t) if t > 0 else mpmath.mpf(0)
        u = _bump_argument(t)
        return mpmath.exp(-1 / (1 - u * u)) if abs(u) < 1 else mpmath.mpf(0)

    @property
    def maximum(self) -> float:
        """sup of w over (0, inf)."""
        return {"exp_decay": 1.0, "exp_both": math.exp(-2), "bump": math.exp(-1)}[self.id]

    @property
    def strip(self) -> typing.Tuple[float, float]:
        """Open strip of Re(s) where the Mellin transform converges."""
        if self.id == "exp_decay":
            return 0.0, math.inf
        return -math.inf, math.inf

    @property
    def support(self) -> typing.Tuple[float, float]:
        """Interval of t where w(t) >= SUPPORT_FLOOR * max w."""
        depth = -math.log(SUPPORT_FLOOR)
        if self.id == "exp_decay":
            return 0.0, depth
        if self.id == "exp_both":
            c = 2 + depth
            root = math.sqrt(c * c - 4)
            return (c - root) / 2, (c + root) / 2
        u = math.sqrt(1 - 1 / (1 + depth))
        return 1.25 - 0.75 * u, 1.25 + 0.75 * u

    @property
    def breakpoints(self) -> typing.List:
        """Points where the Mellin quadrature splits its range."""
        if self.id == "bump":
            return [mpmath.mpf("0.5"), mpmath.mpf("1.25"), mpmath.mpf(2)]
        return [0, 1, mpmath.inf]


def weight(weight_id: str) -> WeightFunction:
    """The weight registered under weight_id."""
    return WeightFunction(weight_id)


def _check_strip(w: WeightFunction, s: complex) -> None:
    low, high = w.strip
    if not low < s.real < high:
        raise StripError(f"Re(s) = {s.real} is outside the Mellin strip ({low}, {high}) of {w.id}")


def mellin(w: WeightFunction, s: complex) -> complex:
    """w^(s) = integral of w(t) t**(s-1) over (0, inf) by quadrature split at t = 1."""
    s = complex(s)
    _check_strip(w, s)
    mp_s = mpmath.mpc(s.real, s.imag)
    value = mpmath.quad(lambda t: w.mp_value(t) * mpmath.power(t, mp_s - 1), w.breakpoints)
    return complex(value)


def mellin_derivative(w: WeightFunction, s: complex) -> complex:
    """d/ds w^(s) = integral of w(t) t**(s-1) log t."""
    s = complex(s)
    _check_strip(w, s)
    mp_s = mpmath.mpc(s.real, s.imag)
    value = mpmath.quad(
        lambda t: w.mp_value(t) * mpmath.power(t, mp_s - 1) * mpmath.log(t), w.breakpoints
    )
    return complex(value)


@dataclass(frozen=True)
class EulerProductValue:
    """An Euler product truncated at prime-ideal norm ``bound``.

    ``value`` includes the exponential-integral estimate of the omitted primes and
    ``tail_bound`` is the size of that estimate.
    """

    value: complex
    bound: int
    tail_bound: float


def _log_sum(log_factors: np.ndarray, mult: np.ndarray) -> complex:
    terms = log_factors * mult
    return complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))


def _prime_tail(exponent: complex, bound: int) -> complex:
    """Estimate of the sum of N(p)**-exponent over prime ideals with N(p) > bound."""
    x = (exponent - 1) * math.log(bound)
    return complex(mpmath.e1(mpmath.mpc(x.real, x.imag)))


def _check_factor_poles(denominators: np.ndarray, what: str) -> None:
    closest = float(np.abs(denominators).min()) if len(denominators) else math.inf
    if closest < POLE_DISTANCE:
        raise PoleError(f"{what}: an Euler factor is within {closest:.3g} of a pole")


def p_product(
    z: complex, bound: int = DEFAULT_PRIME_BOUND, drop_even_prime: bool = False
) -> EulerProductValue:
    """prod over prime ideals p of 1 + 1/((N(p)**(z-1/2) - 1)(N(p) + 1))."""
    z = complex(z)
    if z.real <= 0.5:
        raise PoleError(f"the product needs Re(z) > 1/2, got {z}")
    norms, mult = prime_norm_table(bound)
    if drop_even_prime:
        keep = norms != 2
        norms, mult = norms[keep], mult[keep]
    n = norms.astype(np.float64)
    shifted = np.exp((z - 0.5) * np.log(n)) - 1
    _check_factor_poles(shifted, "P(z)")
    log_value = _log_sum(np.log1p(1 / (shifted * (n + 1))), mult)
    tail = _prime_tail(z + 0.5, bound)
    logger.debug(f"P({z}) over prime ideals of norm <= {bound}, tail {abs(tail):.3g}")
    return EulerProductValue(complex(np.exp(log_value + tail)), bound, abs(tail))


def P_eval(  # noqa: N802
    z: complex, bound: int = DEFAULT_PRIME_BOUND, drop_even_prime: bool = False
) -> complex:
    """Value of p_product; the same arguments."""
    return p_product(z, bound, drop_even_prime).value


def ratio_product(
    alpha: complex, beta: complex, bound: int = DEFAULT_PRIME_BOUND
) -> EulerProductValue:
    """prod over odd p of 1 + (N**(a-b) - 1) / (N**(1+a-b) (N**(1+a+b) - 1))."""
    alpha, beta = complex(alpha), complex(beta)
    norms, mult = prime_norm_table(bound)
    odd = norms != 2
    n = norms[odd].astype(np.float64)
    mult = mult[odd]
    log_n = np.log(n)
    denominator = np.exp((1 + alpha + beta) * log_n) - 1
    _check_factor_poles(denominator, "ratio product")
    numerator = np.exp((alpha - beta) * log_n) - 1
    log_value = _log_sum(
        np.log1p(numerator / (np.exp((1 + alpha - beta) * log_n) * denominator)), mult
    )
    if alpha == beta:
        tail = 0j
    else:
        tail = _prime_tail(2 + alpha + beta, bound) - _prime_tail(2 + 2 * alpha, bound)
    return EulerProductValue(complex(np.exp(log_value + tail)), bound, abs(tail))


def euler_ratio_product(
    alpha: complex, beta: complex, bound: int = DEFAULT_PRIME_BOUND
) -> complex:
    """Value of ratio_product; the same arguments."""
    return ratio_product(alpha, beta, bound).value


def ratio_prefactor(alpha: complex, beta: complex) -> complex:
    """pi zeta_K^(2)(1+2 alpha) / (8 zeta_K^(2)(1+alpha+beta))."""
    digits = mpmath.mp.dps
    return math.pi * zeta_K2(1 + 2 * alpha, digits) / (8 * zeta_K2(1 + alpha + beta, digits))


@dataclass(frozen=True)
class MainTermBreakdown:
    """The two main terms X w^(1)(...) and X**(1-alpha) w^(1-alpha)(...)."""

    term1: complex
    term2: complex
    exponents: typing.Tuple[float, float]
    error_exponent_bound: float

    @property
    def total(self) -> complex:
        """term1 + term2."""
        return self.term1 + self.term2

    def to_json(self) -> typing.Dict[str, typing.Any]:
        """JSON object with both terms split into real and imaginary parts."""
        return {
            "term1_re": self.term1.real,
            "term1_im": self.term1.imag,
            "term2_re": self.term2.real,
            "term2_im": self.term2.imag,
            "exponents": list(self.exponents),
            "error_exponent_bound": self.error_exponent_bound,
        }


def gamma_ratio_factor(alpha: complex) -> complex:
    """pi**(2 alpha + 1) Gamma(1-2 alpha) Gamma(alpha) / (Gamma(1-alpha) Gamma(2 alpha))."""
    digits = mpmath.mp.dps
    return (
        math.pi ** (2 * alpha + 1)
        * complex_gamma(1 - 2 * alpha, digits)
        * complex_gamma(alpha, digits)
        / (complex_gamma(1 - alpha, digits) * complex_gamma(2 * alpha, digits))
    )


def gamma_factor_identity(alpha: complex) -> typing.Tuple[complex, complex]:
    """Both forms of the gamma factor of the second residue.

    pi**(2a+1) Gamma(1-2a) Gamma(a) / (Gamma(1-a) Gamma(2a)) zeta_K(1-2a) equals
    pi**(2-2a) Gamma(a) / Gamma(1-a) zeta_K(2a) through the reflection of zeta_K.
    """
    alpha = complex(alpha)
    digits = mpmath.mp.dps
    left = gamma_ratio_factor(alpha) * zeta_K(1 - 2 * alpha, digits)
    right = (
        math.pi ** (2 - 2 * alpha)
        * complex_gamma(alpha, digits)
        / complex_gamma(1 - alpha, digits)
        * zeta_K(2 * alpha, digits)
    )
    return left, right


def error_exponent(alpha: complex, beta: complex) -> float:
    """Exponent of X in the error term: max(1 - 2 Re alpha, 1 - 2 Re beta)."""
    return max(1 - 2 * complex(alpha).real, 1 - 2 * complex(beta).real)


def main_term_ratios(
    X: float,  # noqa: N803
    alpha: complex,
    beta: complex,
    w: WeightFunction,
    bound: int = DEFAULT_PRIME_BOUND,
    drop_even_prime: bool = False,
) -> MainTermBreakdown:
    """Main terms of the weighted average of L(1/2+alpha)/L(1/2+beta) over the family."""
    alpha, beta = complex(alpha), complex(beta)
    if not 0 < alpha.real < 0.5:
        raise ValueError(f"0 < Re(alpha) < 1/2 is required, got {alpha}")
    if beta.real <= 0:
        raise ValueError(f"Re(beta) > 0 is required, got {beta}")
    digits = mpmath.mp.dps
    product = euler_ratio_product(alpha, beta, bound)
    term1 = X * mellin(w, 1) * ratio_prefactor(alpha, beta) * product
    two_part = 2 ** (alpha + beta - 2) / (3 * 2 ** (1 - alpha + beta) - 2)
    term2 = (
        X ** (1 - alpha)
        * mellin(w, 1 - alpha)
        * gamma_ratio_factor(alpha)
        * P_eval(1.5 - alpha + beta, bound, drop_even_prime)
        * zeta_K(1 - 2 * alpha, digits)
        / (zeta_K(2, digits) * zeta_K(1 - alpha + beta, digits))
        * two_part
    )
    return MainTermBreakdown(term1, term2, (1.0, 1 - alpha.real), error_exponent(alpha, beta))


def first_moment_constant(alpha: complex, variant: str = "consistent") -> complex:
    """The power-of-two constant of the second first-moment term.

    ``consistent`` is the beta -> inf limit of the ratios main term, 2**(2a-3)/3;
    ``printed`` is 2**(2a-1)/3.
    """
    if variant == "consistent":
        return 2 ** (2 * alpha - 3) / 3
    if variant == "printed":
        return 2 ** (2 * alpha - 1) / 3
    raise ValueError(f"unknown variant {variant!r}, expected one of {FIRST_MOMENT_VARIANTS}")


def main_term_first_moment(
    X: float,  # noqa: N803
    alpha: complex,
    w: WeightFunction,
    variant: str = "consistent",
) -> MainTermBreakdown:
    """Main terms of the weighted first moment of L(1/2+alpha, chi_{(1+i)^2 n})."""
    alpha = complex(alpha)
    if alpha == 0:
        raise PoleError("both main terms have a pole at alpha = 0; use q_poly")
    digits = mpmath.mp.dps
    term1 = (
        X
        * mellin(w, 1)
        * math.pi
        * zeta_K2(1 + 2 * alpha, digits)
        / (8 * zeta_K2(2 + 2 * alpha, digits))
    )
    term2 = (
        X ** (1 - alpha)
        * mellin(w, 1 - alpha)
        * gamma_ratio_factor(alpha)
        * zeta_K(1 - 2 * alpha, digits)
        / zeta_K(2, digits)
        * first_moment_constant(alpha, variant)
    )
    return MainTermBreakdown(term1, term2, (1.0, 1 - alpha.real), 0.5)


def _scaled_main_term(
    X: float, alpha: float, w: WeightFunction, variant: str  # noqa: N803
) -> complex:
    return main_term_first_moment(X, alpha, w, variant).total / X


def _richardson(full: complex, half: complex) -> complex:
    """Eliminate the quadratic term of a symmetric expansion in the step."""
    return (4 * half - full) / 3


def _symmetric_limit(
    X: float, w: WeightFunction, variant: str, step: float  # noqa: N803
) -> typing.Tuple[complex, complex]:
    """Richardson estimates of the even part at 0 and of the alpha**-1 coefficient."""
    evens, residues = [], []
    for a in (step, step / 2):
        plus = _scaled_main_term(X, a, w, variant)
        minus = _scaled_main_term(X, -a, w, variant)
        evens.append((plus + minus) / 2)
        residues.append(a * (plus - minus) / 2)
    return _richardson(*evens), _richardson(*residues)


def q_poly(
    X: float,  # noqa: N803
    w: WeightFunction,
    variant: str = "consistent",
    digits: int = 30,
) -> float:
    """Q(log X), the limit as alpha -> 0 of the first-moment main term divided by X."""
    with mpmath.workdps(digits):
        estimates = []
        for step in Q_POLY_STEPS:
            value, residue = _symmetric_limit(X, w, variant, step)
            scale = max(1.0, abs(value))
            if abs(residue) > 1e-6 * scale:
                raise ExtrapolationError(
                    f"the alpha**-1 terms do not cancel (residue {residue:.6g}, {variant=})"
                )
            estimates.append(value)
    first, second = estimates
    if abs(first - second) > 1e-4 * max(1.0, abs(first)):
        raise ExtrapolationError(f"extrapolation unstable: {first} vs {second}")
    logger.debug(f"Q(log {X}) = {second.real} (steps {Q_POLY_STEPS})")
    return second.real


def q_coefficients(
    w: WeightFunction, variant: str = "consistent", digits: int = 30
) -> typing.Tuple[float, float]:
    """Slope and intercept of the linear polynomial Q."""
    intercept = q_poly(1.0, w, variant, digits)
    slope = q_poly(math.e, w, variant, digits) - intercept
    return slope, intercept
