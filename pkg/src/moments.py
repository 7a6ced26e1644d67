# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""Brute-force moment and ratio sums over the family chi_{(1+i)^2 n}, n primary.

The sums run over primary n in the effective support of the weight, in the order of
the primary lattice (norm, then coordinates); per-n L-values come from the batched
evaluator in :mod:`lfunctions` and are reduced with ``math.fsum`` in that order, so
the result does not depend on the number of worker processes.
"""

import logging
import math
import time
import typing
from dataclasses import dataclass, field

import numpy as np

from asymptotics import (
    WeightFunction,
    main_term_first_moment,
    main_term_ratios,
)
from characters import SymbolTable
from lfunctions import (
    dirichlet_tail_bound,
    family_l_values,
    lower_symbol_matrix,
    primary_factor_tree,
    zeta_K,
    zeta_K2,
)
from zi_core import (
    CapExceededError,
    GaussianInt,
    factor,
    is_squarefree,
    mobius,
    prime_norm_table,
    primary_lattice,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_X = 10**4
NEAR_ZERO_DENOMINATOR = 1e-6
INNER_TRUNCATION_FACTOR = 10


@dataclass(frozen=True)
class FamilySum:
    """A weighted family sum with its bookkeeping.

    ``flagged`` lists the n whose denominator L-value fell below the near-zero
    threshold; those terms are excluded from ``value``.
    """

    value: complex
    n_count: int
    flagged: typing.Tuple[GaussianInt, ...] = ()


@dataclass
class MomentReport:
    """One row of an experiment: the brute-force sum against the main terms."""

    X: float
    alpha: complex
    beta: typing.Optional[complex]
    lhs: complex
    term1: complex
    term2: complex
    n_count: int
    flagged_count: int = 0
    runtime_s: float = field(default=0.0, compare=False)

    @property
    def residual(self) -> complex:
        """lhs - term1 - term2."""
        return self.lhs - self.term1 - self.term2

    @property
    def relative_residual(self) -> float:
        """|residual| / |term1|."""
        return abs(self.residual) / abs(self.term1)

    def to_row(self) -> typing.Dict[str, typing.Any]:
        """CSV row; runtimes are kept out of it."""
        return {
            "X": self.X,
            "alpha": _complex_text(self.alpha),
            "beta": "" if self.beta is None else _complex_text(self.beta),
            "lhs_re": self.lhs.real,
            "lhs_im": self.lhs.imag,
            "term1_re": self.term1.real,
            "term2_re": self.term2.real,
            "residual_re": self.residual.real,
            "residual_im": self.residual.imag,
            "abs_residual": abs(self.residual),
            "n_count": self.n_count,
            "flagged": self.flagged_count,
        }


def _complex_text(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.12g}" if z.imag == 0 else f"{z.real:.12g}{z.imag:+.12g}j"


def _fsum_complex(terms: np.ndarray) -> complex:
    return complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))


def check_cap(
    X: float, max_x: float = DEFAULT_MAX_X, force: bool = False  # noqa: N803
) -> None:
    """Raise CapExceededError when X exceeds max_x and force is unset."""
    if X > max_x and not force:
        raise CapExceededError(f"X = {X} exceeds the cap {max_x}; pass force to run anyway")


def family_support(
    X: float, w: WeightFunction  # noqa: N803
) -> typing.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Primary n with w(N(n)/X) >= SUPPORT_FLOOR * max w, and their weights."""
    low, high = w.support
    re, im, norm = primary_lattice(max(1, int(X * high)))
    weights = w(norm / X)
    keep = (norm >= X * low) & (weights >= w.maximum * 1e-12)
    logger.debug(f"weight {w.id} at X = {X}: {int(keep.sum())} of {len(norm)} primary n kept")
    return re[keep], im[keep], weights[keep]


def first_moment_sum(
    X: float,  # noqa: N803
    alpha: complex,
    w: WeightFunction,
    threads: int = 1,
    max_x: float = DEFAULT_MAX_X,
    force: bool = False,
    oracle: bool = False,
) -> FamilySum:
    """sum over primary n of L(1/2+alpha, chi_{(1+i)^2 n}) w(N(n)/X)."""
    alpha = complex(alpha)
    check_cap(X, max_x, force)
    if not 0 <= alpha.real < 0.5:
        raise ValueError(f"0 <= Re(alpha) < 1/2 is required, got {alpha}")
    re, im, weights = family_support(X, w)
    digits = 20 if oracle else None
    values = family_l_values(re, im, 0.5 + alpha, threads=threads, oracle=oracle, digits=digits)
    return FamilySum(_fsum_complex(weights * values), len(weights))


def first_moment_lhs(
    X: float, alpha: complex, w: WeightFunction, **kwargs  # noqa: N803
) -> complex:
    """Value of first_moment_sum; the same arguments."""
    return first_moment_sum(X, alpha, w, **kwargs).value


def ratios_sum(
    X: float,  # noqa: N803
    alpha: complex,
    beta: complex,
    w: WeightFunction,
    threads: int = 1,
    max_x: float = DEFAULT_MAX_X,
    force: bool = False,
) -> FamilySum:
    """sum over primary n of L(1/2+alpha)/L(1/2+beta) w(N(n)/X).

    Terms whose denominator is below NEAR_ZERO_DENOMINATOR are flagged and excluded.
    """
    alpha, beta = complex(alpha), complex(beta)
    check_cap(X, max_x, force)
    if beta.real <= 0:
        raise ValueError(f"Re(beta) > 0 is required, got {beta}")
    re, im, weights = family_support(X, w)
    numerators = family_l_values(re, im, 0.5 + alpha, threads=threads)
    if beta == alpha:
        denominators = numerators
    else:
        denominators = family_l_values(re, im, 0.5 + beta, threads=threads)
    small = np.abs(denominators) < NEAR_ZERO_DENOMINATOR
    flagged = tuple(GaussianInt(int(a), int(b)) for a, b in zip(re[small], im[small]))
    for n in flagged:
        logger.warning(f"L(1/2+{beta}) for n = {n} is below {NEAR_ZERO_DENOMINATOR}; excluded")
    safe = np.where(small, 1.0, denominators)
    terms = np.where(small, 0.0, weights * numerators / safe)
    return FamilySum(_fsum_complex(terms), len(weights), flagged)


def ratios_lhs(
    X: float, alpha: complex, beta: complex, w: WeightFunction, **kwargs  # noqa: N803
) -> complex:
    """Value of ratios_sum; the same arguments."""
    return ratios_sum(X, alpha, beta, w, **kwargs).value


def squarefree_primary(max_norm: int) -> typing.Tuple[np.ndarray, np.ndarray]:
    """Squarefree primary elements of norm at most max_norm, as coordinate arrays."""
    re, im, _ = primary_lattice(max_norm)
    keep = np.array(
        [is_squarefree(GaussianInt(a, b)) for a, b in zip(re.tolist(), im.tolist())], dtype=bool
    )
    return re[keep], im[keep]


def second_moment_lhs(
    X: float, s: complex = 0.5, threads: int = 1  # noqa: N803
) -> float:
    """sum over squarefree primary m with N(m) <= X of |L(s, chi_m)|**2."""
    s = complex(s)
    if s.real < 0.5 or abs(s - 1) < 1e-6:
        raise ValueError(f"Re(s) >= 1/2 away from s = 1 is required, got {s}")
    re, im = squarefree_primary(int(X))
    values = family_l_values(re, im, s, threads=threads)
    return math.fsum((np.abs(values) ** 2).tolist())


@dataclass(frozen=True)
class SeriesComparison:
    """Two truncated representations of the same multiple Dirichlet series."""

    first: complex
    second: complex
    truncation_estimate: float

    @property
    def difference(self) -> float:
        """|first - second|."""
        return abs(self.first - self.second)


def _norm_powers(norms: np.ndarray, exponent: complex) -> np.ndarray:
    return np.exp(-exponent * np.log(norms.astype(np.float64)))


def _primary_l_rows(re: np.ndarray, im: np.ndarray, w: complex, truncation: int) -> np.ndarray:
    """sum over primary a, N(a) <= truncation, of (n/a) N(a)**-w for each n, by prime tables."""
    tree = primary_factor_tree(truncation)
    symbols = lower_symbol_matrix(tree, re, im).astype(np.float64)
    return symbols @ _norm_powers(tree.norm, w)


def _twisted_l_value(m: GaussianInt, s: complex, truncation: int) -> complex:
    """sum over primary n, N(n) <= truncation, of (n/m) N(n)**-s, with m as modulus."""
    re, im, norm = primary_lattice(truncation)
    values = SymbolTable(m)(re, im).astype(np.float64)
    return _fsum_complex(values * _norm_powers(norm, s))


def _convergence_check(*exponents: complex) -> None:
    for z in exponents:
        if complex(z).real <= 1.5:
            raise ValueError(f"the series are only summed where every Re > 3/2, got {z}")


def double_dirichlet_A(  # noqa: N802
    s: complex, w_param: complex, cutoff: int
) -> SeriesComparison:
    """sum_n L(w, chi_n) / N(n)**s against sum_m L(s, chi~_m) / N(m)**w.

    Both outer sums stop at norm ``cutoff``; the inner L-series at ten times that. The
    first evaluates (n/a) through prime tables, the second (n/m) with m as modulus.
    """
    s, w_param = complex(s), complex(w_param)
    _convergence_check(s, w_param)
    inner = INNER_TRUNCATION_FACTOR * cutoff
    re, im, norm = primary_lattice(cutoff)
    rows = _primary_l_rows(re, im, w_param, inner)
    first = _fsum_complex(rows * _norm_powers(norm, s))
    twisted = np.array(
        [_twisted_l_value(GaussianInt(a, b), s, inner) for a, b in zip(re.tolist(), im.tolist())]
    )
    second = _fsum_complex(twisted * _norm_powers(norm, w_param))
    sigma, tau = s.real, w_param.real
    estimate = (
        abs(zeta_K(tau)) * dirichlet_tail_bound(sigma, cutoff)
        + abs(zeta_K(sigma)) * dirichlet_tail_bound(tau, cutoff)
        + abs(zeta_K(sigma)) * dirichlet_tail_bound(tau, inner)
        + abs(zeta_K(tau)) * dirichlet_tail_bound(sigma, inner)
    )
    logger.info(f"A({s}, {w_param}) at cutoff {cutoff}: difference {abs(first - second):.3g}")
    return SeriesComparison(first, second, estimate)


def triple_dirichlet_A(  # noqa: N802
    s: complex, w_param: complex, z: complex, cutoff: int
) -> SeriesComparison:
    """sum_n L(w, chi_n) / (L(z, chi_n) N(n)**s) against its (m, k) expansion.

    The expansion is sum_{m,k} mu(k) L(s, chi_{mk}) / (N(m)**w N(k)**z).

    The first sum runs over N(n) <= cutoff, the second over N(m) N(k) <= cutoff.
    """
    s, w_param, z = complex(s), complex(w_param), complex(z)
    _convergence_check(s, w_param, z)
    inner = INNER_TRUNCATION_FACTOR * cutoff
    re, im, norm = primary_lattice(cutoff)
    numerators = _primary_l_rows(re, im, w_param, inner)
    denominators = _primary_l_rows(re, im, z, inner)
    first = _fsum_complex(numerators / denominators * _norm_powers(norm, s))
    elements = [GaussianInt(a, b) for a, b in zip(re.tolist(), im.tolist())]
    signs = [mobius(k) for k in elements]
    products: typing.Dict[GaussianInt, complex] = {}
    terms: typing.List[complex] = []
    for m, m_norm in zip(elements, norm.tolist()):
        for k, k_norm, mu in zip(elements, norm.tolist(), signs):
            if m_norm * k_norm > cutoff:
                break
            if not mu:
                continue
            mk = m * k
            if mk not in products:
                products[mk] = _twisted_l_value(mk, s, inner)
            terms.append(mu * products[mk] * m_norm ** (-w_param) * k_norm ** (-z))
    second = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    sigma, tau, rho = s.real, w_param.real, z.real
    zetas = abs(zeta_K(sigma)) * abs(zeta_K(tau)) * abs(zeta_K(rho))
    estimate = 2 * zetas * (
        dirichlet_tail_bound(min(sigma, tau, rho), cutoff)
        + dirichlet_tail_bound(min(sigma, tau, rho), inner)
    )
    return SeriesComparison(first, second, estimate)


def square_part_A1(  # noqa: N802
    s: complex, w_param: complex, cutoff: int, bound: int = 2**16
) -> SeriesComparison:
    """The square-indexed part of A(s, w) summed directly and as an Euler product.

    Direct: sum over primary squares m, N(m) <= cutoff, of
    zeta_K(s) prod_{p | 2m} (1 - N(p)**-s) / N(m)**w. Euler product:
    zeta_K^(2)(s) prod_{p odd} (1 + N(p)**-2w (1 - N(p)**-s) / (1 - N(p)**-2w)).
    """
    s, w_param = complex(s), complex(w_param)
    zeta_s = zeta_K(s)
    re, im, norm = primary_lattice(max(1, math.isqrt(cutoff)))
    terms: typing.List[complex] = []
    for a, b, j_norm in zip(re.tolist(), im.tolist(), norm.tolist()):
        local = zeta_s * (1 - 2 ** (-s))
        for prime, _ in factor(GaussianInt(a, b)).factors:
            local *= 1 - prime.norm() ** (-s)
        terms.append(local * j_norm ** (-2 * w_param))
    direct = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    norms, mult = prime_norm_table(bound)
    odd = norms != 2
    n = norms[odd].astype(np.float64)
    x = _norm_powers(n, 2 * w_param)
    log_factors = np.log1p(x * (1 - _norm_powers(n, s)) / (1 - x)) * mult[odd]
    euler = zeta_K2(s) * np.exp(_fsum_complex(log_factors))
    sigma, tau = s.real, 2 * w_param.real
    estimate = abs(zeta_s * zeta_K(sigma)) * dirichlet_tail_bound(tau, math.isqrt(cutoff))
    estimate += dirichlet_tail_bound(tau, bound)
    return SeriesComparison(direct, complex(euler), estimate)


def exponent_fit(reports: typing.Sequence[MomentReport]) -> typing.Tuple[float, float]:
    """Least-squares slope of log|residual| against log X and its r**2."""
    if len(reports) < 4:
        raise ValueError(f"the exponent fit needs at least 4 reports, got {len(reports)}")
    x = np.log([r.X for r in reports])
    y = np.log([max(abs(r.residual), 1e-300) for r in reports])
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1 - ss_res / ss_tot
    return float(slope), r2


def first_moment_report(
    X: float,  # noqa: N803
    alpha: complex,
    w: WeightFunction,
    threads: int = 1,
    variant: str = "consistent",
    max_x: float = DEFAULT_MAX_X,
    force: bool = False,
) -> MomentReport:
    """Family sum and main terms of the first moment at X, timed."""
    started = time.monotonic()
    family = first_moment_sum(X, alpha, w, threads=threads, max_x=max_x, force=force)
    main = main_term_first_moment(X, alpha, w, variant)
    report = MomentReport(
        X=X,
        alpha=complex(alpha),
        beta=None,
        lhs=family.value,
        term1=main.term1,
        term2=main.term2,
        n_count=family.n_count,
        runtime_s=time.monotonic() - started,
    )
    logger.info(f"first moment at X = {X}: residual {abs(report.residual):.6g}")
    return report


def ratios_report(
    X: float,  # noqa: N803
    alpha: complex,
    beta: complex,
    w: WeightFunction,
    threads: int = 1,
    max_x: float = DEFAULT_MAX_X,
    force: bool = False,
) -> MomentReport:
    """Family sum and main terms of the ratios at X, timed."""
    started = time.monotonic()
    family = ratios_sum(X, alpha, beta, w, threads=threads, max_x=max_x, force=force)
    main = main_term_ratios(X, alpha, beta, w)
    report = MomentReport(
        X=X,
        alpha=complex(alpha),
        beta=complex(beta),
        lhs=family.value,
        term1=main.term1,
        term2=main.term2,
        n_count=family.n_count,
        flagged_count=len(family.flagged),
        runtime_s=time.monotonic() - started,
    )
    logger.info(f"ratios at X = {X}: residual {abs(report.residual):.6g}")
    return report
