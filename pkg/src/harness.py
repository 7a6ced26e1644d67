# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""Verification suites and report experiments behind the ``verify`` and ``report`` commands.

Each suite is a function of a seeded :class:`random.Random` and a size profile returning
:class:`PropertyResult` records; randomness never comes from anywhere else, so a suite
run is reproducible from the seed alone.
"""

import collections
import csv
import importlib.metadata
import logging
import math
import os
import random
import time
import typing
from dataclasses import dataclass

import mpmath
import numpy as np
import yaml

import asymptotics
import gauss_sums
import lfunctions
import moments
from characters import (
    PSI_LABELS,
    SymbolTable,
    primitive_inducing,
    quad_symbol,
    quad_symbol_naive,
    symbol_i,
    symbol_one_plus_i,
)
from config_models import RunConfig, working_precision
from zi_core import (
    I_UNIT,
    ONE_PLUS_I,
    GaussianInt,
    enumerate_primary,
    factor,
    gcd,
    is_square,
    is_squarefree,
    primary_associate,
    primary_primes,
)

logger = logging.getLogger(__name__)

SUITES = ("symbols", "gauss", "lfunc", "poisson", "prop24", "asymptotics", "ddseries", "stirling")
EXPERIMENTS = ("thm11", "thm12", "cor13")
MANIFEST_NAME = "manifest.yaml"
STIRLING_BOUND = 20.0
SECOND_MOMENT_SLOPE_BOUND = 1.2
SECOND_MOMENT_GRID = (500, 1000, 2000, 4000)

# (quick, acceptance) sizes of every randomised or exhaustive check
_SIZES = {
    "reciprocity_norm": (100, 1000),
    "reciprocity_random": (500, 10_000),
    "supplementary_norm": (1000, 10_000),
    "gauss_norm": (200, 2000),
    "gauss_case_minimum": (1, 100),
    "twisted_norm": (100, 500),
    "root_number_norm": (500, 5000),
    "functional_equation_count": (10, 100),
    "poisson_count": (10, 50),
    "poisson_norm": (500, 10_000),
    "prop24_count": (3, 20),
    "prop24_norm": (50, 200),
    "prop24_cut": (2500, 10_000),
    "alpha_count": (5, 20),
    "ddseries_cutoff": (300, 2000),
    "triple_cutoff": (100, 500),
}


@dataclass(frozen=True)
class PropertyResult:
    """Outcome of one verified property."""

    suite: str
    name: str
    passed: bool
    count: int
    worst: float
    detail: str = ""

    def to_json(self) -> typing.Dict[str, typing.Any]:
        """JSON object keyed by suite, property, passed, count, worst and detail."""
        return {
            "suite": self.suite,
            "property": self.name,
            "passed": self.passed,
            "count": self.count,
            "worst": self.worst,
            "detail": self.detail,
        }

    def to_text(self) -> str:
        """One PASS or FAIL line."""
        status = "PASS" if self.passed else "FAIL"
        line = f"{status} {self.suite}.{self.name} count={self.count} worst={self.worst:.12g}"
        return f"{line} {self.detail}" if self.detail else line


def _size(key: str, profile: str) -> int:
    quick, acceptance = _SIZES[key]
    return acceptance if profile == "acceptance" else quick


def _random_primary(rng: random.Random, max_norm: int) -> GaussianInt:
    """A uniformly chosen primary element of norm <= max_norm (rejection sampling)."""
    radius = math.isqrt(max_norm)
    while True:
        a = rng.randrange(-radius, radius + 1)
        b = rng.randrange(-radius, radius + 1)
        n = GaussianInt(a, b)
        if n.is_odd() and n.norm() <= max_norm:
            return primary_associate(n)


def _random_nonsquare(rng: random.Random, max_norm: int) -> GaussianInt:
    while True:
        n = _random_primary(rng, max_norm)
        if not is_square(n):
            return n


def _random_squarefree(rng: random.Random, max_norm: int) -> GaussianInt:
    while True:
        n = _random_primary(rng, max_norm)
        if n.norm() > 1 and is_squarefree(n):
            return n


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(b))


def suite_symbols(rng: random.Random, profile: str) -> typing.List[PropertyResult]:
    """Reciprocity and the supplementary laws, exhaustively and at random."""
    results = []
    limit = _size("reciprocity_norm", profile)
    elements = list(enumerate_primary(limit))
    failures = count = 0
    for m in elements:
        for n in elements:
            if gcd(m, n).norm() != 1:
                continue
            count += 1
            failures += quad_symbol(m, n) != quad_symbol(n, m)
    results.append(
        PropertyResult("symbols", "reciprocity_exhaustive", not failures, count, float(failures))
    )
    failures = count = 0
    for _ in range(_size("reciprocity_random", profile)):
        m, n = _random_primary(rng, 10**6), _random_primary(rng, 10**6)
        if gcd(m, n).norm() != 1:
            continue
        count += 1
        failures += quad_symbol(m, n) != quad_symbol(n, m)
    results.append(
        PropertyResult("symbols", "reciprocity_random", not failures, count, float(failures))
    )
    failures = count = 0
    for prime in primary_primes(_size("supplementary_norm", profile)):
        count += 1
        failures += symbol_i(prime) != quad_symbol_naive(I_UNIT, prime)
        failures += symbol_one_plus_i(prime) != quad_symbol_naive(ONE_PLUS_I, prime)
    results.append(
        PropertyResult("symbols", "supplementary_laws", not failures, count, float(failures))
    )
    failures = count = 0
    for _ in range(50):
        c = _random_primary(rng, 5000)
        table = SymbolTable(c)
        for _ in range(20):
            x = GaussianInt(rng.randrange(-500, 500), rng.randrange(-500, 500))
            count += 1
            failures += table.at(x) != quad_symbol(x, c)
    results.append(
        PropertyResult("symbols", "vectorised_table", not failures, count, float(failures))
    )
    return results


def _gauss_r_values(rng: random.Random, n: GaussianInt) -> typing.List[GaussianInt]:
    """Five r that reach every prime-power case: units, multiples of primes of n, zero."""
    primes = [p for p, _ in factor(n).factors] or [GaussianInt(1)]
    prime = rng.choice(primes)
    other = GaussianInt(rng.randrange(-30, 30), rng.randrange(-30, 30))
    return [GaussianInt(1), other, prime * other, prime * prime * other, GaussianInt(0)]


def suite_gauss(rng: random.Random, profile: str) -> typing.List[PropertyResult]:
    """Closed-form Gauss sums against direct summation."""
    results = []
    cases: typing.Counter[str] = collections.Counter()
    worst = 0.0
    count = 0
    for n in enumerate_primary(_size("gauss_norm", profile)):
        for r in _gauss_r_values(rng, n):
            cases.update(gauss_sums.gauss_sum_cases(r, n))
            error = _relative(gauss_sums.gauss_sum_fast(r, n), gauss_sums.gauss_sum_direct(r, n))
            worst = max(worst, error)
            count += 1
    results.append(PropertyResult("gauss", "closed_form_vs_direct", worst < 1e-9, count, worst))
    minimum = _size("gauss_case_minimum", profile)
    least = min(cases[case] for case in gauss_sums.PRIME_POWER_CASES)
    coverage = ", ".join(f"{case}: {cases[case]}" for case in gauss_sums.PRIME_POWER_CASES)
    results.append(
        PropertyResult(
            "gauss", "case_coverage", least >= minimum, len(cases), float(least), coverage
        )
    )
    worst = 0.0
    count = 0
    for c in enumerate_primary(_size("twisted_norm", profile)):
        for j in (1, 2):
            r = GaussianInt(rng.randrange(-20, 20), rng.randrange(-20, 20))
            error = _relative(
                gauss_sums.gauss_sum_twisted(r, j, c), gauss_sums.gauss_sum_twisted_direct(r, j, c)
            )
            worst = max(worst, error)
            count += 1
    results.append(PropertyResult("gauss", "twisted_identity", worst < 1e-9, count, worst))
    return results


def suite_lfunc(rng: random.Random, profile: str) -> typing.List[PropertyResult]:
    """Root numbers, the functional equation, afe against direct_series and zeta_K."""
    results = []
    worst = 0.0
    count = 0
    for c in enumerate_primary(_size("root_number_norm", profile)):
        if not is_squarefree(c):
            continue
        worst = max(worst, abs(abs(lfunctions.root_number(primitive_inducing(c))) - 1))
        count += 1
    results.append(PropertyResult("lfunc", "root_number_modulus", worst < 1e-10, count, worst))
    worst = 0.0
    checks = _size("functional_equation_count", profile)
    for _ in range(checks):
        character = primitive_inducing(_random_squarefree(rng, 300), rng.choice(PSI_LABELS))
        s = complex(rng.uniform(0.2, 0.8), rng.uniform(-5, 5))
        worst = max(worst, lfunctions.verify_functional_equation(character, s))
    results.append(PropertyResult("lfunc", "functional_equation", worst < 1e-8, checks, worst))
    worst = 0.0
    for _ in range(min(checks, 5)):
        character = primitive_inducing(_random_squarefree(rng, 200))
        afe = lfunctions.l_value(character, 2, method="afe")
        direct = lfunctions.l_value(character, 2, method="direct_series")
        slack = abs(afe.value - direct.value) - (afe.est_error + direct.est_error)
        worst = max(worst, slack)
    results.append(PropertyResult("lfunc", "afe_vs_direct", worst <= 0, min(checks, 5), worst))
    results.extend(_zeta_properties(rng, profile))
    results.append(_second_moment_growth())
    return results


def _second_moment_growth() -> PropertyResult:
    """Log-log slope of the squarefree second moment at the central point."""
    grid = SECOND_MOMENT_GRID
    sums = [moments.second_moment_lhs(x) for x in grid]
    slope = float(np.polyfit(np.log(grid), np.log(sums), 1)[0])
    return PropertyResult(
        "lfunc",
        "second_moment_growth",
        slope <= SECOND_MOMENT_SLOPE_BOUND,
        len(grid),
        slope,
        f"X grid {list(grid)}",
    )


def _zeta_oracle(s: float) -> float:
    """zeta_K(s) = zeta(s) L(s, chi_-4) from Hurwitz zeta values."""
    with mpmath.workdps(30):
        value = mpmath.zeta(s) * (mpmath.zeta(s, 0.25) - mpmath.zeta(s, 0.75)) / mpmath.power(4, s)
        return float(value)


def _zeta_properties(rng: random.Random, profile: str) -> typing.List[PropertyResult]:
    error = abs(lfunctions.zeta_K(2).real - _zeta_oracle(2))
    results = [PropertyResult("lfunc", "zeta_K_at_2", error < 1e-9, 1, error)]
    _, distance = lfunctions.zeta_K_residue_check(1e-4)
    results.append(PropertyResult("lfunc", "zeta_K_residue", distance < 1e-6, 1, distance))
    worst = 0.0
    checks = _size("alpha_count", profile)
    for _ in range(checks):
        alpha = rng.uniform(0.05, 0.45)
        left = lfunctions.zeta_K(2 * alpha)
        right = (
            math.pi ** (4 * alpha - 1)
            * lfunctions.complex_gamma(1 - 2 * alpha)
            / lfunctions.complex_gamma(2 * alpha)
            * lfunctions.zeta_K(1 - 2 * alpha)
        )
        worst = max(worst, _relative(left, right))
    results.append(PropertyResult("lfunc", "zeta_K_reflection", worst < 1e-9, checks, worst))
    return results


def suite_poisson(rng: random.Random, profile: str) -> typing.List[PropertyResult]:
    """The Poisson identity for the theta series of random twists."""
    worst = 0.0
    checks = _size("poisson_count", profile)
    for _ in range(checks):
        n = _random_nonsquare(rng, _size("poisson_norm", profile))
        y = math.exp(rng.uniform(math.log(0.1), math.log(10)))
        worst = max(worst, lfunctions.verify_poisson(n, y))
    return [PropertyResult("poisson", "poisson_identity", worst < 1e-10, checks, worst)]


def suite_prop24(rng: random.Random, profile: str) -> typing.List[PropertyResult]:
    """The Gauss sum expansion of L at Re s = -1/2 against its tail estimate."""
    checks = _size("prop24_count", profile)
    k_cut = _size("prop24_cut", profile)
    within = 0
    worst_ratio = 0.0
    ratios = []
    for _ in range(checks):
        n = _random_nonsquare(rng, _size("prop24_norm", profile))
        s = complex(-0.5, rng.uniform(-2, 2))
        check = lfunctions.verify_prop24(n, s, k_cut)
        doubled = lfunctions.verify_prop24(n, s, 2 * k_cut)
        within += check.residual <= check.tail_estimate
        worst_ratio = max(worst_ratio, check.residual / check.tail_estimate)
        ratios.append(doubled.residual / check.residual if check.residual else 0.0)
    median = sorted(ratios)[len(ratios) // 2] if ratios else 0.0
    return [
        PropertyResult(
            "prop24",
            "gauss_sum_expansion",
            within == checks,
            checks,
            worst_ratio,
            f"median residual ratio on doubling k_cut: {median:.3g}",
        )
    ]


def suite_asymptotics(rng: random.Random, profile: str) -> typing.List[PropertyResult]:
    """The gamma factor identity and the stability of P and the Q polynomial."""
    results = []
    worst = 0.0
    checks = _size("alpha_count", profile)
    for _ in range(checks):
        left, right = asymptotics.gamma_factor_identity(rng.uniform(0.05, 0.45))
        worst = max(worst, _relative(left, right))
    results.append(
        PropertyResult("asymptotics", "gamma_factor_identity", worst < 1e-9, checks, worst)
    )
    w = asymptotics.weight("exp_decay")
    limit = _relative(
        asymptotics.main_term_ratios(1000, 0.1, 20, w).total,
        asymptotics.main_term_first_moment(1000, 0.1, w).total,
    )
    results.append(PropertyResult("asymptotics", "large_beta_limit", limit < 1e-5, 1, limit))
    stability = abs(
        asymptotics.P_eval(1.55, bound=2**20) - asymptotics.P_eval(1.55, bound=2**21)
    )
    results.append(
        PropertyResult("asymptotics", "p_cutoff_doubling", stability < 1e-7, 1, stability)
    )
    stability = abs(
        asymptotics.euler_ratio_product(0.25, 0.3, bound=2**20)
        - asymptotics.euler_ratio_product(0.25, 0.3, bound=2**21)
    )
    results.append(
        PropertyResult(
            "asymptotics", "ratio_product_cutoff_doubling", stability < 1e-8, 1, stability
        )
    )
    spread = 0.0
    for name in ("exp_decay", "exp_both"):
        weight = asymptotics.weight(name)
        first = asymptotics.q_poly(1000, weight)
        second = asymptotics.q_poly(1000, weight, digits=40)
        spread = max(spread, _relative(first, second))
    results.append(PropertyResult("asymptotics", "q_poly_stability", spread < 1e-4, 2, spread))
    try:
        asymptotics.q_poly(1000, w, variant="printed")
        raised = False
    except asymptotics.ExtrapolationError:
        raised = True
    results.append(
        PropertyResult(
            "asymptotics", "printed_constant_rejected", raised, 1, 0.0 if raised else 1.0
        )
    )
    return results


def suite_ddseries(rng: random.Random, profile: str) -> typing.List[PropertyResult]:
    """Symmetry of the double and triple Dirichlet series and the square-part Euler product."""
    results = []
    cutoff = _size("ddseries_cutoff", profile)
    small = moments.double_dirichlet_A(2, 2, cutoff)
    large = moments.double_dirichlet_A(2, 2, 2 * cutoff)
    results.append(
        PropertyResult(
            "ddseries",
            "double_series_symmetry",
            small.difference <= small.truncation_estimate,
            2,
            small.difference,
            f"shrink factor on doubling: {small.difference / max(large.difference, 1e-300):.3g}",
        )
    )
    cutoff = _size("triple_cutoff", profile)
    triple = moments.triple_dirichlet_A(2, 2, 2.5, cutoff)
    results.append(
        PropertyResult(
            "ddseries",
            "triple_series_symmetry",
            triple.difference <= triple.truncation_estimate,
            1,
            triple.difference,
        )
    )
    square = moments.square_part_A1(2, 2, 10**4)
    results.append(
        PropertyResult(
            "ddseries",
            "square_part_euler_product",
            square.difference <= square.truncation_estimate,
            1,
            square.difference,
        )
    )
    return results


def suite_stirling(rng: random.Random, profile: str) -> typing.List[PropertyResult]:
    """The gamma ratio against its Stirling envelope on the critical strip."""
    re_values = [0.1, 0.3, 0.5, 0.7, 0.9]
    im_values = [float(t) for t in range(-30, 31)]
    envelope = lfunctions.stirling_envelope(re_values, im_values)
    count = len(re_values) * len(im_values)
    passed = envelope < STIRLING_BOUND
    return [PropertyResult("stirling", "gamma_ratio_envelope", passed, count, envelope)]


Suite = typing.Callable[[random.Random, str], typing.List[PropertyResult]]

_SUITE_FUNCTIONS: typing.Dict[str, Suite] = {
    "symbols": suite_symbols,
    "gauss": suite_gauss,
    "lfunc": suite_lfunc,
    "poisson": suite_poisson,
    "prop24": suite_prop24,
    "asymptotics": suite_asymptotics,
    "ddseries": suite_ddseries,
    "stirling": suite_stirling,
}


def verify(suite: str, config: RunConfig) -> typing.List[PropertyResult]:
    """Run one suite, or every suite for ``all``, seeded from the configuration."""
    if suite != "all" and suite not in _SUITE_FUNCTIONS:
        raise ValueError(f"unknown suite {suite!r}, expected one of {SUITES + ('all',)}")
    names = SUITES if suite == "all" else (suite,)
    results: typing.List[PropertyResult] = []
    with working_precision(config.precision_digits):
        for name in names:
            rng = random.Random(f"{config.seed}:{name}")
            logger.info(f"running verification suite {name} ({config.profile})")
            suite_results = _SUITE_FUNCTIONS[name](rng, config.profile)
            for result in suite_results:
                if not result.passed:
                    logger.warning(f"{result.suite}.{result.name} failed: worst {result.worst}")
            results.extend(suite_results)
    return results


@dataclass
class ExperimentReport:
    """Rows of an X-grid experiment and the fitted residual exponent."""

    experiment: str
    reports: typing.List[moments.MomentReport]
    slope: float
    r2: float
    bound: float
    extra_rows: typing.Optional[typing.List[typing.Dict[str, typing.Any]]] = None

    @property
    def passed(self) -> bool:
        """Slope within the bound and no flagged twists."""
        return self.slope <= self.bound and not any(r.flagged_count for r in self.reports)


def _cor13_rows(
    config: RunConfig, w: asymptotics.WeightFunction
) -> typing.List[typing.Dict[str, typing.Any]]:
    rows = []
    for x in config.x_grid:
        family = moments.first_moment_sum(
            x, 0, w, threads=config.threads, max_x=config.max_x, force=config.force
        )
        predicted = x * asymptotics.q_poly(x, w, config.first_moment_variant)
        rows.append(
            {
                "X": x,
                "lhs": family.value.real,
                "X_times_Q": predicted,
                "relative_deviation": family.value.real / predicted - 1,
            }
        )
    return rows


def report(experiment: str, config: RunConfig) -> ExperimentReport:
    """Run an X-grid experiment comparing family sums with their main terms."""
    if experiment not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {experiment!r}, expected one of {EXPERIMENTS}")
    w = asymptotics.weight(config.weight)
    extra = None
    with working_precision(config.precision_digits):
        if experiment == "thm11":
            rows = [
                moments.ratios_report(
                    x, config.alpha, config.beta, w, config.threads, config.max_x, config.force
                )
                for x in config.x_grid
            ]
            bound = asymptotics.error_exponent(config.alpha, config.beta) + 0.25
        else:
            rows = [
                moments.first_moment_report(
                    x,
                    config.alpha,
                    w,
                    config.threads,
                    config.first_moment_variant,
                    config.max_x,
                    config.force,
                )
                for x in config.x_grid
            ]
            bound = config.fit_bound
            if experiment == "cor13":
                extra = _cor13_rows(config, w)
    if len(rows) >= 4:
        slope, r2 = moments.exponent_fit(rows)
    else:
        logger.warning(f"only {len(rows)} X values; the exponent fit needs 4")
        slope, r2 = math.nan, math.nan
    result = ExperimentReport(experiment, rows, slope, r2, bound, extra)
    logger.info(f"{experiment}: fitted exponent {slope:.4g} (bound {bound}), r2 {r2:.4g}")
    return result


def _write_csv(path: str, rows: typing.Sequence[typing.Dict[str, typing.Any]]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(rows[0]))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _format_cell(v) for k, v in row.items()})


def _format_cell(value: typing.Any) -> typing.Any:
    return f"{value:.12g}" if isinstance(value, float) else value


def write_report(result: ExperimentReport, output_dir: str) -> typing.List[str]:
    """Write the report rows, the plot-ready residual table and the fit; return the paths."""
    os.makedirs(output_dir, exist_ok=True)
    paths = []
    rows_path = os.path.join(output_dir, f"{result.experiment}.csv")
    _write_csv(rows_path, [r.to_row() for r in result.reports])
    paths.append(rows_path)
    residual_path = os.path.join(output_dir, f"{result.experiment}_residuals.csv")
    residuals = [{"X": r.X, "abs_residual": abs(r.residual)} for r in result.reports]
    _write_csv(residual_path, residuals)
    paths.append(residual_path)
    if result.extra_rows:
        extra_path = os.path.join(output_dir, f"{result.experiment}_q_poly.csv")
        _write_csv(extra_path, result.extra_rows)
        paths.append(extra_path)
    fit_path = os.path.join(output_dir, f"{result.experiment}_fit.yaml")
    with open(fit_path, "w") as f:
        yaml.safe_dump(
            {
                "slope": result.slope,
                "r2": result.r2,
                "bound": result.bound,
                "passed": result.passed,
            },
            f,
            default_flow_style=False,
        )
    paths.append(fit_path)
    logger.info(f"report written to {output_dir}")
    return paths


def _package_versions() -> typing.Dict[str, str]:
    versions = {}
    for package in ("numpy", "scipy", "mpmath", "pydantic", "PyYAML"):
        try:
            versions[package] = importlib.metadata.version(package)
        except importlib.metadata.PackageNotFoundError:
            versions[package] = "unknown"
    return versions


def write_manifest(
    config: RunConfig,
    runtime_s: float,
    outputs: typing.Sequence[str] = (),
) -> str:
    """Record the configuration, package versions, seed and runtime of a run."""
    os.makedirs(config.output_dir, exist_ok=True)
    path = os.path.join(config.output_dir, MANIFEST_NAME)
    manifest = {
        "config": yaml.safe_load(config.to_yaml()),
        "versions": _package_versions(),
        "seed": config.seed,
        "runtime_s": round(runtime_s, 3),
        "finished_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "outputs": list(outputs),
    }
    with open(path, "w") as f:
        yaml.safe_dump(manifest, f, default_flow_style=False, sort_keys=True)
    return path
