# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""Command-line entry point ``gaussian-moments``.

Exit status is 0 on success, 1 when a verification property or an exponent fit fails
and 2 for usage, configuration or domain errors.
"""

import argparse
import csv
import json
import logging
import sys
import time
import typing

import asymptotics
import gauss_sums
import harness
import lfunctions
import moments
from characters import primitive_inducing, quad_symbol, quad_symbol_naive
from config_models import RunConfig, parse_complex, working_precision
from zi_core import euler_phi, factor, is_primary, is_squarefree, mobius, parse_gaussian

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

Row = typing.Dict[str, typing.Any]
Result = typing.Tuple[int, typing.List[Row]]

# flag destination -> RunConfig field
_GLOBAL_FLAGS = {
    "precision": "precision_digits",
    "threads": "threads",
    "seed": "seed",
    "output": "output_format",
    "output_dir": "output_dir",
    "max_norm": "max_norm",
    "max_x": "max_x",
    "alpha": "alpha",
    "beta": "beta",
    "weight": "weight",
    "force": "force",
    "log_level": "log_level",
    "x_grid": "x_grid",
    "fit_bound": "fit_bound",
    "profile": "profile",
    "variant": "first_moment_variant",
    "drop_even_prime": "drop_even_prime",
}


class UsageError(ValueError):
    """Raised for arguments argparse accepts but the command cannot use."""


def _format_value(value: typing.Any) -> typing.Any:
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, complex):
        return f"{value.real:.12g}{value.imag:+.12g}j"
    return value


def emit(
    rows: typing.Sequence[Row], output_format: str, stream: typing.Optional[typing.TextIO] = None
) -> None:
    """Write result rows as JSON, CSV or aligned ``key: value`` text."""
    stream = stream or sys.stdout
    if output_format == "json":
        payload: typing.Any = rows[0] if len(rows) == 1 else list(rows)
        json.dump(payload, stream, indent=2, default=str, sort_keys=True)
        stream.write("\n")
    elif output_format == "csv":
        writer = csv.DictWriter(stream, fieldnames=list(rows[0]))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _format_value(v) for k, v in row.items()})
    else:
        for index, row in enumerate(rows):
            if index:
                stream.write("\n")
            width = max(len(str(key)) for key in row)
            for key, value in row.items():
                stream.write(f"{str(key).ljust(width)}  {_format_value(value)}\n")


def _complex_s(args: argparse.Namespace) -> complex:
    return complex(args.s_re, args.s_im)


def _gaussian(text: str) -> typing.Any:
    try:
        return parse_gaussian(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def cmd_symbol(args: argparse.Namespace, config: RunConfig) -> Result:
    """Quadratic residue symbol, optionally with the naive evaluation beside it."""
    value = quad_symbol(args.a, args.n)
    row: Row = {"a": str(args.a), "n": str(args.n), "symbol": value}
    if args.naive:
        row["naive"] = quad_symbol_naive(args.a, args.n)
    return EXIT_OK, [row]


def cmd_gauss(args: argparse.Namespace, config: RunConfig) -> Result:
    """Gauss sum by closed form and by direct summation."""
    if args.twisted:
        direct = gauss_sums.gauss_sum_twisted_direct(args.r, args.twisted, args.n)
        fast = gauss_sums.gauss_sum_twisted(args.r, args.twisted, args.n)
    else:
        direct = gauss_sums.gauss_sum_direct(args.r, args.n)
        fast = gauss_sums.gauss_sum_fast(args.r, args.n)
    row: Row = {
        "r": str(args.r),
        "n": str(args.n),
        "direct": direct,
        "fast": fast,
        "difference": abs(direct - fast),
    }
    if not args.twisted:
        row["cases"] = ";".join(gauss_sums.gauss_sum_cases(args.r, args.n))
    return EXIT_OK, [row]


def cmd_lvalue(args: argparse.Namespace, config: RunConfig) -> Result:
    """A value of L(s, chi) by the chosen method."""
    evaluation = lfunctions.l_value_imprimitive(
        args.twist, _complex_s(args), method=args.method, digits=config.precision_digits
    )
    return EXIT_OK, [evaluation.to_json()]


def cmd_zeta(args: argparse.Namespace, config: RunConfig) -> Result:
    """A value of zeta_K(s)."""
    s = _complex_s(args)
    value = lfunctions.zeta_K2(s) if args.remove_two else lfunctions.zeta_K(s)
    return EXIT_OK, [{"s": s, "value_re": value.real, "value_im": value.imag}]


def cmd_mainterm(args: argparse.Namespace, config: RunConfig) -> Result:
    """Main terms of the ratios conjecture at one X."""
    w = asymptotics.weight(config.weight)
    if args.first_moment:
        breakdown = asymptotics.main_term_first_moment(
            args.x, config.alpha, w, config.first_moment_variant
        )
    else:
        breakdown = asymptotics.main_term_ratios(
            args.x, config.alpha, config.beta, w, drop_even_prime=config.drop_even_prime
        )
    row = breakdown.to_json()
    row["exponents"] = ";".join(f"{e:.12g}" for e in breakdown.exponents)
    return EXIT_OK, [row]


def _experiment(experiment: str, config: RunConfig) -> Result:
    result = harness.report(experiment, config)
    rows: typing.List[Row] = [r.to_row() for r in result.reports]
    if len(result.reports) >= 4:
        logger.info(f"fitted residual exponent {result.slope:.6g}, bound {result.bound}")
        return (EXIT_OK if result.passed else EXIT_FAILURE), rows
    return EXIT_OK, rows


def cmd_moment(args: argparse.Namespace, config: RunConfig) -> Result:
    """The first moment experiment over the X grid."""
    return _experiment("thm12", config)


def cmd_ratios(args: argparse.Namespace, config: RunConfig) -> Result:
    """The ratios experiment over the X grid."""
    return _experiment("thm11", config)


def cmd_mds(args: argparse.Namespace, config: RunConfig) -> Result:
    """Both truncations of a multiple Dirichlet series."""
    if args.square_part:
        comparison = moments.square_part_A1(args.s, args.w, args.cutoff)
    elif args.z is not None:
        comparison = moments.triple_dirichlet_A(args.s, args.w, args.z, args.cutoff)
    else:
        comparison = moments.double_dirichlet_A(args.s, args.w, args.cutoff)
    row: Row = {
        "first": comparison.first,
        "second": comparison.second,
        "difference": comparison.difference,
        "truncation_estimate": comparison.truncation_estimate,
    }
    return EXIT_OK, [row]


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> Result:
    """Run the property suites; failure of any property exits with EXIT_FAILURE."""
    results = harness.verify(args.suite, config)
    if config.output_format == "text":
        for result in results:
            sys.stdout.write(result.to_text() + "\n")
        rows: typing.List[Row] = []
    else:
        rows = [result.to_json() for result in results]
    failed = [r for r in results if not r.passed]
    logger.info(f"{len(results) - len(failed)} of {len(results)} properties passed")
    return (EXIT_FAILURE if failed else EXIT_OK), rows


def cmd_report(args: argparse.Namespace, config: RunConfig) -> Result:
    """Run an experiment and write its report files."""
    result = harness.report(args.experiment, config)
    paths = harness.write_report(result, config.output_dir)
    row: Row = {
        "experiment": result.experiment,
        "slope": result.slope,
        "r2": result.r2,
        "bound": result.bound,
        "passed": result.passed,
        "files": ";".join(paths),
    }
    return (EXIT_OK if result.passed else EXIT_FAILURE), [row]


def cmd_factor(args: argparse.Namespace, config: RunConfig) -> Result:
    """Factorisation of n with its arithmetic functions when n is primary."""
    n = args.n
    if n.norm() > config.max_norm:
        raise UsageError(f"N({n}) = {n.norm()} exceeds max-norm {config.max_norm}")
    factorization = factor(n)
    row: Row = {
        "n": str(n),
        "unit_exp": factorization.unit_exp,
        "two_exp": factorization.two_exp,
        "factors": " ".join(f"({p})^{e}" for p, e in factorization.factors),
        "norm": n.norm(),
    }
    if is_primary(n):
        row.update({"mobius": mobius(n), "squarefree": is_squarefree(n), "phi": euler_phi(n)})
    return EXIT_OK, [row]


def cmd_character(args: argparse.Namespace, config: RunConfig) -> Result:
    """The primitive character of a twist and optionally its root number."""
    character = primitive_inducing(args.n, args.psi)
    row = character.to_json()
    row["conductor_norm"] = character.conductor_norm
    if args.root_number:
        w = lfunctions.root_number(character)
        row.update({"root_number_re": w.real, "root_number_im": w.imag})
    return EXIT_OK, [row]


def _add_global_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="YAML configuration file")
    parser.add_argument("--precision", type=int, help="mpmath decimal digits (>= 15)")
    parser.add_argument("--threads", type=int, help="worker processes for family sums")
    parser.add_argument("--seed", type=int, help="seed of the randomised verification suites")
    parser.add_argument("--output", choices=("json", "csv", "text"), help="output format")
    parser.add_argument("--output-dir", help="directory for reports and the run manifest")
    parser.add_argument("--max-norm", type=int)
    parser.add_argument("--max-x", type=float)
    parser.add_argument("--alpha", type=_complex_arg)
    parser.add_argument("--beta", type=_complex_arg)
    parser.add_argument("--weight", choices=asymptotics.WEIGHT_IDS)
    parser.add_argument("--force", action="store_true", default=None, help="run past the X cap")
    parser.add_argument("--log-level")
    parser.add_argument("--x-grid", help="comma separated X values, e.g. 1000,2000,4000,8000")
    parser.add_argument("--fit-bound", type=float)
    parser.add_argument("--profile", choices=("quick", "acceptance"))
    parser.add_argument(
        "--variant", choices=asymptotics.FIRST_MOMENT_VARIANTS, help="first-moment constant"
    )
    parser.add_argument("--drop-even-prime", action="store_true", default=None)


def _add_s_flags(parser: argparse.ArgumentParser, default_re: float) -> None:
    parser.add_argument("--s-re", type=float, default=default_re)
    parser.add_argument("--s-im", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    """The argparse parser with global flags and one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="gaussian-moments",
        description="Quadratic Hecke L-functions over Q(i) and their moments",
    )
    _add_global_flags(parser)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("symbol", help="quadratic residue symbol (a/n)")
    p.add_argument("a", type=_gaussian)
    p.add_argument("n", type=_gaussian)
    p.add_argument("--naive", action="store_true", help="also evaluate by Euler's criterion")
    p.set_defaults(handler=cmd_symbol)

    p = sub.add_parser("gauss", help="Gauss sum g(r, n) directly and in closed form")
    p.add_argument("r", type=_gaussian)
    p.add_argument("n", type=_gaussian)
    p.add_argument("--twisted", type=int, choices=(1, 2), help="twist by psi_j, j = 1 or 2")
    p.set_defaults(handler=cmd_gauss)

    p = sub.add_parser("lvalue", help="L(s, chi_m)")
    p.add_argument("--twist", type=_gaussian, required=True)
    _add_s_flags(p, 0.5)
    p.add_argument("--method", choices=("auto", "afe", "direct_series"), default="auto")
    p.set_defaults(handler=cmd_lvalue)

    p = sub.add_parser("zeta", help="Dedekind zeta function of Q(i)")
    _add_s_flags(p, 2.0)
    p.add_argument("--remove-two", action="store_true", help="drop the Euler factor at 1+i")
    p.set_defaults(handler=cmd_zeta)

    p = sub.add_parser("mainterm", help="main terms of the ratios or first-moment asymptotic")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--first-moment", action="store_true")
    p.set_defaults(handler=cmd_mainterm)

    p = sub.add_parser("moment", help="first moment over the X grid against its main terms")
    p.set_defaults(handler=cmd_moment)

    p = sub.add_parser("ratios", help="ratios sum over the X grid against its main terms")
    p.set_defaults(handler=cmd_ratios)

    p = sub.add_parser("mds", help="compare two summation orders of a multiple Dirichlet series")
    p.add_argument("--s", type=_complex_arg, default=complex(2))
    p.add_argument("--w", type=_complex_arg, default=complex(2))
    p.add_argument("--z", type=_complex_arg, help="denominator variable of the triple series")
    p.add_argument("--cutoff", type=int, default=500)
    p.add_argument("--square-part", action="store_true")
    p.set_defaults(handler=cmd_mds)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=harness.SUITES + ("all",))
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("report", help="run an X-grid experiment and write its report files")
    p.add_argument("experiment", choices=harness.EXPERIMENTS)
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("factor", help="factor a Gaussian integer")
    p.add_argument("n", type=_gaussian)
    p.set_defaults(handler=cmd_factor)

    p = sub.add_parser("character", help="primitive character inducing chi_n psi_j")
    p.add_argument("n", type=_gaussian)
    p.add_argument("--psi", default="1", choices=("1", "i", "1+i", "i(1+i)"))
    p.add_argument("--root-number", action="store_true")
    p.set_defaults(handler=cmd_character)
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """RunConfig from --config, the environment and the global flags."""
    overrides = {field: getattr(args, flag) for flag, field in _GLOBAL_FLAGS.items()}
    overrides["subcommand"] = args.subcommand
    return RunConfig.load(args.config, overrides=overrides)


def main(argv: typing.Optional[typing.Sequence[str]] = None) -> int:
    """Entry point; returns the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args)
    except (OSError, ValueError) as e:
        logging.basicConfig(level=logging.INFO)
        logger.error(f"invalid configuration: {e}")
        return EXIT_USAGE
    logging.basicConfig(
        level=config.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    started = time.monotonic()
    try:
        with working_precision(config.precision_digits):
            status, rows = args.handler(args, config)
    except (ValueError, ArithmeticError) as e:
        logger.error(f"{args.subcommand} failed: {e}")
        return EXIT_USAGE
    except RuntimeError:
        logger.exception(f"{args.subcommand} hit an internal error")
        return EXIT_FAILURE
    if rows:
        emit(rows, config.output_format)
    harness.write_manifest(config, time.monotonic() - started)
    return status


if __name__ == "__main__":
    sys.exit(main())
