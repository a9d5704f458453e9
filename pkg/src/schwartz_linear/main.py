"""Main entry point for the slo command."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

import structlog
from pydantic import ValidationError

from . import __version__
from .catalog import (
    DISTRIBUTION_IDS,
    FAMILY_IDS,
    TEST_FUNCTION_IDS,
    parse_distribution,
    parse_family,
    parse_point,
    parse_test_function,
)
from .codec import (
    CoefficientListing,
    FamilyEvaluation,
    PairedValue,
    coefficient_rows,
    evaluation_to_csv,
    evaluation_to_json,
    listing_to_csv,
    listing_to_json,
    report_to_csv,
    report_to_json,
)
from .config import DEFAULT_CONFIG_PATH, CliConfig, load_config_auto
from .distribution import evaluate, pair
from .errors import SchwartzError
from .family import dirac_derivative_family, dirac_family, family_apply, member, superpose
from .hermite import hermite_basis
from .operator import apply, compose, derivative_operator, identity_operator
from .verify import run_suite, scaled_error

LOG_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# CLI flag destination -> CliConfig field
FLAG_FIELDS = {
    "order": "order",
    "quad": "quad_order",
    "dim": "dim",
    "tol": "tol",
    "tail_fraction": "tail_fraction",
    "seed": "seed",
    "format": "format",
    "out": "output_path",
    "workers": "workers",
    "log_level": "log_level",
}


def configure_logging(level: str) -> None:
    """Configure structlog for JSON logging on stderr; stdout carries results."""
    structlog.configure(
        processors=[
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            LOG_LEVELS.get(level.lower(), logging.WARNING)
        ),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        "-c",
        type=Path,
        help=f"Path to config file (default: {DEFAULT_CONFIG_PATH} if exists, else env vars)",
    )
    common.add_argument("--order", type=int, help="Maximum Hermite degree N (default: 32)")
    common.add_argument("--quad", type=int, help="Gauss-Hermite nodes per axis (default: 80)")
    common.add_argument("--dim", type=int, help="Spatial dimension (default: 1)")
    common.add_argument("--tol", type=float, help="Comparison tolerance (default: 1e-10)")
    common.add_argument(
        "--tail-fraction", type=float, help="Schwartz-membership tail threshold (default: 1e-8)"
    )
    common.add_argument("--seed", type=int, help="Seed for randomized checks (default: 0)")
    common.add_argument("--format", choices=["json", "csv"], help="Output format (default: json)")
    common.add_argument("--out", type=Path, help="Write output to this file instead of stdout")
    common.add_argument("--workers", type=int, help="Threads for the verification suite")
    common.add_argument(
        "--log-level",
        choices=list(LOG_LEVELS),
        help="Logging level on stderr (default: warning)",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="slo",
        description="Schwartz families and S-linear operators in a truncated Hermite basis",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("verify", parents=[common], help="Run the verification suite")

    expand = commands.add_parser(
        "expand", parents=[common], help="Print the Dirac-basis expansion of a distribution"
    )
    expand.add_argument("name", help=f"Distribution id: {', '.join(DISTRIBUTION_IDS)}")

    deriv = commands.add_parser(
        "deriv", parents=[common], help="Print the k-th derivative of a distribution"
    )
    deriv.add_argument("name", help=f"Distribution id: {', '.join(DISTRIBUTION_IDS)}")
    deriv.add_argument("k", type=int, help="Derivative order along the first axis")

    family_eval = commands.add_parser(
        "family-eval", parents=[common], help="Evaluate v_p(phi) for a builtin family"
    )
    family_eval.add_argument("family", help=f"Family id: {', '.join(FAMILY_IDS)}")
    family_eval.add_argument("point", help="Comma-separated coordinates of p")
    family_eval.add_argument("function", help=f"Test function id: {', '.join(TEST_FUNCTION_IDS)}")
    return parser


def resolve_config(args: argparse.Namespace) -> tuple[CliConfig, str]:
    """Defaults, then the config file, then SLO_* variables, then explicit flags."""
    base, source = load_config_auto(args.config)
    data = base.model_dump()
    overrides = {
        field: getattr(args, dest)
        for dest, field in FLAG_FIELDS.items()
        if getattr(args, dest, None) is not None
    }
    if overrides:
        data.update(overrides)
        source = f"{source} + command-line flags"
    return CliConfig.model_validate(data), source


def _emit(text: str, config: CliConfig) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if config.output_path is None:
        sys.stdout.write(text)
    else:
        config.output_path.write_text(text, encoding="utf-8")


def cmd_verify(config: CliConfig) -> int:
    logger = structlog.get_logger()
    report = run_suite(config.basis(), config.seed, workers=config.workers)
    text = report_to_json(report) if config.format == "json" else report_to_csv(report)
    _emit(text, config)
    failed = [r.name for r in report.results if not r.passed]
    if failed:
        logger.warning("Verification failed", failed=failed)
        return EXIT_FAILED
    return EXIT_OK


def _emit_listing(listing: CoefficientListing, config: CliConfig) -> None:
    text = listing_to_json(listing) if config.format == "json" else listing_to_csv(listing)
    _emit(text, config)


def cmd_expand(config: CliConfig, name: str) -> int:
    basis = config.basis()
    u = parse_distribution(basis, name)
    expansion = superpose(u, dirac_family(basis))
    listing = CoefficientListing(
        id=name,
        dim=basis.dim,
        order=basis.order,
        coefficients=coefficient_rows(hermite_basis(basis).multi_indices, expansion.duals),
    )
    _emit_listing(listing, config)
    return EXIT_OK


def cmd_deriv(config: CliConfig, name: str, k: int) -> int:
    """u^(k) as a superposition against delta^(k), cross-checked with the derivative operator."""
    logger = structlog.get_logger()
    if k < 0:
        raise ValueError(f"Derivative order must be non-negative, got {k}")
    basis = config.basis()
    u = parse_distribution(basis, name)

    orders = [0] * basis.dim
    orders[0] = k
    via_family = superpose(u, dirac_derivative_family(basis, orders))
    op = identity_operator(basis)
    for _ in range(k):
        op = compose(derivative_operator(basis), op)
    via_operator = apply(op, u)

    difference = scaled_error(via_family.duals, via_operator.duals)
    listing = CoefficientListing(
        id=name,
        dim=basis.dim,
        order=basis.order,
        derivative_order=k,
        coefficients=coefficient_rows(
            hermite_basis(basis).multi_indices, via_family.duals, via_operator.duals
        ),
        max_abs_difference=difference,
    )
    _emit_listing(listing, config)
    if difference > config.tol:
        logger.warning("Derivative paths disagree", difference=difference, tol=config.tol)
        return EXIT_FAILED
    return EXIT_OK


def cmd_family_eval(config: CliConfig, family: str, point: str, function: str) -> int:
    logger = structlog.get_logger()
    basis = config.basis()
    v = parse_family(basis, family)
    p = parse_point(point, basis.dim)
    phi = parse_test_function(basis, function)

    via_member = pair(member(v, p), phi)
    via_apply = evaluate(family_apply(v, phi), p)
    difference = scaled_error(via_member, via_apply)

    evaluation = FamilyEvaluation(
        family=family,
        point=p.tolist(),
        function=function,
        member_pairing=PairedValue.of(via_member),
        applied_value=PairedValue.of(via_apply),
        difference=difference,
    )
    text = (
        evaluation_to_json(evaluation) if config.format == "json" else evaluation_to_csv(evaluation)
    )
    _emit(text, config)
    if difference > config.tol:
        logger.warning("Family evaluation paths disagree", difference=difference, tol=config.tol)
        return EXIT_FAILED
    return EXIT_OK


def run(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, dispatch one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        config, config_source = resolve_config(args)
    except (ValidationError, ValueError, OSError) as e:
        configure_logging(args.log_level or "warning")
        structlog.get_logger().error("Failed to load configuration", error=str(e))
        print(f"slo: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    configure_logging(config.log_level)
    logger = structlog.get_logger()
    logger.info("slo starting", version=__version__, command=args.command, source=config_source)

    try:
        if args.command == "verify":
            code = cmd_verify(config)
        elif args.command == "expand":
            code = cmd_expand(config, args.name)
        elif args.command == "deriv":
            code = cmd_deriv(config, args.name, args.k)
        else:
            code = cmd_family_eval(config, args.family, args.point, args.function)
    except (ValueError, OSError) as e:
        # ValidationError, ConfigurationError, InputError and DomainError are ValueErrors
        logger.error("Invalid input", command=args.command, error=str(e))
        print(f"slo: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SchwartzError as e:
        logger.error("Command failed", command=args.command, error=str(e))
        print(f"slo: error: {e}", file=sys.stderr)
        return EXIT_FAILED

    logger.info("slo finished", command=args.command, exit_code=code)
    return code


def main() -> None:
    """Main entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
