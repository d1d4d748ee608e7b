"""
Command-line interface.

Subcommands: decide, decompose, grid, selftest, char. Reports go to stdout,
diagnostics and logs to stderr.

Exit codes:
    0  success / tilting
    1  not tilting
    2  usage error (bad arguments, unwritable output)
    3  internal inconsistency or failed selftest
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path

from src.core.charring import LaurentChar, chi, render_character, weyl_expand
from src.core.decide import (
    Verdict,
    is_tilting_explicit,
    is_tilting_recursive,
    necessary_not_tilting,
    render_trace,
    replay_verdict,
)
from src.core.errors import CharacterOverflowError, InconsistencyError
from src.core.padic import require_prime
from src.core.tiltchar import DecompositionFailure, decompose_product, tilting_char
from src.render.grid import GridFormat, GridSpec, write_grid
from src.utils.config import configure
from src.utils.logging import get_logger, setup_logging
from src.verification.selftest import run_selftest

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_NOT_TILTING = 1
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3

DEFAULT_PRIMES = (2, 3, 5, 7, 11)


def _prime(text: str) -> int:
    try:
        return require_prime(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not a prime") from exc


def _weight(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from exc
    if value < 0:
        raise argparse.ArgumentTypeError(f"weights are nonnegative, got {value}")
    return value


def _prime_list(text: str) -> tuple[int, ...]:
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list of primes")
    return tuple(_prime(item) for item in items)


def _label(tilting: bool) -> str:
    return "TILTING" if tilting else "NOT TILTING"


def _error(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sl2-tilting",
        description="Decide when an SL2 tensor product of induced and Weyl modules is tilting",
    )
    parser.add_argument("--log-level", default=None, help="Log level (default: WARNING)")
    parser.add_argument(
        "--log-json", action="store_true", help="Emit logs as JSON lines on stderr"
    )
    parser.add_argument(
        "--max-weight", type=int, default=None, help="Largest accepted weight (default: 2^20)"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    decide = commands.add_parser("decide", help="Decide a single pair (r, s)")
    decide.add_argument("-p", type=_prime, required=True, help="Prime characteristic")
    decide.add_argument("-r", type=_weight, required=True, help="Weight of the induced module")
    decide.add_argument("-s", type=_weight, required=True, help="Weight of the Weyl module")
    decide.add_argument(
        "--method",
        choices=("explicit", "recursive", "both"),
        default="explicit",
        help="Decision procedure (default: explicit)",
    )
    decide.add_argument("--trace", action="store_true", help="Print the derivation")
    decide.set_defaults(handler=cmd_decide)

    decompose = commands.add_parser(
        "decompose", help="Split a tilting product into indecomposable tilting characters"
    )
    decompose.add_argument("-p", type=_prime, required=True, help="Prime characteristic")
    decompose.add_argument("-r", type=_weight, required=True, help="First weight")
    decompose.add_argument("-s", type=_weight, required=True, help="Second weight")
    decompose.set_defaults(handler=cmd_decompose)

    grid = commands.add_parser("grid", help="Tilting pattern over 0 <= r, s <= max")
    grid.add_argument("-p", type=_prime, required=True, help="Prime characteristic")
    grid.add_argument("--max", type=_weight, default=26, help="Largest weight (default: 26)")
    grid.add_argument(
        "--format",
        choices=[fmt.value for fmt in GridFormat],
        default=GridFormat.TSV.value,
        help="Output format (default: tsv)",
    )
    grid.add_argument("--output", type=Path, default=None, help="Output file (default: stdout)")
    grid.set_defaults(handler=cmd_grid)

    selftest = commands.add_parser("selftest", help="Run every invariant suite")
    selftest.add_argument(
        "--p-list",
        type=_prime_list,
        default=DEFAULT_PRIMES,
        help="Comma-separated primes (default: 2,3,5,7,11)",
    )
    selftest.add_argument(
        "--max", type=_weight, default=200, help="Largest weight of the sweep (default: 200)"
    )
    selftest.set_defaults(handler=cmd_selftest)

    char = commands.add_parser("char", help="Character queries: 'chi R', 'prod R S', 'tilt M'")
    char.add_argument("-p", type=_prime, required=True, help="Prime characteristic")
    char.add_argument("expr", help="Expression")
    char.set_defaults(handler=cmd_char)

    return parser


def _decide_report(verdict: Verdict, prefix: str, trace: bool) -> None:
    print(f"{prefix}{_label(verdict.tilting)}")
    if trace:
        print(render_trace(verdict))


def cmd_decide(args: argparse.Namespace) -> int:
    verdicts: list[Verdict] = []
    if args.method in ("explicit", "both"):
        verdicts.append(is_tilting_explicit(args.p, args.r, args.s))
    if args.method in ("recursive", "both"):
        verdicts.append(is_tilting_recursive(args.p, args.r, args.s))

    for verdict in verdicts:
        prefix = f"{verdict.method}: " if len(verdicts) > 1 else ""
        _decide_report(verdict, prefix, args.trace)
        if not replay_verdict(verdict):
            _error(f"{verdict.method} trace does not replay")
            return EXIT_INCONSISTENT

    if len({verdict.tilting for verdict in verdicts}) > 1:
        logger.error("deciders_disagree", p=args.p, r=args.r, s=args.s)
        _error("explicit and recursive verdicts disagree")
        return EXIT_INCONSISTENT
    return EXIT_OK if verdicts[0].tilting else EXIT_NOT_TILTING


def cmd_decompose(args: argparse.Namespace) -> int:
    p, r, s = args.p, args.r, args.s
    if not is_tilting_explicit(p, r, s).tilting:
        print("NOT TILTING")
        if necessary_not_tilting(p, r, s):
            print(
                f"necessary condition: neither {r} nor {s} is {p - 1} mod {p}, "
                f"and {r} // {p} = {r // p} differs from {s} // {p} = {s // p}"
            )
        return EXIT_NOT_TILTING

    result = decompose_product(p, r, s)
    if isinstance(result, DecompositionFailure):
        _error(
            f"greedy decomposition failed at weight {result.weight} "
            f"(multiplicity {result.multiplicity})"
        )
        return EXIT_INCONSISTENT

    expected = (r + 1) * (s + 1)
    print(json.dumps(result.as_json_dict()))
    print(f"dimension {result.dimension} = ({r}+1)({s}+1) = {expected}")
    if result.dimension != expected:
        _error(f"dimension mismatch: {result.dimension} != {expected}")
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_grid(args: argparse.Namespace) -> int:
    spec = GridSpec(p=args.p, max_weight=args.max, format=GridFormat(args.format))
    try:
        text = write_grid(spec, args.output)
    except OSError as exc:
        _error(f"cannot write {args.output}: {exc.strerror or exc}")
        return EXIT_USAGE
    if args.output is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    report = run_selftest(args.p_list, args.max)
    print(report.render())
    return EXIT_OK if report.passed else EXIT_INCONSISTENT


def parse_expression(p: int, expr: str) -> LaurentChar:
    """
    Evaluate "chi R", "prod R S" or "tilt M".

    Raises:
        ValueError: the expression cannot be parsed
    """
    kind, *operands = expr.split()
    arity = {"chi": 1, "prod": 2, "tilt": 1}
    if kind not in arity or len(operands) != arity[kind]:
        raise ValueError(f"cannot parse {expr!r}; expected 'chi R', 'prod R S' or 'tilt M'")
    values = [int(operand) for operand in operands]
    if kind == "chi":
        return chi(values[0])
    if kind == "prod":
        return chi(values[0]) * chi(values[1])
    return tilting_char(p, values[0])


def cmd_char(args: argparse.Namespace) -> int:
    if not args.expr.split():
        _error("empty expression")
        return EXIT_USAGE
    character = parse_expression(args.p, args.expr)
    print(f"{render_character(character)} = {weyl_expand(character)}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """
    Run the CLI.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code is None:
            return EXIT_OK
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        configure(
            log_level=args.log_level,
            log_format="json" if args.log_json else None,
            max_weight=args.max_weight,
        )
    except ValueError as exc:
        _error(str(exc))
        return EXIT_USAGE
    setup_logging()
    logger.debug("command_started", command=args.command)

    try:
        return int(args.handler(args))
    except InconsistencyError as exc:
        _error(str(exc))
        return EXIT_INCONSISTENT
    except (ValueError, CharacterOverflowError) as exc:
        _error(str(exc))
        return EXIT_USAGE


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())
