"""Command-line front end: ``verify``, ``classify`` and ``obstruction``.

Exit codes are 0 when everything passes, 1 when a mathematical check fails
and 2 for usage or configuration errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .clifford import BASE_KINDS, TOTAL_KINDS, CliffordSignature, classify, existence_obstruction
from .spaces import ConfigurationError
from .submersions import MODEL_NAMES, make_model
from .verify import REGISTRY, CheckSpec, default_models, default_suite, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _count(text: str) -> int:
    """Positive integer, scientific notation allowed (``2e2``)."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value.is_integer() or value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(value)


def _integer(text: str) -> int:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(value)


def _positive(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pseudohyp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run sampled identity checks")
    v.add_argument("--model", choices=MODEL_NAMES, help="single model (default: all five)")
    v.add_argument("--k", type=_count, default=2, help="quaternionic/complex dimension parameter")
    v.add_argument("--m", type=_count, help="theta: complex dimension of the base (default max(k, s))")
    v.add_argument("--s", type=_integer, default=0, help="theta: complex index of the base")
    v.add_argument("--check", action="append", choices=list(REGISTRY), metavar="NAME",
                   help=f"check to run, repeatable; one of: {', '.join(REGISTRY)}")
    v.add_argument("--all", action="store_true", help="full default suite")
    v.add_argument("--samples", type=_count,
                   help="samples per check (default: 200, fewer for costly checks)")
    v.add_argument("--tol", type=_positive, default=1e-8,
                   help="tolerance for exact identities (default 1e-8)")
    v.add_argument("--seed", type=_integer, default=42)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--output", type=Path, help="report path (default: stdout, or $REPORT_DIR)")

    c = sub.add_parser("classify", help="real Clifford algebra Cl(p, q)")
    c.add_argument("--p", type=_integer, required=True, help="generators squaring to +1")
    c.add_argument("--q", type=_integer, required=True, help="generators squaring to -1")

    o = sub.add_parser("obstruction", help="existence verdict for fibre/base dimensions")
    o.add_argument("--s", type=_integer, required=True, help="real fibre dimension")
    o.add_argument("--n", type=_integer, required=True, help="real base dimension")
    o.add_argument("--base", required=True, help=f"one of: {', '.join(BASE_KINDS)}")
    o.add_argument("--total", default="real", help=f"one of: {', '.join(TOTAL_KINDS)}")
    return parser


def _verify_specs(args) -> list:
    if args.all and (args.model or args.check):
        raise UsageError("--all cannot be combined with --model or --check")
    if not (args.all or args.model or args.check):
        raise UsageError("give --all, --model or --check")
    if args.model:
        m = max(args.k, args.s) if args.m is None else args.m
        models = [make_model(args.model, args.k, m, args.s)]
    else:
        models = default_models(args.k)
    if args.model and args.check:
        for name in args.check:
            CheckSpec(name, models[0])  # validates the name
            chk = REGISTRY[name]
            if not chk.supports(models[0]):
                raise ConfigurationError(
                    f"{chk.unsupported_reason or 'unsupported'}: {name} on {models[0].label}; "
                    f"supported models: {', '.join(m.label for m in default_models() if chk.supports(m))}"
                )
    return default_suite(args.samples, args.tol, args.seed, models, args.check)


def _destination(args) -> Path | None:
    if args.output is not None:
        return args.output
    report_dir = os.environ.get("REPORT_DIR")
    if report_dir:
        return Path(report_dir) / f"report.{'json' if args.format == 'json' else 'txt'}"
    return None


def cmd_verify(args) -> int:
    specs = _verify_specs(args)
    report = run_suite(specs, suite="default" if args.all else "custom")
    text = report.to_json(indent=2) if args.format == "json" else report.format_text()
    dest = _destination(args)
    if dest is None:
        print(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text + "\n")
        total = sum(c.passed for c in report.checks)
        print(f"{total}/{len(report.checks)} passed; report written to {dest}")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_classify(args) -> int:
    print(classify(CliffordSignature(args.p, args.q)))
    return EXIT_OK


def cmd_obstruction(args) -> int:
    verdict = existence_obstruction(args.s, args.n, args.base, args.total)
    print(f"{'Admissible' if verdict.admissible else 'Obstructed'}: {verdict.reason}")
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "classify": cmd_classify, "obstruction": cmd_obstruction}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
