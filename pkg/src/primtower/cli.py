"""Command-line entry point: ``primtower primitives | verify-tower | separability``."""

from __future__ import annotations

import argparse
import sys

from .io import InputError, load_b1, load_lie
from .report import UsageError, emit, primitives_report, separability_report, verify_tower_report

FORMATS = ("text", "json")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="primtower", description=__doc__)
    parser.add_argument("--format", choices=FORMATS, default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    # the format flag is accepted after the subcommand too
    def fmt(p):
        p.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)

    p = sub.add_parser("primitives", help="primitives of the tensor algebra with oracle cross-checks")
    p.add_argument("--generators", "-k", type=int, required=True)
    p.add_argument("--char", type=int, default=0)
    p.add_argument("--degree", "-D", type=int, required=True)
    fmt(p)

    p = sub.add_parser("verify-tower", help="run the tower pipeline on Lie data or a B1 object")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--lie", metavar="FILE")
    src.add_argument("--b1", metavar="FILE")
    p.add_argument("--degree", "-D", type=int, default=None)
    p.add_argument("--slack", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corrupt-bracket", action="store_true", help="change one structure constant so Jacobi fails")
    p.add_argument("--corrupt-mu0", action="store_true", help="change one mu0 value so associativity fails")
    fmt(p)

    p = sub.add_parser("separability", help="degree-one projection is a natural retraction")
    p.add_argument("--generators", "-k", type=int, required=True)
    p.add_argument("--char", type=int, default=0)
    p.add_argument("--degree", "-D", type=int, default=4)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    fmt(p)
    return parser


def run(argv=None) -> tuple[int, str]:
    """Parse ``argv`` and return ``(exit code, rendered report)``; usage errors give code 2."""
    args = _parser().parse_args(argv)
    try:
        if args.command == "primitives":
            report = primitives_report(args.generators, args.char, args.degree)
        elif args.command == "separability":
            report = separability_report(args.generators, args.char, args.degree, args.trials, args.seed)
        else:
            lie = load_lie(args.lie) if args.lie else None
            b1 = load_b1(args.b1) if args.b1 else None
            report = verify_tower_report(
                lie,
                b1,
                degree=args.degree,
                slack=args.slack,
                corrupt_bracket_=args.corrupt_bracket,
                corrupt_mu0_=args.corrupt_mu0,
                seed=args.seed,
                source=args.lie or args.b1,
            )
    except (InputError, UsageError) as exc:
        return 2, f"primtower: error: {exc}\n"
    return report.exit_code, emit(report, args.format)


def main(argv=None) -> int:
    code, text = run(argv)
    (sys.stderr if code == 2 else sys.stdout).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
