"""Command-line interface.

Exit codes: 0 member / verified, 1 non-member / violation, 2 input error,
3 resource bound (search bound exceeded or question left undecided).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .conditions import Status, classify
from .latin import NotLatinError, first_violation, format_square, parse_square
from .perm import CycleStructure, Isotopism, ParseError, StructureTriple, parse_permutation
from .search import DEFAULT_MAX_ORDER, SearchBoundError, count_delta

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _triple(args: argparse.Namespace) -> StructureTriple:
    try:
        a = CycleStructure.parse(args.alpha)
        b = CycleStructure.parse(args.beta) if args.beta else a
        c = CycleStructure.parse(args.gamma) if args.gamma else b if args.beta else a
    except (ParseError, ValueError) as exc:
        raise InputError(f"bad cycle structure: {exc}") from None
    if not a.degree == b.degree == c.degree:
        raise InputError(f"degrees differ: {a.degree}, {b.degree}, {c.degree}")
    return StructureTriple(a, b, c)


def _add_structure_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", required=True, help="row cycle structure, e.g. 3.1^2")
    p.add_argument("--beta", help="column cycle structure (default: alpha)")
    p.add_argument("--gamma", help="symbol cycle structure (default: beta)")


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        L = parse_square(Path(args.square).read_text())
    except OSError as exc:
        raise InputError(str(exc)) from None
    except NotLatinError as exc:
        raise InputError(f"{args.square}: {exc}") from None
    texts = [args.alpha, args.beta or args.alpha, args.gamma or args.beta or args.alpha]
    try:
        theta = Isotopism(*(parse_permutation(t, L.order) for t in texts))
    except (ParseError, ValueError) as exc:
        raise InputError(f"bad permutation: {exc}") from None
    v = first_violation(theta, L)
    if v is None:
        print("AUTOTOPISM")
        return EXIT_OK
    print(f"NOT AN AUTOTOPISM: {v}")
    return EXIT_NO


def cmd_classify(args: argparse.Namespace) -> int:
    t = _triple(args)
    v = classify(t, search=args.search, max_order=args.max_order)
    print(f"{t}: {v.report()}")
    return {Status.MEMBER: EXIT_OK, Status.NONMEMBER: EXIT_NO}.get(v.status, EXIT_BOUND)


def cmd_witness(args: argparse.Namespace) -> int:
    t = _triple(args)
    v = classify(t, witness=True, search=True, max_order=args.max_order)
    if v.status is Status.NONMEMBER:
        print(f"{t}: {v.report()}", file=sys.stderr)
        return EXIT_NO
    if v.status is Status.UNDECIDED:
        print(f"{t}: UNDECIDED beyond the search bound {args.max_order}", file=sys.stderr)
        return EXIT_BOUND
    text = format_square(v.witness)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"{t}: witness via {v.provenance}; theta = {v.theta}", file=sys.stderr)
    return EXIT_OK


def cmd_count(args: argparse.Namespace) -> int:
    t = _triple(args)
    try:
        res = count_delta(Isotopism.canonical(t), args.limit, max_order=args.max_order, jobs=args.jobs)
    except SearchBoundError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BOUND
    print(res)
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    from .search.table import enumerate_table, format_rows

    try:
        rows = enumerate_table(args.order, args.exhaustive, args.jobs, progress=None if args.quiet else sys.stderr)
    except SearchBoundError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BOUND
    sys.stdout.write(format_rows(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="autotopism", description="Autotopisms of Latin squares.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check an isotopism against a square file")
    p.add_argument("square", help="square file: the order, then one row per line")
    p.add_argument("alpha", help="row permutation, e.g. '(1 2 3)'")
    p.add_argument("beta", nargs="?", help="column permutation (default: alpha)")
    p.add_argument("gamma", nargs="?", help="symbol permutation (default: beta)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="decide whether a cycle-structure triple is an autotopism")
    _add_structure_args(p)
    p.add_argument("--search", action="store_true", help="settle undecided triples by exact search")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("witness", help="emit a verified square admitting the canonical isotopism")
    _add_structure_args(p)
    p.add_argument("-o", "--output", help="write the square here instead of stdout")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("count", help="number of Latin squares admitting the canonical isotopism")
    _add_structure_args(p)
    p.add_argument("--limit", type=int, help="stop after this many squares and print '>=K'")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("table", help="membership table of one order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true", help="confirm every row by witness or search (order <= 7)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--quiet", action="store_true", help="no progress on stderr")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
