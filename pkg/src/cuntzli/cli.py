"""Command-line front end.

Exit codes: 0 pass, 1 mathematical failure, 2 usage or parse error.
Set ``CUNTZLI_VERBOSE=1`` to print every report line instead of the first.
"""

from __future__ import annotations

import argparse
import os
import sys

from .acting_system import (
    Family,
    Verdict,
    check_C1,
    check_C2,
    check_C3_2x2,
    check_C3_sufficient,
    check_effective,
)
from .document import Document, load_document
from .errors import CuntzLiError, OreSearchFailed, ParseError
from .exact_linalg import format_matrix
from .inverse_semigroup import t_mul
from .regular_rep import check_product, default_window
from .suites import SUITES
from .syntax import format_element, parse_element

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _verbose() -> bool:
    return os.environ.get("CUNTZLI_VERBOSE", "") not in ("", "0")


def _emit_report(lines, out=None) -> None:
    out = out or sys.stdout
    shown = lines if _verbose() else lines[:1]
    for line in shown:
        print(line, file=out)
    if len(lines) > len(shown):
        print(f"... {len(lines) - len(shown)} more (set CUNTZLI_VERBOSE=1)", file=out)


def cmd_check(doc: Document, out=None) -> int:
    out = out or sys.stdout
    spec = doc.system
    status = EXIT_PASS
    print(f"system: {spec.describe()}", file=out)
    c1 = check_C1(spec)
    print(f"C1: {c1.verdict.value}", file=out)
    if c1.verdict is Verdict.INCONCLUSIVE:
        print("warning: C1 search was inconclusive", file=out)
    c2 = check_C2(spec)
    indices = ", ".join(str(d) for d in c2.indices)
    print(f"C2: {'holds' if c2 else 'fails'}, index {indices}", file=out)
    for i in c2.degenerate:
        print(f"warning: generator {i} has index 1", file=out)
    c3 = check_C3_sufficient(spec)
    detail = ""
    if c3.verdict is Verdict.EIGENVALUE_OBSTRUCTION:
        detail = f" (vector {list(c3.certificate['vector'])}, signs {list(c3.certificate['signs'])})"
        status = EXIT_FAIL
    elif c3.verdict is Verdict.DILATION_CERTIFIED:
        detail = f" ({c3.certificate['mode']})"
    print(f"C3: {c3.verdict.value}{detail}", file=out)
    if (
        spec.family is Family.SINGLE_MATRIX
        and spec.n == 2
        and abs(spec.generators[0].det()) > 1
    ):
        holds = check_C3_2x2(spec.generators[0])
        print(f"C3 (2x2 eigenvalue criterion): {str(holds).lower()}", file=out)
        if not holds:
            status = EXIT_FAIL
    elif c3.verdict is Verdict.INCONCLUSIVE:
        print("warning: C3 not decided", file=out)
    for g in spec.generators:
        print(f"effective {format_matrix(g)}: {str(check_effective(g)).lower()}", file=out)
    return status


def _resolve(doc: Document, text: str) -> str:
    return doc.element(text) or text


def cmd_mul(doc: Document, left: str, right: str, out=None) -> int:
    out = out or sys.stdout
    spec = doc.system
    t1 = parse_element(_resolve(doc, left), spec)
    t2 = parse_element(_resolve(doc, right), spec)
    try:
        product = t_mul(t1, t2, spec)
    except OreSearchFailed as exc:
        a, b = exc.pair
        print(f"error: no common multiple of {format_matrix(a)} and {format_matrix(b)} up to depth {exc.depth}", file=out)
        return EXIT_FAIL
    print(format_element(product, spec), file=out)
    report = check_product(t1, t2, product, default_window(spec), spec)
    print(f"oracle: {'agree' if not report else 'DISAGREE'}", file=out)
    _emit_report(report, out)
    return EXIT_FAIL if report else EXIT_PASS


def cmd_verify(doc: Document, suite: str, seed: int, level: int, window: int, out=None) -> int:
    out = out or sys.stdout
    spec = doc.system
    kwargs = {}
    if suite == "duality" and doc.mult_table() is not None:
        kwargs["field_table"] = doc.mult_table()
    report = SUITES[suite](spec, seed=seed, level=level, window=window, **kwargs)
    print(f"suite {suite}: {len(report)} violation(s)", file=out)
    _emit_report(report, out)
    print("PASS" if not report else "FAIL", file=out)
    return EXIT_FAIL if report else EXIT_PASS


def cmd_run(doc: Document, out=None) -> int:
    """Run the document's task list; the exit code is the worst task result."""
    out = out or sys.stdout
    status = EXIT_PASS
    for task in doc.tasks:
        command = task["command"]
        args = task.get("args", [])
        print(f"== {command} {' '.join(map(str, args))}".rstrip(), file=out)
        if command == "check":
            code = cmd_check(doc, out)
        elif command == "mul":
            code = cmd_mul(doc, args[0], args[1], out)
        elif command == "verify":
            code = cmd_verify(
                doc,
                args[0],
                int(task.get("seed", 0)),
                int(task.get("level", 3)),
                int(task.get("window", 8)),
                out,
            )
        else:
            raise ParseError(f"unknown task command {command!r}")
        status = max(status, code)
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cuntzli", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check the standing conditions on P")
    p.add_argument("--spec", required=True)

    p = sub.add_parser("mul", help="multiply two elements and print the normal form")
    p.add_argument("--spec", required=True)
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("verify", help="run a seeded verification suite")
    p.add_argument("--spec", required=True)
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--level", type=int, default=3, help="word length for the H part of the window")
    p.add_argument("--window", type=int, default=8, help="coordinate bound of the window box")

    p = sub.add_parser("run", help="run the task list stored in the document")
    p.add_argument("--spec", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = load_document(args.spec)
        if args.command == "check":
            return cmd_check(doc)
        if args.command == "mul":
            return cmd_mul(doc, args.left, args.right)
        if args.command == "verify":
            if args.seed < 0 or args.seed >= 2**64:
                raise ParseError("--seed must be an unsigned 64-bit integer")
            return cmd_verify(doc, args.suite, args.seed, args.level, args.window)
        return cmd_run(doc)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CuntzLiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
