"""Command-line interface: ``recur2code {analyze,table,scan,selftest}``.

Exit codes: 0 success, 1 usage or input error, 2 a mathematical invariant
failed (closed form disagrees with brute force).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .catalog import (
    export_records,
    iter_scan,
    load_records,
    mds_census,
    reproduce_table,
    scan_summary,
)
from .checks import run_selftest
from .codes import DEFAULT_BUDGET, analyze
from .exceptions import BudgetExceeded, FieldError, InvariantViolation
from .gf import build_field, max_field_size, parse_element, prime_power
from .recurrence import RecurrenceParams

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2

log = logging.getLogger("recur2code")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _modulus(text: str | None):
    if text is None:
        return None
    try:
        return [int(tok) for tok in text.replace("[", "").replace("]", "").split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"--modulus must be a comma-separated coefficient list, got {text!r}") from None


def _field(args):
    modulus = _modulus(args.modulus)
    if args.q is not None:
        if args.p is not None or args.k is not None:
            raise UsageError("give either --q or --p/--k, not both")
        p, k = prime_power(args.q)
    elif args.p is not None:
        p, k = args.p, args.k or 1
    else:
        raise UsageError("a field is required: --q Q or --p P [--k K]")
    return build_field(p, k, modulus)


def _add_field_args(sub):
    sub.add_argument("--q", type=int, help="field order (prime power)")
    sub.add_argument("--p", type=int, help="characteristic")
    sub.add_argument("--k", type=int, help="extension degree (default 1)")
    sub.add_argument("--modulus", help="override the Conway modulus: c0,c1,...,ck")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="recur2code", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    an = subs.add_parser("analyze", help="analyse one code C(a,b,q)")
    _add_field_args(an)
    an.add_argument("--a", required=True, help="'0', 'r^n' or '[c0,...]'")
    an.add_argument("--b", required=True, help="'0', 'r^n' or '[c0,...]' (nonzero)")
    an.add_argument("--json", action="store_true", help="emit one JSON record")
    an.add_argument("--no-brute-force", action="store_true", help="skip codeword enumeration")
    an.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    tb = subs.add_parser("table", help="reproduce a published table (1, 2 or 3)")
    tb.add_argument("id", type=int)

    sc = subs.add_parser("scan", help="analyse every (a, b) over a field")
    _add_field_args(sc)
    sc.add_argument("--filter", action="append", default=[], help="mds, one-weight, outside-classification, irreducible, distinct, repeated, ...")
    sc.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    sc.add_argument("--out", help="output file (default stdout)")
    sc.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    sc.add_argument("--resume", action="store_true", help="continue a partial --out file")
    sc.add_argument("--no-brute-force", action="store_true")
    sc.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    st = subs.add_parser("selftest", help="run the exhaustive invariant suites")
    st.add_argument("--max-q", type=int, required=True)
    return parser


def _print_report(report, field) -> None:
    d = report.to_dict()
    print(f"C({d['a']}, {d['b']}, {d['q']})  over F_{field.q}, modulus {list(field.modulus)}")
    if not field.generator_is_x:
        print(f"  note          modulus is not primitive; r = {field.coeffs(field.r)} (coefficients)")
    print(f"  case          {d['case']}")
    print(f"  N, e, K       {d['N']}, {d['e']}, {d['K']}")
    print(f"  weights       {report.distribution}")
    print(f"  d, d_dual     {d['d']}, {d['d_dual']}")
    print(f"  mds           {d['mds']}")
    print(f"  projective    {d['projective']}")
    print(f"  one-weight    {d['one_weight']}")
    if d["u"] is not None:
        print(f"  u             {d['u']}")
        print(f"  subfield      {d['subfield']}")
        print(f"  semiprimitive {d['semiprimitive']}")
    if d["flags"]:
        print(f"  flags         {', '.join(d['flags'])}")


def cmd_analyze(args) -> int:
    field = _field(args)
    a = parse_element(field, args.a)
    b = parse_element(field, args.b)
    if b.is_zero():
        raise UsageError("b must be nonzero (the recurrence x^2 - a x - b requires b != 0)")
    params = RecurrenceParams(a, b)
    report = analyze(field, params, brute_force=False if args.no_brute_force else None, budget=args.budget)
    if args.json:
        sys.stdout.write(json.dumps(report.to_dict()) + "\n")
    else:
        _print_report(report, field)
    return EXIT_OK


def cmd_table(args) -> int:
    if args.id not in (1, 2, 3):
        raise UsageError(f"table id must be 1, 2 or 3, got {args.id}")
    report = reproduce_table(args.id)
    for row in report.rows:
        fx = row.fixture
        mark = "✓" if row.ok else "✗"
        e_part = f" e={row.e} (expected {fx.e})" if fx.e is not None else f" e={row.e}"
        print(f"{mark} q={fx.q} a=r^{fx.a_exp} b=r^{fx.b_exp}: N={row.N} (expected {fx.N}){e_part} [{row.case}]")
        if not row.ok:
            print(f"    modulus used for F_{fx.q}: {list(report.moduli[fx.q])}")
    print(f"Table {args.id}: {report.summary()}")
    return EXIT_OK if report.passed else EXIT_INVARIANT


def _resume_point(path: Path, fmt: str):
    """Keep all complete a-groups of an existing output; return (records, next a)."""
    if not path.exists() or path.stat().st_size == 0:
        return [], None
    try:
        records = load_records(path, fmt)
    except (ValueError, KeyError, json.JSONDecodeError):
        # a torn final line: drop it and retry
        lines = path.read_text(encoding="utf-8").splitlines(keepends=True)
        path.write_text("".join(lines[:-1]), encoding="utf-8")
        records = load_records(path, fmt)
    if not records:
        return [], None
    last_a = records[-1].a
    kept = [r for r in records if r.a != last_a]
    return kept, last_a


def cmd_scan(args) -> int:
    field = _field(args)
    fmt = args.format
    brute = False if args.no_brute_force else None
    start_at, kept = None, []
    if args.resume:
        if not args.out:
            raise UsageError("--resume needs --out")
        kept, start_at = _resume_point(Path(args.out), fmt)
    if args.out:
        export_records(kept, fmt, args.out)
        out = open(args.out, "a", encoding="utf-8", newline="")
    else:
        out = sys.stdout
        if fmt == "csv":
            export_records([], fmt, out)
    all_records = list(kept)
    try:
        for a_text, chunk in iter_scan(
            field.q,
            args.filter,
            modulus=None if field.is_conway else list(field.modulus),
            workers=args.workers,
            brute_force=brute,
            budget=args.budget,
            start_at=start_at,
        ):
            export_records(chunk, fmt, out, header=False)
            out.flush()
            all_records.extend(chunk)
            log.info("a=%s: %d records", a_text, len(chunk))
    finally:
        if out is not sys.stdout:
            out.close()
    summary = scan_summary(all_records)
    census = mds_census(all_records)
    info = sys.stderr if out is sys.stdout else sys.stdout
    print(f"q={field.q}: {len(all_records)} records", file=info)
    for case, n in sorted(summary["case"].items()):
        print(f"  case {case}: {n}", file=info)
    for flag, n in sorted(summary["flag"].items()):
        print(f"  flag {flag}: {n}", file=info)
    if not args.filter:
        rule = "holds" if census.mds_equals_k_one else "FAILS"
        print(f"  MDS <=> K=1 {rule}; repeated-root MDS codes: {len(census.square_mds)}", file=info)
    return EXIT_OK


def cmd_selftest(args) -> int:
    if args.max_q < 2:
        raise UsageError("--max-q must be at least 2")
    if args.max_q > max_field_size():
        raise UsageError(f"--max-q exceeds the field-size bound {max_field_size()}")
    result = run_selftest(args.max_q, echo=print)
    for suite, n in sorted(result.counts.items()):
        print(f"  {suite}: {n} pairs checked")
    for failure in result.failures:
        print(f"FAIL {failure}")
    print("selftest passed" if result.ok else f"selftest FAILED ({len(result.failures)} failures)")
    return EXIT_OK if result.ok else EXIT_INVARIANT


COMMANDS = {"analyze": cmd_analyze, "table": cmd_table, "scan": cmd_scan, "selftest": cmd_selftest}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (UsageError, FieldError, BudgetExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
