"""Command-line front end.

Exit codes: 0 when every expected outcome holds, 1 on a violation, 2 on a
usage or domain error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import coulomb, lorenz, reports
from .bootstrap import DEFAULT_STOP_GAP, DomainError
from .exact import ExpressionError, Interval, parse_exponent, parse_interval, parse_rational
from .fixtures import FixtureDefinitionError, load_catalog, run_suite
from .product_laws import SLOTS, AfsSextuple, afs_check
from .reports import DEFAULT_PRECISION, FORMATS, ReportDocument

OUT_DIR_ENV = "EXPONENT_LAB_OUT_DIR"
GAUGES = ("coulomb", "lorenz")
TARGETS = ("appendix51", "appendix52", "fixtures", "afs", "all")


class UsageError(Exception):
    """Bad arguments detected after parsing; exit code 2."""


def parse_grid(text: str) -> list[Fraction]:
    """``"a:b:n"`` gives ``n + 1`` evenly spaced rationals from ``a`` to ``b``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like a:b:n, got {text!r}")
    a, b = parse_rational(parts[0]), parse_rational(parts[1])
    try:
        n = int(parts[2])
    except ValueError:
        raise UsageError(f"grid count must be an integer, got {parts[2]!r}") from None
    if n < 1:
        raise UsageError("grid count must be at least 1")
    return [a + (b - a) * Fraction(i, n) for i in range(n + 1)]


def _s_values(args) -> list[Fraction]:
    if args.grid:
        return parse_grid(args.grid)
    if args.s is None:
        raise UsageError("give --s or --grid")
    return [parse_rational(args.s)]


def cmd_iterate(args) -> ReportDocument:
    traces = []
    for s in _s_values(args):
        fn = coulomb.coulomb_trace if args.gauge == "coulomb" else lorenz.lorenz_trace
        stop = None if args.full else DEFAULT_STOP_GAP
        traces.append(reports.trace_dict(fn(s, args.k, stop), args.precision))
    inputs = {"gauge": args.gauge, "s": args.s, "grid": args.grid, "k": args.k}
    return ReportDocument(args.argv, inputs, {"kind": "traces", "traces": traces}, "ok")


def cmd_threshold(args) -> ReportDocument:
    out = []
    gauges = GAUGES if args.gauge == "both" else (args.gauge,)
    for g in gauges:
        if g == "coulomb":
            t = coulomb.coulomb_threshold(parse_rational(args.tol) if args.tol else Fraction(1, 10**12))
        else:
            t = lorenz.lorenz_threshold(parse_rational(args.tol) if args.tol else Fraction(1, 10**10))
        out.append(reports.threshold_dict(t, args.precision))
    inputs = {"gauge": args.gauge, "tol": args.tol}
    return ReportDocument(args.argv, inputs, {"kind": "thresholds", "thresholds": out}, "ok")


def _interval(args, default: Interval) -> Interval:
    return parse_interval(args.interval) if args.interval else default


def _afs_payload(text: Optional[str]) -> AfsSextuple:
    if not text:
        raise UsageError("verify afs needs a payload such as '1-s,0+,s,1/4-2e,1/4+3e,3/4+'")
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != len(SLOTS):
        raise UsageError(f"afs payload needs {len(SLOTS)} comma-separated exponents, got {len(parts)}")
    return AfsSextuple(*(parse_exponent(p).value for p in parts))


def cmd_verify(args) -> ReportDocument:
    p = args.precision
    target = args.target
    reps = []
    payload: dict = {"kind": "verification"}
    ok = True
    if target in ("appendix51", "all"):
        reps.append(coulomb.verify_appendix_51(_interval(args, coulomb.WORK_INTERVAL) if target != "all"
                                               else coulomb.WORK_INTERVAL))
    if target in ("appendix52", "all"):
        primary = _interval(args, lorenz.PRIMARY_INTERVAL) if target != "all" else lorenz.PRIMARY_INTERVAL
        reps.append(lorenz.verify_appendix_52(primary))
        reps.append(lorenz.contraction_report())
    if target == "afs":
        domain = parse_rational(args.s) if args.s else _interval(args, Interval(Fraction(3, 4), Fraction(1), True))
        reps.append(afs_check(_afs_payload(args.payload), domain))
    if target in ("fixtures", "all"):
        suite = run_suite(parse_rational(args.s) if (args.s and target == "fixtures") else None)
        payload.update({k: v for k, v in reports.suite_dict(suite, p).items() if k != "kind"})
        ok = ok and suite.ok
    ok = ok and all(r.passed for r in reps)
    payload["reports"] = [reports.report_dict(r, p) for r in reps]
    inputs = {"target": target, "interval": args.interval, "s": args.s, "payload": args.payload}
    return ReportDocument(args.argv, inputs, payload, "ok" if ok else "violation")


def cmd_fixtures(args) -> ReportDocument:
    fixtures = load_catalog(args.catalog)
    s = parse_rational(args.s) if args.s else None
    suite = run_suite(s, args.filter, fixtures)
    inputs = {"s": args.s, "filter": args.filter, "catalog": args.catalog}
    return ReportDocument(args.argv, inputs, reports.suite_dict(suite, args.precision),
                          "ok" if suite.ok else "violation")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text", help="output format (default: text)")
    common.add_argument("--out", help=f"output file; defaults to stdout, or a file in ${OUT_DIR_ENV} when set")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                        help="significant digits for decimal renderings (default: 12)")

    ap = argparse.ArgumentParser(prog="exponent-lab",
                                 description="Exact exponent bookkeeping for the Coulomb and Lorenz gauge "
                                             "regularity iterations.")
    sub = ap.add_subparsers(dest="command", required=True)

    it = sub.add_parser("iterate", parents=[common], help="exact iteration table for one gauge")
    it.add_argument("--gauge", choices=GAUGES, required=True)
    it.add_argument("--s", help="regularity, as p/q or an exact decimal")
    it.add_argument("--grid", help="a:b:n, n + 1 evenly spaced values of s")
    it.add_argument("--k", type=int, default=60, help="number of rows (default: 60)")
    it.add_argument("--full", action="store_true", help="emit all K rows even after the gap drops below 1e-15")
    it.set_defaults(func=cmd_iterate)

    th = sub.add_parser("threshold", parents=[common], help="certified regularity threshold")
    th.add_argument("--gauge", choices=GAUGES + ("both",), default="both")
    th.add_argument("--tol", help="bracket width (default: 1e-12 Coulomb, 1e-10 Lorenz)")
    th.set_defaults(func=cmd_threshold)

    ve = sub.add_parser("verify", parents=[common], help="condition reports for the lemma suites")
    ve.add_argument("target", choices=TARGETS)
    ve.add_argument("payload", nargs="?", help="for afs: six comma-separated exponents s0,s1,s2,b0,b1,b2")
    ve.add_argument("--interval", help="s-interval as a:b or with brackets such as '(3/4, 1]'")
    ve.add_argument("--s", help="check at one rational point instead of an interval")
    ve.set_defaults(func=cmd_verify)

    fx = sub.add_parser("fixtures", parents=[common], help="run the fixture catalog")
    fx.add_argument("--s", help="evaluate at one rational point instead of each fixture's interval")
    fx.add_argument("--filter", nargs="*", help="glob patterns on fixture ids")
    fx.add_argument("--catalog", help="alternative catalog file")
    fx.set_defaults(func=cmd_fixtures)
    return ap


def _destination(args) -> Optional[str]:
    if args.out:
        return args.out
    out_dir = os.environ.get(OUT_DIR_ENV)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        ext = {"json": "json", "csv": "csv", "text": "txt"}[args.format]
        return os.path.join(out_dir, f"{args.command}.{ext}")
    return None


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = ["exponent-lab"] + argv
    if args.precision < 1:
        parser.error("--precision must be positive")
    if getattr(args, "k", 1) is not None and getattr(args, "k", 1) < 1:
        parser.error("--k must be at least 1")
    try:
        doc = args.func(args)
    except (UsageError, DomainError, ExpressionError, FixtureDefinitionError, ValueError) as exc:
        print(f"exponent-lab: error: {exc}", file=sys.stderr)
        return 2
    reports.write_output(doc.render(args.format), _destination(args))
    if doc.status != "ok":
        print(f"exponent-lab: {args.command}: violation", file=sys.stderr)
    return doc.exit_code


if __name__ == "__main__":
    sys.exit(main())
