"""Command-line entry point.

Exit codes: 0 success, 1 property violations (``props``), 2 input error,
3 precondition violation, 4 tolerance breach in ``dual-check``.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

from .acceptance import GeneratorSet
from .duality import intrinsic_dual, sample_dual_measures
from .errors import InputError, NumericalError, RiskError
from .intrinsic import intrinsic_risk
from .io import load_acceptance, load_measures, load_scenarios
from .monetary import monetary_risk
from .properties import run_suite
from .report import build_report, render_table

log = logging.getLogger("intrinsic_risk")

EXIT_OK, EXIT_PROPS, EXIT_INPUT, EXIT_PRECONDITION, EXIT_TOLERANCE = 0, 1, 2, 3, 4


def _num(v):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        width = max(len(k) for k in payload)
        for k, v in payload.items():
            print(f"{k.ljust(width)}  {v}")


def _load(args):
    book = load_scenarios(args.scenarios, getattr(args, "meta", None))
    aset = load_acceptance(args.set, book.space, args.alpha)
    return book, aset


def cmd_intrinsic(args):
    book, aset = _load(args)
    x, s = book.position(args.position), book.asset(args.asset)
    r = intrinsic_risk(aset, s, x, tol=args.tol if args.tol is not None else 1e-10)
    _emit({"intrinsic": r.value, "method": r.method, "certificate": list(r.certificate),
           "capital": x.initial_value * r.value}, args.format)
    return EXIT_OK


def cmd_monetary(args):
    book, aset = _load(args)
    x, s = book.position(args.position), book.asset(args.asset)
    rho = monetary_risk(aset, s, x.payoff, tol=args.tol if args.tol is not None else 1e-10)
    _emit({"monetary": _num(rho.value), "finite": rho.finite,
           "certificate": [_num(v) for v in rho.certificate]}, args.format)
    return EXIT_OK


def cmd_compare(args):
    book, aset = _load(args)
    x, s = book.position(args.position), book.asset(args.asset)
    bench = book.asset(args.benchmark) if args.benchmark else s
    kwargs = {} if args.tol is None else {"tol": args.tol}
    report = build_report(aset, s, x, bench, **kwargs)
    if args.format == "json":
        print(report.to_json(indent=2))
    else:
        print(render_table(report))
    if args.figures:
        from .plotting import write_figures

        for path in write_figures(report, aset, x, s, args.figures):
            log.info("wrote %s", path)
    return EXIT_OK


def cmd_dual_check(args):
    book, aset = _load(args)
    x, s = book.position(args.position), book.asset(args.asset)
    tol = args.tol if args.tol is not None else 1e-6
    if args.measures:
        q = load_measures(args.measures, book.space)
    else:
        q = sample_dual_measures(aset, n_random=args.samples, seed=args.seed)
    primal = intrinsic_risk(aset, s, x).value
    dual = intrinsic_dual(aset, s, x, q)
    gap = abs(primal - dual)
    ok = gap <= tol
    _emit({"primal": primal, "dual": dual, "gap": gap, "tolerance": tol, "measures": int(q.shape[0]),
           "sampled": isinstance(aset, GeneratorSet) or bool(args.measures), "ok": ok}, args.format)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_props(args):
    results = run_suite(seed=args.seed, instances=args.instances, names=args.only or None)
    if args.format == "json":
        print(json.dumps([{"name": r.name, "instances": r.instances, "violations": r.violations,
                           "max_error": r.max_error, "passed": r.passed, "notes": r.notes}
                          for r in results], indent=2))
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="intrinsic-risk",
                                     description="Intrinsic and monetary risk on finite scenario spaces")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_files=True):
        p.add_argument("--format", choices=("json", "table"), default="table")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
        if with_files:
            p.add_argument("--scenarios", required=True, help="scenario JSON or CSV file")
            p.add_argument("--meta", help="sidecar JSON with initial values for CSV scenarios")
            p.add_argument("--set", required=True, help="acceptance-set JSON file")
            p.add_argument("--position", required=True)
            p.add_argument("--asset", required=True)
            p.add_argument("--alpha", type=float, default=None, help="override the set's level")

    p = sub.add_parser("intrinsic", help="intrinsic risk by bisection")
    common(p)
    p.set_defaults(func=cmd_intrinsic)

    p = sub.add_parser("monetary", help="monetary risk by bracketing and bisection")
    common(p)
    p.set_defaults(func=cmd_monetary)

    p = sub.add_parser("compare", help="full intrinsic vs traditional report")
    common(p)
    p.add_argument("--benchmark", help="asset used for Sharpe ratios (default: --asset)")
    p.add_argument("--figures", metavar="DIR", help="write payoff and segment figures here")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("dual-check", help="gap between primal bisection and dual supremum")
    common(p)
    p.add_argument("--measures", help="JSON file with user-supplied dual measures")
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(func=cmd_dual_check)

    p = sub.add_parser("props", help="run the invariant suite on seeded random instances")
    common(p, with_files=False)
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--only", nargs="*", help="restrict to these property names")
    p.set_defaults(func=cmd_props)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except RiskError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
