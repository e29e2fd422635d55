"""Command-line front end.

Every subcommand is a thin wrapper over a scenario kind, so
``fmcalc compose --d 2 --f 3`` and a scenario record with ``kind = compose``
produce the same report.  Exit codes: 0 success, 1 failed expectation,
2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

from .chow import DEFAULT_TABLE, IntersectionTable
from .errors import FMCalcError
from .scenarios import (
    Report,
    ScenarioError,
    evaluate,
    format_value,
    run_scenario_file,
    summarize,
)

# subcommand -> [(option, help)]; options map to scenario keys with - -> _
OPTIONS: dict[str, list[tuple[str, str]]] = {
    "equiv": [
        ("--order", "order n of the cyclic group generated by the classes"),
        ("--source", "value of the source class"),
        ("--target", "value of the target class"),
        ("--target-multiple", "target is this multiple of the source (Pic^d)"),
        ("--aut", "automorphism preset: pm1 or trivial"),
        ("--aut-list", "comma-separated unit multipliers"),
    ],
    "pic": [("--d", "degree of the Picard component"), ("--curve", "curve label")],
    "pushforward": [("--d", "degree of the universal bundle"), ("--curve", "curve label")],
    "compose": [
        ("--d", "degree of the first universal bundle"),
        ("--f", "degree of the second universal bundle"),
        ("--curve", "curve label"),
    ],
    "chow": [
        ("--d", "universal divisor degree on the pair (or first factor of the triple)"),
        ("--f", "second universal divisor degree; switches to the triple product"),
        ("--expr", "class in text form, e.g. 'G01+2*P1'"),
        ("--space", "number of factors for --expr/--monomial"),
        ("--power", "power to raise --expr to"),
        ("--monomial", "monomial to normalize, e.g. 'G01*G12*P1'"),
    ],
    "rr": [
        ("--genus", "genus of the coarse curve"),
        ("--degree", "degree of the line bundle"),
        ("--trivial", "for degree 0: is the bundle trivial (true/false)"),
    ],
    "simple-check": [
        ("--d", "moduli degree of the kernel (0 gives the degenerate family)"),
        ("--weight", "G_m-weight of the kernel"),
        ("--target-genus", "genus of the target curve"),
        ("--curve", "curve label"),
    ],
    "shadow": [
        ("--d", "moduli degree of the kernel"),
        ("--weight", "G_m-weight of the kernel"),
        ("--target-genus", "genus of the target curve"),
        ("--alpha-order", "order of the source Brauer class"),
        ("--alpha-value", "value of the source Brauer class"),
        ("--curve", "curve label"),
    ],
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit a structured JSON report")
    common.add_argument("--table", default=argparse.SUPPRESS, metavar="PATH",
                        help="JSON file overriding the intersection table")

    parser = argparse.ArgumentParser(prog="fmcalc", parents=[common],
                                     description="Fourier-Mukai calculus on gerbey genus 1 curves.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, options in OPTIONS.items():
        sp = sub.add_parser(name, parents=[common])
        for opt, help_ in options:
            sp.add_argument(opt, help=help_)
    scenario = sub.add_parser("scenario", parents=[common], help="scenario files")
    scenario_sub = scenario.add_subparsers(dest="action", required=True)
    run = scenario_sub.add_parser("run", parents=[common], help="run a scenario file")
    run.add_argument("file")
    return parser


def _print_report(r: Report, out) -> None:
    status = "PASS" if r.passed else "FAIL"
    if not r.expected and r.passed:
        status = "OK"
    print(f"[{status}] {r.id} ({r.kind})", file=out)
    width = max((len(k) for k in r.outputs), default=0)
    for k, v in sorted(r.outputs.items()):
        print(f"  {k.ljust(width)}  {format_value(v)}", file=out)
    for k, want, got in r.failures:
        print(f"  ! {k}: expected {want}, got {got}", file=out)
    for w in r.warnings:
        print(f"  warning: {w}", file=out)
    if r.note:
        print(f"  note: {r.note}", file=out)


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


def run_command(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    as_json = getattr(args, "json", False)
    table = DEFAULT_TABLE
    try:
        if hasattr(args, "table"):
            table = IntersectionTable.load(args.table)
        if args.command == "scenario":
            reports = run_scenario_file(args.file, table)
            summary = summarize(reports)
            if as_json:
                print(_dump({**summary, "reports": [r.to_dict() for r in reports]}), file=out)
            else:
                for r in reports:
                    _print_report(r, out)
                print(f"{summary['passed']}/{summary['scenarios']} scenarios passed", file=out)
            return 1 if summary["failed"] else 0
        params = {
            opt[2:].replace("-", "_"): getattr(args, opt[2:].replace("-", "_"))
            for opt, _ in OPTIONS[args.command]
            if getattr(args, opt[2:].replace("-", "_")) is not None
        }
        outputs = evaluate(args.command, params, table)
    except (FMCalcError, OSError, ValueError) as exc:
        print(f"fmcalc: error: {exc}", file=err)
        return 2
    report = Report("cli", args.command, params, outputs)
    if as_json:
        print(_dump(report.to_dict()), file=out)
    else:
        _print_report(report, out)
    return 0


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
