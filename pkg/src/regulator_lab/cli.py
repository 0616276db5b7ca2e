"""``regulator-lab`` command-line driver.

Exit codes: 0 all suites pass, 2 a suite failed, 3 configuration error,
4 precision exhaustion.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .arith import PrecisionError
from .report import build_report, load_run, to_json, write_report
from .simplicial import ModelSizeError
from .suites import SUITES, ConfigError, RunConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_PRECISION = 0, 2, 3, 4
DEFAULT_RUN_FILE = ".regulator_lab_run.json"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser, full: bool) -> None:
    p.add_argument("--N", type=int, default=2, help="matrix size, 1..3")
    p.add_argument("--p", type=int, default=5, help="odd prime")
    p.add_argument("--m", type=int, default=6, help="p-adic precision")
    if full:
        p.add_argument("--D", type=int, default=10, help="z-degree bound")
        p.add_argument("--weil-degree", type=int, default=6, help="Weil total-degree bound")
        p.add_argument("--max-level", type=int, default=4, help="cosimplicial max level")
        p.add_argument("--extended", action="store_true", help="include p_3 at N = 3")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--run-file", default=DEFAULT_RUN_FILE, help="where the run is saved")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="regulator-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    _add_common(v, True)
    v.add_argument("--json", action="store_true", help="print the JSON report")
    s = sub.add_parser("shadow", help="the n = 1 regulator shadow")
    _add_common(s, False)
    s.add_argument("--json", action="store_true", help="print the JSON report")
    r = sub.add_parser("report", help="serialize the last run")
    r.add_argument("--format", choices=("json", "tsv"), default="json")
    r.add_argument("--out", required=True)
    r.add_argument("--run-file", default=DEFAULT_RUN_FILE)
    return parser


def _config(args) -> RunConfig:
    return RunConfig(N=args.N, p=args.p, m=args.m, D=getattr(args, "D", 10),
                     weil_degree=getattr(args, "weil_degree", 6),
                     max_level=getattr(args, "max_level", 4), seed=args.seed,
                     extended=getattr(args, "extended", False)).validate()


def _run(names: List[str], args, command: str) -> int:
    try:
        cfg = _config(args)
        results = [run_suite(n, cfg) for n in names]
    except (ConfigError, ModelSizeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PrecisionError as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    report = build_report(results, cfg, command)
    for res in results:
        failed = [k for k, w in res.witnesses.items() if w["status"] == "fail"]
        extra = f" (failed: {', '.join(failed)})" if failed else ""
        print(f"{res.suite}: {res.status} [{res.timings['seconds']:.2f}s]{extra}")
    if getattr(args, "json", False):
        sys.stdout.write(to_json(report))
    try:
        write_report(report, "json", args.run_file)
    except OSError as exc:
        print(f"could not save run: {exc}", file=sys.stderr)
    return EXIT_FAIL if report["overall"] == "fail" else EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    if args.command == "verify":
        names = list(SUITES) if args.suite == "all" else [args.suite]
        return _run(names, args, f"verify {args.suite}")
    if args.command == "shadow":
        return _run(["shadow"], args, "shadow")
    report = load_run(args.run_file)
    try:
        write_report(report, args.format, args.out)
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return 1
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
