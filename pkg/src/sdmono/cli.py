"""Command-line front end.

    sdmono verify --config run.yaml [--suite NAME]... [--seed N] [--report PATH] [--exact-mode]
    sdmono suites [--machine]

Exit codes: 0 all selected suites pass, 1 some suite fails, 2 usage error.
The JSON report goes to stdout (or ``--report``); a summary goes to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .config import SUITE_NAMES, ConfigError, load_config
from .suites import CATALOGUE, catalogue_lines, run


def build_report(cfg, results, timing: bool = True) -> dict:
    return {
        "version": __version__,
        "config": cfg.echo(),
        "passed": all(r.passed for r in results),
        "suites": {r.name: r.to_dict(timing) for r in results},
    }


def _verify(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.suite:
            cfg = cfg.with_suites(args.suite)
        if args.seed is not None:
            cfg = cfg.with_seed(args.seed)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    results = run(cfg, exact=args.exact_mode)
    report = build_report(cfg, results)
    text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        failed = [k for k, c in r.checks.items() if not c.passed]
        extra = f" (failed: {', '.join(failed)})" if failed else ""
        print(f"{status} {r.name} [{r.wall_time:.2f}s]{extra}", file=sys.stderr)
    return 0 if report["passed"] else 1


def _suites(args) -> int:
    if args.machine:
        data = {s: [{"check": c, "anchor": a} for c, a in CATALOGUE[s]] for s in SUITE_NAMES}
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print("\n".join(catalogue_lines()))
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sdmono", description="Numerical verification of the monopole metric and its symmetries.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--config", required=True, help="YAML run configuration")
    v.add_argument("--suite", action="append", choices=SUITE_NAMES, help="suite to run (repeatable; default from config)")
    v.add_argument("--seed", type=int, help="override the configured seed")
    v.add_argument("--report", help="write the JSON report here instead of stdout")
    v.add_argument("--exact-mode", action="store_true", help="add exact-arithmetic span tests")
    v.set_defaults(func=_verify)
    s = sub.add_parser("suites", help="list suites and the statements they check")
    s.add_argument("--machine", action="store_true", help="emit the catalogue as JSON")
    s.set_defaults(func=_suites)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
