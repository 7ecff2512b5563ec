"""Command line entry point: ``hsf run plan.json --out report.csv``.

Exit status is 0 when every check passes, 1 when any check fails or a study
errors, and 2 for an invalid plan or unusable arguments.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .config import STUDY_KINDS, ConfigError, parse_config
from .runner import emit, run_plan

FIXTURE_PREFIX = "@"


def _epilog() -> str:
    width = max(map(len, STUDY_KINDS))
    lines = ["study kinds:"]
    lines += [f"  {k:<{width}}  {v}" for k, v in STUDY_KINDS.items()]
    lines += [
        "",
        "bundled plans: pass @paper_suite to run the shipped fixture plan.",
        "environment: HSF_NUM_THREADS caps worker threads inside a study (0 = auto).",
    ]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsf",
        description="Run frame and semi-frame studies on a truncated Hilbert scale.",
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"hsf {__version__}")
    parser.add_argument("--list-studies", action="store_true", help="print the study kinds and exit")
    sub = parser.add_subparsers(dest="command")
    run = sub.add_parser(
        "run",
        help="execute an experiment plan",
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    run.add_argument("plan", help="path to a JSON plan, or @name for a bundled plan")
    run.add_argument("--out", help="report path (default: the plan's output.path, else stdout)")
    run.add_argument("--format", choices=("csv", "json"), help="report format (default: plan's, else csv)")
    run.add_argument("--seed-override", type=int, help="replace the plan seed; per-study seeds are re-derived")
    run.add_argument("--list-studies", action="store_true", help="print the study kinds and exit")
    return parser


def read_plan_text(source: str) -> str:
    if source.startswith(FIXTURE_PREFIX):
        name = source[len(FIXTURE_PREFIX):]
        res = resources.files("hsf").joinpath("fixtures", f"{name}.json")
        if not res.is_file():
            raise FileNotFoundError(f"no bundled plan named {name!r}")
        return res.read_text()
    return Path(source).read_text()


def _list_studies() -> int:
    for kind, text in STUDY_KINDS.items():
        print(f"{kind}\t{text}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_studies:
        return _list_studies()
    if args.command != "run":
        parser.print_help(sys.stderr)
        return 2
    try:
        plan = parse_config(read_plan_text(args.plan))
    except OSError as exc:
        print(f"hsf: cannot read plan {args.plan}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"hsf: invalid plan at {exc.pointer}: {exc.message}", file=sys.stderr)
        return 2
    if args.seed_override is not None and args.seed_override < 0:
        print("hsf: --seed-override must be non-negative", file=sys.stderr)
        return 2

    fmt = args.format or plan.output.get("format", "csv")
    out = args.out or plan.output.get("path") or "-"
    bundle = run_plan(plan, seed_override=args.seed_override)
    if out == "-":
        from .runner import bundle_to_csv, bundle_to_json

        try:
            sys.stdout.write(bundle_to_csv(bundle) if fmt == "csv" else bundle_to_json(bundle))
            sys.stdout.flush()
        except BrokenPipeError:  # e.g. piped into head
            sys.stderr.close()
        code = 0 if bundle.passed else 1
    else:
        try:
            code = emit(bundle, fmt, out)
        except OSError as exc:
            print(f"hsf: {exc}", file=sys.stderr)
            return 2
    s = bundle.summary
    print(
        f"hsf: {s['studies_passed']}/{s['studies']} studies passed, "
        f"{s['checks_passed']}/{s['checks']} checks passed",
        file=sys.stderr,
    )
    return code
