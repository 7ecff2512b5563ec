"""Run the bundled fixture plan and print a per-study summary.

    python scripts/run_paper_suite.py [--out report.json] [--seed-override N]
"""

import argparse
import sys

from hsf.cli import read_plan_text
from hsf.config import parse_config
from hsf.runner import emit, run_plan


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="paper_suite_report.json")
    ap.add_argument("--seed-override", type=int)
    args = ap.parse_args()

    bundle = run_plan(parse_config(read_plan_text("@paper_suite")), seed_override=args.seed_override)
    for s in bundle.studies:
        n_ok = sum(c["pass"] for c in s.checks)
        status = "error: " + s.error if s.status == "error" else f"{n_ok}/{len(s.checks)} checks"
        print(f"{'ok ' if s.passed else 'BAD'} {s.name:<34} {status:<16} {s.wall_time_s * 1e3:8.1f} ms")
    code = emit(bundle, "json", args.out)
    print(f"wrote {args.out}: {bundle.summary}")
    return code


if __name__ == "__main__":
    sys.exit(main())
