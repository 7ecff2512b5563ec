"""Lower bound at H_q and the size of iota_{q,p}^{-1} for a frame of H_p, as N grows.

For each weight formula this prints, per truncation, the lower bound A_q, the
norm of iota_{q,p}^{-1} and the bound sqrt(B_q B_p)/A_q from its factorization
through the frame operators, then the fitted log-log slopes.

    python scripts/collapse_sweep.py --p 0 --q -1 --ns 8 16 32 64 128
"""

import argparse
import csv
import sys

from hsf.propagation import run_collapse_study
from hsf.sequences import canonical_basis


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--p", type=int, default=0)
    ap.add_argument("--q", type=int, default=-1)
    ap.add_argument("--ns", type=int, nargs="+", default=[8, 16, 32, 64, 128])
    ap.add_argument("--formulas", nargs="+", default=["linear", "shifted_quadratic", "exponential", "constant"])
    ap.add_argument("--csv", help="also write the table here")
    args = ap.parse_args()

    rows = []
    for formula in args.formulas:
        rep = run_collapse_study(formula, lambda sc: canonical_basis(sc, args.p), args.p, args.q, args.ns)
        print(f"\n{formula}: {rep.interpretation}")
        print(f"{'N':>6} {'A_q':>12} {'|iota^-1|':>12} {'bound':>12}")
        for n, a, nrm, b in zip(rep.truncations, rep.lower_bound_at_q, rep.iota_inverse_norm, rep.iota_inverse_bound):
            print(f"{n:>6} {a:>12.4e} {nrm:>12.4e} {b:>12.4e}")
            rows.append({"formula": formula, "N": n, "lower_q": a, "inverse_norm": nrm, "bound": b})
        print(f"slopes: lower {rep.lower_slope:+.3f}, norm {rep.norm_slope:+.3f}; all checks pass: {rep.passed}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
