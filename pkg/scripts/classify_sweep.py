"""Classify the canonical basis and a random redundant family across indices.

A complete finite family is always a frame, so the verdict comes from how the
optimal bounds move with N. This prints the verdict and slopes for every
index in a range and every weight formula.

    python scripts/classify_sweep.py --indices -2 -1 0 1 2 --ns 8 16 32 64
"""

import argparse
import math
import sys

from hsf.frames import classify
from hsf.sequences import canonical_basis, random_bessel


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--indices", type=int, nargs="+", default=[-2, -1, 0, 1, 2])
    ap.add_argument("--ns", type=int, nargs="+", default=[8, 16, 32, 64])
    ap.add_argument("--formulas", nargs="+", default=["linear", "shifted_quadratic"])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    families = {
        "canonical_basis": lambda sc: canonical_basis(sc, 0),
        "random_bessel(2N)": lambda sc: random_bessel(sc, 0, 2 * sc.n, args.seed),
    }
    print(f"{'formula':<18} {'family':<18} {'p':>3}  {'verdict':<17} {'slope A':>8} {'slope B':>8}")
    for formula in args.formulas:
        for label, gen in families.items():
            for p in args.indices:
                rec = classify(formula, gen, p, args.ns)
                sl = f"{rec.slope_lower:+8.3f}" if math.isfinite(rec.slope_lower) else f"{'-inf':>8}"
                print(f"{formula:<18} {label:<18} {p:>3}  {rec.verdict:<17} {sl} {rec.slope_upper:+8.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
