#!/usr/bin/env python3
"""Growth restricted to a sublinear strip versus free growth.

Preset: n=200, width 2*n^0.75.  The interesting outputs are on stderr:
the KS distance between the two passage-time samples (indistinguishable
at this width) and the mean cluster-size ratio (far below 1).
"""
import argparse
import sys

from fpplab.cli import main


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--alpha", type=float, default=0.75)
    ap.add_argument("--strip-constant", type=float, default=2.0)
    ap.add_argument("--replicates", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default="strip_check.csv")
    args = ap.parse_args()
    return main(["strip", "--n", str(args.n), "--alpha", str(args.alpha),
                 "--strip-constant", str(args.strip_constant),
                 "--replicates", str(args.replicates),
                 "--seed", str(args.seed), "--out", args.out])


if __name__ == "__main__":
    sys.exit(run())
