#!/usr/bin/env python3
"""Estimate the linear time constant c1 and the quadratic growth
constant c2, and print their consistency cross-checks.

The growth of the cluster couples the two: mean cluster size over
(c1*n)^2 and mu_n/sqrt(n) against 1/sqrt(c2) both sit within a few
percent when the constants are estimated at comparable scales.
"""
import argparse
import sys

from fpplab.cli import main


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scales", default="50,100,200",
                    help="hit scales for c1 (default 50,100,200)")
    ap.add_argument("--n", type=int, default=20000,
                    help="additions per growth run for c2 (default 20000)")
    ap.add_argument("--replicates", type=int, default=400)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default="shape_constants.csv")
    args = ap.parse_args()
    return main(["shape", "--scales", args.scales, "--n", str(args.n),
                 "--replicates", str(args.replicates),
                 "--seed", str(args.seed), "--out", args.out])


if __name__ == "__main__":
    sys.exit(run())
