#!/usr/bin/env python3
"""Variance of the passage time across scales, with the semi-log fit.

Default preset is the headline experiment: n in {16,...,512}, 2000
replicates per scale, window-mass diagnostic at width 0.5.  Expect about
five minutes on one core.  --quick runs a two-minute sanity version.
"""
import argparse
import sys

from fpplab.cli import main

FULL = "16,32,64,128,256,512"
QUICK = "16,32,64,128"


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true",
                    help="fewer scales and replicates (sanity run)")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default="variance_scan.csv")
    ap.add_argument("--engine", choices=("eden", "dijkstra"), default="eden")
    args = ap.parse_args()
    reps = "400" if args.quick else "2000"
    scales = QUICK if args.quick else FULL
    return main(["variance-scan", "--scales", scales, "--replicates", reps,
                 "--engine", args.engine, "--window", "0.5",
                 "--seed", str(args.seed), "--out", args.out])


if __name__ == "__main__":
    sys.exit(run())
