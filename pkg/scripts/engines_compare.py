#!/usr/bin/env python3
"""Cross-engine agreement of the passage-time law.

Runs the three engines at several target distances and KS-tests every
pair.  Exit code 2 if any pair is distinguishable at significance 0.001.
"""
import argparse
import sys

from fpplab.cli import main


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scales", default="5,10,20",
                    help="comma-separated target distances (default 5,10,20)")
    ap.add_argument("--replicates", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    worst = 0
    for n in args.scales.split(","):
        code = main(["engines-compare", "--n", n.strip(),
                     "--replicates", str(args.replicates),
                     "--seed", str(args.seed),
                     "--out", f"engines_compare_n{n.strip()}.csv"])
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(run())
