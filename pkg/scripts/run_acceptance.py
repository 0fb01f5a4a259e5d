#!/usr/bin/env python3
"""Run the acceptance battery and print one line per criterion.

    python scripts/run_acceptance.py [--seed 42] [--jobs 4] [--only 1 3 5]

Exit status is 0 only if every selected criterion passes.
"""
import argparse
import sys

from curvcert import battery


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--only", type=int, nargs="*", default=None, help="criterion numbers 1-8")
    args = ap.parse_args()
    cfg = battery.BatteryConfig(seed=args.seed, jobs=args.jobs)
    results = battery.run_all(cfg, args.only)
    for r in results:
        print(r.line(), flush=True)
        for f in r.failures[:5]:
            print(f"    failing instance: {f!r}")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
