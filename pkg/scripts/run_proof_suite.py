#!/usr/bin/env python3
"""Run the proof-step suites and write the canonical JSON report.

Running it twice with the same seed gives byte-identical files.
"""
import argparse
import sys

from kleekit.io import dumps_report
from kleekit.suites import proof_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--out", default="proof_suite.json")
    args = ap.parse_args()

    rep = proof_suite(args.seed, quick=args.quick)
    for name, s in rep["suites"].items():
        print(f"{name:<13} {'pass' if s['pass'] else 'FAIL'}  "
              f"checked={s.get('checked')} failed={s.get('failed')} skipped={s.get('skipped')}")
    with open(args.out, "w") as fh:
        fh.write(dumps_report(rep))
    return 0 if rep["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
