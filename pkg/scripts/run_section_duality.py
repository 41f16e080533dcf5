#!/usr/bin/env python3
"""Sweep the exact and oracle two-route checks and print a summary table.

    python scripts/run_section_duality.py --bodies 100 --planes 20 --out results/prop1.json
"""
import argparse
import time

from kleekit.io import write_report
from kleekit.suites import involution_suite, oracle_prop1_suite, prop1_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bodies", type=int, default=100)
    ap.add_argument("--planes", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    report = {}
    for name, run in [
        ("exact", lambda: prop1_suite(args.bodies, args.planes, args.seed)),
        ("oracle", lambda: oracle_prop1_suite(args.planes, 360, args.seed)),
        ("involution", lambda: involution_suite(args.bodies, args.seed)),
    ]:
        t0 = time.perf_counter()
        report[name] = run()
        dt = time.perf_counter() - t0
        worst = report[name].get("max_hausdorff")
        if worst is None:
            worst = max(b["max_rel_discrepancy"] for b in report[name]["bodies"])
        print(f"{name:<11} checked={report[name]['checked']:<5} failed={report[name]['failed']:<3} "
              f"worst={worst:.2e}  {dt:.2f}s")
    if args.out:
        write_report(report, args.out)


if __name__ == "__main__":
    main()
