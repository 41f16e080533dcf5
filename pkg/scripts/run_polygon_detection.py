#!/usr/bin/env python3
"""Polygon verdicts on projections of the zoo, one row per body."""
import argparse

from kleekit.io import write_report
from kleekit.suites import klee_forward, zoo_polytopes, zoo_smooth


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--planes", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    rep = klee_forward(zoo_polytopes() + zoo_smooth(), args.planes, args.seed)
    print(f"{'body':<20}{'kind':<10}{'|V|':>5}{'polygons':>10}{'max est':>9}{'wrong':>7}")
    for row in rep["bodies"]:
        nv = row["n_vertices"] if row["n_vertices"] is not None else "-"
        print(f"{row['body']:<20}{row['kind']:<10}{nv:>5}{row['polygon_verdicts']:>10}"
              f"{row['max_vertex_estimate']:>9}{len(row['misclassified']):>7}")
    print("pass" if rep["pass"] else "FAIL")
    if args.out:
        write_report(rep, args.out)


if __name__ == "__main__":
    main()
