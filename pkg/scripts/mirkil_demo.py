#!/usr/bin/env python3
"""Sample the Mirkil cone, check the projected membership and write a plot."""
import argparse
from pathlib import Path

from kleekit.suites import mirkil_run
from kleekit.svg import mirkil_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-rays", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--svg", default="mirkil.svg")
    args = ap.parse_args()

    rep = mirkil_run(args.n_rays, args.seed)
    print(f"samples in cone      {rep['samples_in_cone']}/{rep['n_samples']}")
    print(f"projections in set   {rep['projections_in_set']}/{rep['n_samples']}")
    print(f"origin in projection {rep['origin_member']}")
    for s in rep["closedness"]["sequences"]:
        print(f"sequence {s['label']:<9} limit {s['limit']} member={s['limit_member']}")
    print(f"verdict              {rep['verdict']}")
    Path(args.svg).write_text(mirkil_svg(rep["projection_preview"]))
    print(f"wrote {args.svg}")


if __name__ == "__main__":
    main()
