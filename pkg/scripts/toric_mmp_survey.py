"""Run the MMP with empty boundary on every complete toric fan in a box.

Fans are enumerated over the primitive vectors of [-box, box]^2 up to the
symmetries of the square.  One CSV row per fan: ray count, Picard rank,
number of singular points, birational steps, outcome, extremal-ray lengths
seen along the way, and the fan reached at the end.

    python scripts/toric_mmp_survey.py --box 1 --max-rays 8 > survey.csv
"""

import argparse
import collections
import csv
import itertools
import math
import sys
import time

from logsurf.errors import NotComplete
from logsurf.mmp import MoriFiberSpace, run_mmp
from logsurf.surface_model import Divisor
from logsurf.toric import Fan2D, config_from_fan, current_fan

SYMMETRIES = [lambda x, y: (x, y), lambda x, y: (-y, x), lambda x, y: (-x, -y),
              lambda x, y: (y, -x), lambda x, y: (x, -y), lambda x, y: (-x, y),
              lambda x, y: (y, x), lambda x, y: (-y, -x)]


def fans_in_box(box, max_rays):
    pts = [(x, y) for x in range(-box, box + 1) for y in range(-box, box + 1)
           if (x, y) != (0, 0) and math.gcd(x, y) == 1]
    seen = set()
    for n in range(3, max_rays + 1):
        for rays in itertools.combinations(pts, n):
            key = min(tuple(sorted(g(*v) for v in rays)) for g in SYMMETRIES)
            if key in seen:
                continue
            try:
                fan = Fan2D.from_unordered(rays)
            except NotComplete:
                continue
            seen.add(key)
            yield fan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--box", type=int, default=1)
    ap.add_argument("--max-rays", type=int, default=8)
    ap.add_argument("--boundary", action="store_true", help="use half the toric boundary")
    args = ap.parse_args()

    out = csv.writer(sys.stdout)
    out.writerow(["rays", "n_rays", "rank", "singular_points", "steps", "outcome",
                  "base_dim", "ray_lengths", "final_fan", "violations"])
    tally = collections.Counter()
    t0 = time.perf_counter()
    for fan in fans_in_box(args.box, args.max_rays):
        t = config_from_fan(fan)
        delta = Divisor({c: "1/2" for c in t.universe}) if args.boundary else Divisor()
        tr = run_mmp(t.model, delta)
        lengths = sorted({str(-deg) for _, deg, _ in tr.bound_checks})
        final = current_fan(tr.final_model)
        if isinstance(tr.outcome, MoriFiberSpace):
            kind, base = "MFS", tr.outcome.base_dimension
        else:
            kind, base = "GMM", ""
        tally[(kind, base)] += 1
        out.writerow([" ".join(f"{x},{y}" for x, y in fan.rays), len(fan.rays), tr.initial_rank,
                      len(t.model.components()), tr.birational_steps, kind, base,
                      " ".join(lengths), " ".join(f"{x},{y}" for x, y in final.rays) if final else "",
                      len(tr.violations)])
    summary = ", ".join(f"{k} {b}: {n}" for (k, b), n in sorted(tally.items(), key=str))
    print(f"# {sum(tally.values())} fans in {time.perf_counter() - t0:.1f}s ({summary})",
          file=sys.stderr)


if __name__ == "__main__":
    main()
