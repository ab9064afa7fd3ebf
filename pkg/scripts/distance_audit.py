"""Exhaustive wall-distance audit on the triangulated strip tree."""

import argparse
from collections import Counter

from planarperc import verify_distance_bounds

ap = argparse.ArgumentParser()
ap.add_argument("--M", type=int, default=2)
ap.add_argument("--d", type=int, default=3)
ap.add_argument("--maxdepth", type=int, default=6)
ap.add_argument("--margin", type=int, default=4)
a = ap.parse_args()

audit = verify_distance_bounds(a.M, a.d, a.maxdepth, a.margin)
print(f"pairs={audit.pairs} violations={len(audit.violations)} "
      f"min_slack={audit.min_slack} stable={audit.stable}")
print("case,split,violations")
by = Counter((r["case"], r["split"]) for r in audit.rows for _ in range(r["violations"]))
for case in (1, 2, 3):
    for split in (0, 1):
        print(f"{case},{split},{by.get((case, split), 0)}")
# smallest witnesses first
for case, t1, w1, t2, w2, dist in sorted(audit.violations, key=lambda v: (v[1] + v[3], v))[:10]:
    print(f"case {case}: t1={t1} w1={''.join(map(str, w1))} t2={t2} "
          f"w2={''.join(map(str, w2))} dist={dist} bound={(t1 + t2) / 2}")
