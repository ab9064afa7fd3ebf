"""OR-projected density and per-sample domination on a doubled corridor."""

import argparse

import numpy as np

from planarperc import (AdicParams, configuration_at, domination_violations, implicit_corridor,
                        or_projection, sample_uniforms)

ap = argparse.ArgumentParser()
ap.add_argument("--N", type=int, default=8)
ap.add_argument("--samples", type=int, default=200)
ap.add_argument("--seed", type=int, default=0)
a = ap.parse_args()

g = implicit_corridor(AdicParams(2, 3, a.N), (0,) * a.N, doubled=True)
proj = or_projection(g)
print(f"# vertices={len(g)} quotient={len(proj.quotient)}")
print("p,density,expected,domination_violations")
for k, p in enumerate((0.2, 0.5, 0.8)):
    dens, bad = [], 0
    for t in range(a.samples):
        cfg = configuration_at(sample_uniforms(g, a.seed + 10_000 * k + t), p)
        dens.append(proj.project(cfg).open.mean())
        bad += len(domination_violations(proj, cfg))
    print(f"{p},{np.mean(dens):.6f},{2 * p - p * p:.6f},{bad}")
