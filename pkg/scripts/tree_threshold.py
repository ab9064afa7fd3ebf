"""Survival curves on the 8-ary tree and their depth-scaled crossing point."""

import argparse

from planarperc import parse_config, run_experiment

ap = argparse.ArgumentParser()
ap.add_argument("--B", type=int, default=8)
ap.add_argument("--depths", default="8,10,12")
ap.add_argument("--p-grid", default="0.05:0.2:0.01")
ap.add_argument("--trials", type=int, default=2000)
ap.add_argument("--seed", type=int, default=2024)
ap.add_argument("--threads", type=int, default=1)
ap.add_argument("--out")
a = ap.parse_args()

text = f"kind=sweep\nB={a.B}\ndepths={a.depths}\np_grid={a.p_grid}\n"
cfg = parse_config(text, trials=a.trials, seed=a.seed, threads=a.threads, out=a.out)
print(run_experiment(cfg), end="")
