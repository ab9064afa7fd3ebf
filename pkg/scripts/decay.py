"""Two-point connectivity decay along corridor walls."""

import argparse

from planarperc import parse_config, run_experiment

ap = argparse.ArgumentParser()
ap.add_argument("--N", type=int, default=4)
ap.add_argument("--q", type=float, default=0.15)
ap.add_argument("--trials", type=int, default=20_000)
ap.add_argument("--seed", type=int, default=13)
ap.add_argument("--word", default="")
a = ap.parse_args()

text = f"kind=decay\nN={a.N}\nq={a.q}\n" + (f"word={a.word}\n" if a.word else "")
print(run_experiment(parse_config(text, trials=a.trials, seed=a.seed)), end="")
