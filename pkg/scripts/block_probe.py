"""Deep-block connection probe at M=5 against (4/M + 9 eps/M)^n."""

import argparse
import itertools

from planarperc.experiments import block_connection_probe

ap = argparse.ArgumentParser()
ap.add_argument("--M", type=int, default=5)
ap.add_argument("--d", type=int, default=3)
ap.add_argument("--eps", type=float, default=0.05)
ap.add_argument("--n", type=int, default=3)
ap.add_argument("--trials", type=int, default=10_000)
ap.add_argument("--seed", type=int, default=12)
ap.add_argument("--all-words", action="store_true", help="every word instead of four")
a = ap.parse_args()

if a.all_words:
    words = list(itertools.product(range(a.M), repeat=a.n))
else:
    words = [(0,) * a.n, (a.M // 2,) * a.n, (a.M - 1,) * a.n, tuple(k % a.M for k in range(a.n))]
probe = block_connection_probe(a.M, a.d, a.eps, a.n, words, a.trials, a.seed)
print(f"# p1={probe.p1} bound={probe.bound}")
print("word,hits,trials,upper95")
for w, h, u in zip(probe.words, probe.hits, probe.upper):
    print(f"{''.join(map(str, w))},{h},{probe.trials},{u:.3e}")
print(f"# consistent={probe.consistent}")
