"""Simulate the heavy-tailed walks and watch transience emerge.

Compares a few parameter choices of the dissipative walk: near the
recurrent boundary (alpha close to 1) paths keep returning to 0, while for
smaller alpha they escape.  Run as: python3 demos/demo_walks.py
"""
from fractions import Fraction

import numpy as np

from cantorwalk.walks import WalkParams, simulate_path, transience_stats

SEED = 2024

print("one dissipative path, alpha = 3/4 (jump exponent beta = 3/2):")
params = WalkParams(kind="dissipative", steps=30, seed=SEED,
                    alpha=Fraction(3, 4))
path = simulate_path(params)
print("  states:", " ".join(str(int(s)) for s in path.states))
print()

print("the folded walk is literally |signed walk| with the same jumps:")
pf = simulate_path(WalkParams(kind="folded", steps=10, seed=SEED,
                              beta=Fraction(3, 2)))
pc = simulate_path(WalkParams(kind="cauchy_Z", steps=10, seed=SEED,
                              beta=Fraction(3, 2)))
print("  signed:", " ".join(str(int(s)) for s in pc.states))
print("  folded:", " ".join(str(int(s)) for s in pf.states))
print()

print("return-to-zero fractions after time t (400 paths, 20000 steps):")
checkpoints = [100, 1000, 10000]
for alpha in (Fraction(3, 4), Fraction(9, 10), Fraction(99, 100)):
    params = WalkParams(kind="dissipative", steps=20000, seed=SEED,
                        alpha=alpha)
    rep = transience_stats(params, 400, checkpoints)
    row = "  ".join(f"t>={t}: {rep.return_fraction[t]:.3f}"
                    for t in checkpoints)
    print(f"  alpha = {alpha}:  {row}")
print("smaller alpha -> heavier jumps -> faster escape, as expected")
print()

print("typical displacement grows superlinearly (heavy tails):")
params = WalkParams(kind="dissipative", steps=20000, seed=SEED,
                    alpha=Fraction(3, 4))
finals = [simulate_path(params, path_id=i).states[-1] for i in range(200)]
print(f"  median final state after 20000 steps: {np.median(finals):.3g}")
print(f"  90th percentile:                      {np.quantile(finals, 0.9):.3g}")
