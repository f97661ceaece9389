"""Regret matching on small matrix games.

The average strategy of two regret-matching players approaches a Nash
equilibrium. Rock-paper-scissors goes to uniform; a biased variant
shifts the mix.
"""

import numpy as np

from cfrp.cfr import matrix_exploitability, rm_normal_form

rps = np.array([[0, -1, 1], [1, 0, -1], [-1, 1, 0]])
for n in (10, 1000, 100_000):
    # deterministic play from zero regrets sits on the fixed point at once,
    # so sample one action per player each round
    x, y = rm_normal_form(rps, n, rng=np.random.default_rng(0))
    print(f"RPS {n:>7d} iters  row={np.round(x, 4)}  exploitability={matrix_exploitability(rps, x, y):.5f}")

# the second move beats the first twice as hard
biased = np.array([[0, -2, 1], [2, 0, -1], [-1, 1, 0]])
x, y = rm_normal_form(biased, 100_000, rng=np.random.default_rng(0))
print("biased RPS, sampled:", np.round(x, 3), np.round(y, 3))
