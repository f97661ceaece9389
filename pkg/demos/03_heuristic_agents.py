"""Pattern-bound heuristic agents playing each other.

Each fixed agent commits to one target pattern and plays it greedily:
win when possible, seize only when it does not hurt, discard to minimize
shanten. Here every pairing plays 300 deals from both seats.
"""

from cfrp import engine
from cfrp.patterns import Pattern
from cfrp.policy import fixed_pattern_agent
from cfrp.tiles import seed_stream, shuffle_deal

deals = [shuffle_deal(s) for s in seed_stream(1, 300)]
print("mean points for the row agent (both seats, 300 deals)")
print(" " * 10 + "".join(f"{p.label:>10s}" for p in Pattern))
for a in Pattern:
    row = []
    for b in Pattern:
        total = 0
        for d in deals:
            u, _ = engine.playout(engine.new_game(d), fixed_pattern_agent(a), fixed_pattern_agent(b))
            total += u[0]
            u, _ = engine.playout(engine.new_game(d), fixed_pattern_agent(b), fixed_pattern_agent(a))
            total += u[1]
        row.append(total / (2 * len(deals)))
    print(f"{a.label:>10s}" + "".join(f"{x:+10.3f}" for x in row))
