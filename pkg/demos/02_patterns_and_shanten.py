"""Winning patterns and distance-to-ready.

Three targets: Normal (four melds and a pair, 1 point), PongPongHu (all
pongs, 2 points) and QiDui (seven pairs, 2 points). Shanten counts tile
exchanges to reach a ready hand; -1 means complete.
"""

from cfrp.patterns import Pattern, acceptance_count, evaluate_win, shanten
from cfrp.tiles import format_hand, hand_from_kinds

hands = {
    "all pongs": [0, 0, 0, 4, 4, 4, 8, 8, 8, 9, 9, 9, 13, 13],
    "seven pairs": [0, 0, 2, 2, 3, 3, 5, 5, 7, 7, 10, 10, 15, 15],
    "runs and a pair": [0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 10, 10, 12, 12],
    "no win": [0, 1, 3, 4, 6, 8, 9, 10, 11, 12, 13, 14, 15, 15],
}
for name, kinds in hands.items():
    h = hand_from_kinds(kinds)
    win = evaluate_win(h)
    label = win.pattern.label if win.pattern is not None else "-"
    print(f"{name:16s} {format_hand(h)}")
    print(f"{'':16s} win={label} points={win.points}")

print()
ready = hand_from_kinds([0, 0, 1, 1, 2, 2, 4, 4, 5, 5, 9, 9, 13])
print("13 tiles:", format_hand(ready))
for p in Pattern:
    print(f"  {p.label:9s} shanten={shanten(ready, [], p):2d} "
          f"improving kinds={acceptance_count(ready, [], p)}")
