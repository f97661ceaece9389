"""Tiles, seeded deals and the size of the game.

A deal is a permutation of the 64 tiles. The first 26 go to the two hands,
the rest form the wall: normal draws come off the front, Kong replacements
off the back.
"""

from cfrp.tiles import complexity_bounds, deal_initial, format_hand, kind_name, shuffle_deal

deal = shuffle_deal(42)
hand0, hand1, wall = deal_initial(deal)
print("deal seed 42")
print("  player 0:", format_hand(hand0))
print("  player 1:", format_hand(hand1))
print(f"  wall: {len(wall)} tiles")
print("  next normal draws:", [kind_name(k) for k in wall[:4]])
print("  next Kong replacements:", [kind_name(k) for k in reversed(wall[-2:])])

# same seed, same deal: the generator is fully specified
assert shuffle_deal(42).permutation == deal.permutation

deals, leaves, abstract = complexity_bounds()
print()
print(f"distinct deals (64!/(4!)^16): {deals:.3e}")
print(f"leaf bound 14^38:            {leaves:.3e}")
print(f"abstract bound 3^38:         {abstract}")
