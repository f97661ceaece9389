"""Deal construction for hand-built scenarios."""

from cfrp.tiles import Deal, canonical_tiles


def build_deal(hand0, hand1, wall_front=(), wall_back=()):
    """A deal with the given hands and wall ends; the rest of the wall is
    filled with the leftover tiles in ascending kind order."""
    pool = canonical_tiles()
    for k in list(hand0) + list(hand1) + list(wall_front) + list(wall_back):
        pool.remove(k)
    wall = list(wall_front) + pool + list(reversed(wall_back))
    return Deal.from_hands(hand0, hand1, wall)


def kinds(spec):
    """{kind: count} -> flat list of kinds."""
    return [k for k, c in sorted(spec.items()) for _ in range(c)]
