"""Tile universe for two-player Mahjong: 16 kinds, 4 copies each, 64 tiles.

Kind indices:
    0-8    Characters 1-9
    9-12   Winds East, South, West, North
    13-15  Dragons Red, Green, White

Hands are plain length-16 count vectors. A deal is a permutation of the
64-tile multiset produced by a seeded SplitMix64 stream (see ``shuffle_deal``).
"""

from dataclasses import dataclass
from math import factorial
from typing import Iterator, Optional, Sequence

NUM_KINDS = 16
COPIES = 4
NUM_TILES = NUM_KINDS * COPIES
HAND_SIZE = 13
WALL_SIZE = NUM_TILES - 2 * HAND_SIZE  # 38

CHARACTERS = range(0, 9)
WINDS = range(9, 13)
DRAGONS = range(13, 16)

KIND_NAMES = (
    "1C", "2C", "3C", "4C", "5C", "6C", "7C", "8C", "9C",
    "E", "S", "W", "N",
    "Rd", "Gd", "Wd",
)

GENERATOR_VERSION = "splitmix64-fy-v1"

MASK64 = (1 << 64) - 1


def is_character(kind: int) -> bool:
    return kind < 9


def is_wind(kind: int) -> bool:
    return 9 <= kind <= 12


def is_honor(kind: int) -> bool:
    return kind >= 9


def kind_name(kind: int) -> str:
    return KIND_NAMES[kind]


def empty_hand() -> list:
    return [0] * NUM_KINDS


def hand_from_kinds(kinds: Sequence[int]) -> list:
    """Count vector for an iterable of kind indices."""
    counts = [0] * NUM_KINDS
    for k in kinds:
        counts[k] += 1
    if any(c > COPIES for c in counts):
        raise ValueError(f"more than {COPIES} copies of a kind: {counts}")
    return counts


def hand_from_dict(spec: dict) -> list:
    """Count vector from ``{kind: count}``."""
    counts = [0] * NUM_KINDS
    for k, c in spec.items():
        counts[k] = c
    return counts


def hand_to_kinds(counts: Sequence[int]) -> list:
    return [k for k in range(NUM_KINDS) for _ in range(counts[k])]


def format_hand(counts: Sequence[int]) -> str:
    return " ".join(KIND_NAMES[k] for k in hand_to_kinds(counts)) or "-"


# -- seeded generator --------------------------------------------------------

class SplitMix64:
    """SplitMix64 (Steele, Lea & Flood 2014). Portable, 64-bit, stateless apart
    from one counter, so every implementation produces the same stream."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n

    def __iter__(self) -> Iterator[int]:
        while True:
            yield self.next()


def seed_stream(seed: int, n: int) -> list:
    """First ``n`` outputs of SplitMix64(seed); used to derive per-deal seeds."""
    rng = SplitMix64(seed)
    return [rng.next() for _ in range(n)]


def canonical_tiles() -> list:
    return [k for k in range(NUM_KINDS) for _ in range(COPIES)]


@dataclass(frozen=True)
class Deal:
    permutation: tuple
    seed: Optional[int] = None

    def __post_init__(self):
        validate_permutation(self.permutation)

    def to_line(self) -> str:
        return " ".join(str(k) for k in self.permutation)

    @classmethod
    def from_line(cls, line: str, seed: Optional[int] = None) -> "Deal":
        return cls(tuple(int(tok) for tok in line.split()), seed)

    @classmethod
    def from_hands(cls, hand0: Sequence[int], hand1: Sequence[int],
                   wall: Sequence[int]) -> "Deal":
        """Build a deal from explicit tile lists (kinds), e.g. for constructed tests."""
        return cls(tuple(hand0) + tuple(hand1) + tuple(wall))


def validate_permutation(perm: Sequence[int]) -> None:
    if len(perm) != NUM_TILES:
        raise ValueError(f"deal must have {NUM_TILES} tiles, got {len(perm)}")
    counts = [0] * NUM_KINDS
    for k in perm:
        if not 0 <= k < NUM_KINDS:
            raise ValueError(f"tile kind out of range: {k}")
        counts[k] += 1
    if any(c != COPIES for c in counts):
        raise ValueError(f"deal is not the 64-tile multiset: counts={counts}")


def shuffle_deal(seed: int) -> Deal:
    """Shuffle the canonical sorted multiset with Fisher-Yates driven by
    SplitMix64(seed). For i = 63..1 swap position i with ``below(i + 1)``."""
    tiles = canonical_tiles()
    rng = SplitMix64(seed)
    for i in range(NUM_TILES - 1, 0, -1):
        j = rng.below(i + 1)
        tiles[i], tiles[j] = tiles[j], tiles[i]
    return Deal(tuple(tiles), seed & MASK64)


def deal_initial(deal: Deal):
    """Split a deal into (hand0, hand1, wall). The wall keeps deal order:
    index 0 is the normal draw end, the last element the Kong replacement end."""
    validate_permutation(deal.permutation)
    p = deal.permutation
    hand0 = hand_from_kinds(p[:HAND_SIZE])
    hand1 = hand_from_kinds(p[HAND_SIZE:2 * HAND_SIZE])
    wall = tuple(p[2 * HAND_SIZE:])
    return hand0, hand1, wall


def complexity_bounds():
    """Exact (deal_count, tree_leaves_lb, abstract_leaves) as Python ints."""
    deal_count = factorial(NUM_TILES) // factorial(COPIES) ** NUM_KINDS
    return deal_count, 14 ** WALL_SIZE, 3 ** WALL_SIZE
