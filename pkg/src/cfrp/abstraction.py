"""Information-set features, their 20-bit key, and the abstract decision schedule.

Key layout (least significant first): round in bits 0-5, pairs 6-8,
pongs/kongs 9-11, Character tiles 12-15, Wind tiles 16-19.
"""

from typing import NamedTuple, Sequence, Tuple

from . import engine
from .engine import GameState
from .patterns import CHOW, PONG, KONG

DEFAULT_SCHEDULE = (1, 7, 13)

_FIELDS = (
    # name, shift, width, max
    ("round", 0, 6, 38),
    ("pairs", 6, 3, 6),
    ("pongs_kongs", 9, 3, 4),
    ("character_tiles", 12, 4, 14),
    ("wind_tiles", 16, 4, 14),
)


class Features(NamedTuple):
    round: int
    pairs: int
    pongs_kongs: int
    character_tiles: int
    wind_tiles: int


def extract_features(state: GameState, player: int) -> Features:
    """Features from the player's own hand, melds and the round only.

    Concealed kinds held twice count as pairs; three or four copies count as
    a pong/kong, as does every Pong or Kong meld. Counts are clamped to the
    encodable range.
    """
    state = engine.draw_if_needed(state)
    hand = state.hands[player]
    melds = state.melds[player]
    pairs = sum(1 for c in hand if c == 2)
    pongs = sum(1 for c in hand if c >= 3)
    pongs += sum(1 for m in melds if m.meld_type in (PONG, KONG))
    chars = sum(hand[:9])
    winds = sum(hand[9:13])
    for m in melds:
        for k in m.tiles():
            if k < 9:
                chars += 1
            elif k < 13:
                winds += 1
    return Features(state.round, min(pairs, 6), min(pongs, 4), min(chars, 14), min(winds, 14))


def encode(f: Features) -> int:
    r, pa, po, c, w = f
    if not (0 <= r <= 38 and 0 <= pa <= 6 and 0 <= po <= 4 and 0 <= c <= 14 and 0 <= w <= 14):
        for (name, _, _, top), value in zip(_FIELDS, f):
            if not 0 <= value <= top:
                raise ValueError(f"feature {name}={value} outside 0..{top}")
    return r | pa << 6 | po << 9 | c << 12 | w << 16


def decode(key: int) -> Features:
    return Features(key & 63, key >> 6 & 7, key >> 9 & 7, key >> 12 & 15, key >> 16 & 15)


def info_set_key(state: GameState, player: int) -> int:
    return encode(extract_features(state, player))


def legal_abstract_actions(state: GameState, player: int) -> Tuple[bool, bool, bool]:
    """Mask over (Normal, PongPongHu, QiDui)."""
    melds = state.melds[player]
    return (True,
            not any(m.meld_type == CHOW for m in melds),
            not melds)


def is_decision_point(state: GameState, player: int,
                      schedule: Sequence[int] = DEFAULT_SCHEDULE) -> bool:
    """True at the start of the player's scheduled turns (after the turn's draw)."""
    state = engine.draw_if_needed(state)
    return (state.terminal is None and state.to_act == player and state.phase == 1
            and state.fresh and state.turns[player] in schedule)
