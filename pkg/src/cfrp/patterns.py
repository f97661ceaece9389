"""Winning-hand recognition, scoring and shanten for the three scored patterns.

Shanten convention: -1 for a complete hand, 0 for tenpai. A pattern that is
impossible for the current meld configuration returns ``INFEASIBLE``.
"""

from enum import IntEnum
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import _kernels
from .tiles import COPIES, NUM_KINDS

INFEASIBLE = 99


class Pattern(IntEnum):
    """Winning-pattern targets in canonical action order."""
    NORMAL = 0
    PONGPONG = 1
    QIDUI = 2

    @property
    def label(self) -> str:
        return ("normal", "pongpong", "qidui")[self]

    @classmethod
    def from_label(cls, label: str) -> "Pattern":
        return cls(("normal", "pongpong", "qidui").index(label))


PATTERNS = (Pattern.NORMAL, Pattern.PONGPONG, Pattern.QIDUI)

CHOW = "chow"
PONG = "pong"
KONG = "kong"


class Meld(NamedTuple):
    meld_type: str
    base: int
    exposed: bool = True

    def tiles(self) -> list:
        if self.meld_type == CHOW:
            return [self.base, self.base + 1, self.base + 2]
        if self.meld_type == PONG:
            return [self.base] * 3
        return [self.base] * 4


def make_meld(meld_type: str, base: int, exposed: bool = True) -> Meld:
    if meld_type == CHOW:
        if not 0 <= base <= 6:
            raise ValueError(f"chow base must be a Character 1-7, got {base}")
    elif meld_type not in (PONG, KONG):
        raise ValueError(f"unknown meld type {meld_type!r}")
    elif not 0 <= base < NUM_KINDS:
        raise ValueError(f"kind out of range: {base}")
    return Meld(meld_type, base, exposed)


class WinResult(NamedTuple):
    pattern: Optional[Pattern]
    points: int


NO_WIN = WinResult(None, 0)
POINTS = {Pattern.NORMAL: 1, Pattern.PONGPONG: 2, Pattern.QIDUI: 2}


def _check_arithmetic(hand: Sequence[int], melds: Sequence[Meld], total: int) -> int:
    n = sum(hand)
    expected = total - 3 * len(melds)
    if n != expected:
        raise ValueError(
            f"hand has {n} concealed tiles with {len(melds)} melds; expected {expected}")
    return n


# -- complete-hand predicates -------------------------------------------------

def _is_qidui(hand: Sequence[int], melds: Sequence[Meld]) -> bool:
    # a quad counts as two pairs
    return not melds and sum(c // 2 for c in hand) == 7


def _is_pongpong(hand: Sequence[int], melds: Sequence[Meld]) -> bool:
    if any(m.meld_type == CHOW for m in melds):
        return False
    eyes = 0
    for c in hand:
        if c == 2:
            eyes += 1
        elif c not in (0, 3):
            return False
    return eyes == 1


@lru_cache(maxsize=None)
def _decomposes(counts: tuple) -> bool:
    """True if the counts split exactly into pongs and runs."""
    i = next((k for k, c in enumerate(counts) if c), -1)
    if i < 0:
        return True
    c = list(counts)
    if c[i] >= 3:
        c[i] -= 3
        if _decomposes(tuple(c)):
            return True
        c[i] += 3
    if i <= 6 and c[i + 1] and c[i + 2]:
        c[i] -= 1
        c[i + 1] -= 1
        c[i + 2] -= 1
        if _decomposes(tuple(c)):
            return True
    return False


def _is_normal(hand: Sequence[int]) -> bool:
    counts = list(hand)
    for k in range(NUM_KINDS):
        if counts[k] >= 2:
            counts[k] -= 2
            if _decomposes(tuple(counts)):
                return True
            counts[k] += 2
    return False


def evaluate_win(hand: Sequence[int], melds: Sequence[Meld] = ()) -> WinResult:
    """Best scored pattern for a 14-tile-equivalent hand.

    Preference when several apply: QiDui, then PongPongHu, then Normal.
    Raises ValueError when the concealed count does not match the melds.
    """
    _check_arithmetic(hand, melds, 14)
    if _is_qidui(hand, melds):
        return WinResult(Pattern.QIDUI, 2)
    if _is_pongpong(hand, melds):
        return WinResult(Pattern.PONGPONG, 2)
    if _is_normal(hand):
        return WinResult(Pattern.NORMAL, 1)
    return NO_WIN


def satisfies(hand: Sequence[int], melds: Sequence[Meld], pattern: Pattern) -> bool:
    """Whether a complete hand can be read as ``pattern`` (not just its best)."""
    if pattern == Pattern.QIDUI:
        return _is_qidui(hand, melds)
    if pattern == Pattern.PONGPONG:
        return _is_pongpong(hand, melds)
    return _is_normal(hand)


# -- shanten ------------------------------------------------------------------

# Shanten is computed as the distance to the nearest complete hand: a target
# is `need` sets plus an eye with at most 4 copies per kind (fewer when the
# player's own melds hold copies). The distance is the number of target tiles
# not already in hand; shanten = distance - 1. The overlap maximization runs
# in ``_kernels``.

FULL_CAP = (COPIES,) * NUM_KINDS
_FULL_CAP_ARRAY = np.full(NUM_KINDS, COPIES, dtype=np.int64)


@lru_cache(maxsize=4096)
def _caps_of(melds: tuple) -> tuple:
    if not melds:
        return FULL_CAP
    held = meld_tile_counts(melds)
    return tuple(COPIES - x for x in held)


def _caps(melds: Sequence[Meld]) -> tuple:
    return _caps_of(tuple(melds))


def _cap_array(cap: tuple) -> np.ndarray:
    if cap is FULL_CAP:
        return _FULL_CAP_ARRAY
    return np.array(cap, dtype=np.int64)


@lru_cache(maxsize=1 << 18)
def _shanten_normal(hand: tuple, cap: tuple, need: int) -> int:
    return int(_kernels.shanten_normal(np.array(hand, dtype=np.int64), _cap_array(cap), need))


@lru_cache(maxsize=1 << 16)
def _shanten_pongpong(hand: tuple, cap: tuple, need: int) -> int:
    return int(_kernels.shanten_pongpong(np.array(hand, dtype=np.int64), _cap_array(cap), need))


def _shanten_qidui(hand: Sequence[int]) -> int:
    pairs = 0
    for c in hand:
        pairs += c // 2
    return 6 - min(pairs, 7)


def _shanten_fn(melds: Sequence[Meld], pattern: Pattern):
    """A one-argument shanten for fixed melds and pattern (None if infeasible)."""
    if pattern == Pattern.QIDUI:
        return None if melds else _shanten_qidui
    if pattern == Pattern.PONGPONG and any(m.meld_type == CHOW for m in melds):
        return None
    cap = _caps(melds)
    need = 4 - len(melds)
    fn = _shanten_pongpong if pattern == Pattern.PONGPONG else _shanten_normal
    return lambda hand: fn(tuple(hand), cap, need)


def shanten(hand: Sequence[int], melds: Sequence[Meld], pattern: Pattern) -> int:
    """Tile exchanges needed to reach tenpai for ``pattern`` (-1 = complete).

    Works on 13- or 14-tile-equivalent hands (concealed = 13 or 14 minus
    3 per meld). Returns ``INFEASIBLE`` when the melds rule the pattern out:
    any meld for QiDui, a Chow for PongPongHu.
    """
    if pattern == Pattern.QIDUI:
        if melds:
            return INFEASIBLE
        return _shanten_qidui(hand)
    need = 4 - len(melds)
    if pattern == Pattern.PONGPONG:
        if any(m.meld_type == CHOW for m in melds):
            return INFEASIBLE
        return _shanten_pongpong(tuple(hand), _caps(melds), need)
    return _shanten_normal(tuple(hand), _caps(melds), need)


def meld_tile_counts(melds: Sequence[Meld]) -> list:
    counts = [0] * NUM_KINDS
    for m in melds:
        for k in m.tiles():
            counts[k] += 1
    return counts


def acceptance_count(hand: Sequence[int], melds: Sequence[Meld], pattern: Pattern) -> int:
    """Number of distinct kinds whose draw lowers shanten for ``pattern``.

    Kinds whose four copies are already held (concealed or in own melds) are
    not drawable and are skipped. A complete hand accepts nothing.
    """
    fn = _shanten_fn(melds, pattern)
    if fn is None:
        return 0
    base = fn(hand)
    if base <= -1:
        return 0
    cap = _caps(melds)
    h = list(hand)
    n = 0
    for k in range(NUM_KINDS):
        if h[k] >= cap[k]:
            continue
        h[k] += 1
        if fn(h) < base:
            n += 1
        h[k] -= 1
    return n
