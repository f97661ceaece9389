"""Greedy heuristic executors: turn a target winning pattern into concrete moves.

The executor is deliberately one-ply. It wins when it can, seizes or Kongs
only when that does not push the hand further from the target, and discards
the tile that leaves the lowest shanten. Discard ties go to the larger
acceptance count, then to honor singles, then to the lowest kind index.
"""

from functools import lru_cache

import numpy as np

from . import _kernels, engine
from .engine import (CHOW_ACT, KONG_CONCEALED, KONG_EXPOSED, PASS_ACTION,
                     PONG_ACT, WIN_ACTION, Action, GameState)
from .patterns import (CHOW, INFEASIBLE, KONG, PONG, Meld, Pattern, _cap_array, _caps,
                       acceptance_count, shanten)

AbstractAction = Pattern
ABSTRACT_ACTIONS = (Pattern.NORMAL, Pattern.PONGPONG, Pattern.QIDUI)

# preference among seizes with equal resulting shanten
_SEIZE_ORDER = {KONG_EXPOSED: 0, PONG_ACT: 1, CHOW_ACT: 2}


@lru_cache(maxsize=1 << 16)
def best_discard(hand: tuple, melds: tuple, pattern: Pattern) -> int:
    """Kind to discard from a 14-tile-equivalent hand."""
    if pattern != Pattern.QIDUI and not (
            pattern == Pattern.PONGPONG and any(m.meld_type == CHOW for m in melds)):
        return _kernel_discard(hand, melds, pattern)
    h = list(hand)
    scored = []
    for k in range(len(h)):
        if not h[k]:
            continue
        h[k] -= 1
        scored.append((shanten(h, melds, pattern), k))
        h[k] += 1
    low = min(s for s, _ in scored)
    tied = [k for s, k in scored if s == low]
    if len(tied) == 1:
        return tied[0]

    def tiebreak(k):
        h[k] -= 1
        acc = acceptance_count(h, melds, pattern)
        h[k] += 1
        honor_single = k >= 9 and hand[k] == 1
        return (-acc, 0 if honor_single else 1, k)

    return min(tied, key=tiebreak)



def _kernel_discard(hand, melds, pattern):
    sh, acc = _kernels.discard_scan(np.array(hand, dtype=np.int64), _cap_array(_caps(melds)),
                                    4 - len(melds), pattern == Pattern.PONGPONG)
    low = sh.min()
    tied = [k for k in range(len(hand)) if sh[k] == low]
    if len(tied) == 1:
        return tied[0]
    return min(tied, key=lambda k: (-acc[k], 0 if k >= 9 and hand[k] == 1 else 1, k))


def _after_seize(hand, melds, action: Action, last_discard):
    h = list(hand)
    if action.tag == CHOW_ACT:
        b = action.kind
        h[last_discard] += 1
        for x in (b, b + 1, b + 2):
            h[x] -= 1
        return h, melds + (Meld(CHOW, b, True),)
    k = action.kind
    if action.tag == PONG_ACT:
        h[k] -= 2
        return h, melds + (Meld(PONG, k, True),)
    if action.tag == KONG_EXPOSED:
        h[k] -= 3
        return h, melds + (Meld(KONG, k, True),)
    h[k] -= 4
    return h, melds + (Meld(KONG, k, False),)


@lru_cache(maxsize=1 << 16)
def _claim_choice(hand: tuple, melds: tuple, pattern: Pattern, actions: tuple,
                  last_discard) -> Action:
    current = shanten(hand, melds, pattern)
    best = None
    for a in actions:
        if a.tag == CHOW_ACT and pattern != Pattern.NORMAL:
            continue
        h, m = _after_seize(hand, melds, a, last_discard)
        s = shanten(h, m, pattern)
        if s >= INFEASIBLE or s > current:
            continue
        rank = (s, _SEIZE_ORDER.get(a.tag, 0), a.kind)
        if best is None or rank < best[0]:
            best = (rank, a)
    return PASS_ACTION if best is None else best[1]


def choose_action(state: GameState, player: int, pattern: Pattern) -> Action:
    """Deterministic move for ``player`` pursuing ``pattern``; always legal."""
    state = engine.draw_if_needed(state)
    if state.to_act != player:
        raise ValueError(f"player {player} is not to act (to_act={state.to_act})")
    legal = engine.legal_actions(state)
    if WIN_ACTION in legal:
        return WIN_ACTION
    hand = state.hands[player]
    melds = state.melds[player]
    if state.phase == 2:
        return Action(engine.DISCARD, best_discard(hand, melds, Pattern(pattern)))
    claims = tuple(a for a in legal if a.tag in (CHOW_ACT, PONG_ACT, KONG_EXPOSED,
                                                 KONG_CONCEALED))
    if not claims:
        return PASS_ACTION
    return _claim_choice(hand, melds, Pattern(pattern), claims, state.last_discard)


class FixedPatternAgent:
    """Selector that always pursues one pattern."""

    def __init__(self, pattern: Pattern):
        self.pattern = Pattern(pattern)

    def __call__(self, state: GameState) -> Action:
        return choose_action(state, state.to_act, self.pattern)

    def __repr__(self):
        return f"FixedPatternAgent({self.pattern.label})"


def fixed_pattern_agent(pattern: Pattern) -> FixedPatternAgent:
    return FixedPatternAgent(pattern)
