"""Two-player Mahjong as an extensive-form game.

Each turn has three phases. Phase 0: the opponent of the last discarder may
seize the discard (Chow, Pong, Kong, Win) or Pass. Phase 1: the player has
drawn and may Kong, Win or Pass. Phase 2: the player discards.

States are immutable by contract; ``apply`` always returns a new state.
"""

from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

from .patterns import CHOW, KONG, PONG, Meld, Pattern, evaluate_win
from .tiles import COPIES, NUM_KINDS, WALL_SIZE, Deal, deal_initial, format_hand


class IllegalActionError(ValueError):
    pass


class Action(NamedTuple):
    """A concrete move. ``kind`` is the tile involved (chow base for Chow)."""
    tag: str
    kind: int = -1

    def __str__(self):
        return self.tag if self.kind < 0 else f"{self.tag}({self.kind})"


PASS = "pass"
WIN = "win"
DISCARD = "discard"
CHOW_ACT = "chow"
PONG_ACT = "pong"
KONG_EXPOSED = "kong_exposed"
KONG_CONCEALED = "kong_concealed"

PASS_ACTION = Action(PASS)
WIN_ACTION = Action(WIN)


def Discard(kind: int) -> Action:
    return Action(DISCARD, kind)


def Chow(base: int) -> Action:
    return Action(CHOW_ACT, base)


def Pong(kind: int) -> Action:
    return Action(PONG_ACT, kind)


def KongExposed(kind: int) -> Action:
    return Action(KONG_EXPOSED, kind)


def KongConcealed(kind: int) -> Action:
    return Action(KONG_CONCEALED, kind)


class Terminal(NamedTuple):
    winner: Optional[int]
    pattern: Optional[Pattern]
    points: int


DRAWN_GAME = Terminal(None, None, 0)


class GameState:
    """Full game state. ``wall[front:back]`` are the undrawn tiles.

    ``turns[p]`` counts player p's turns (front-end draws). ``fresh`` is set
    while the player to act has just started a turn and not yet acted.
    ``drawn`` is False only before player 0's opening draw.
    """

    __slots__ = ("to_act", "phase", "hands", "melds", "discards", "wall",
                 "front", "back", "last_discard", "terminal", "turns", "fresh",
                 "drawn", "seed")

    def __init__(self, to_act, phase, hands, melds, discards, wall, front, back,
                 last_discard=None, terminal=None, turns=(0, 0), fresh=False,
                 drawn=True, seed=None):
        self.to_act = to_act
        self.phase = phase
        self.hands = hands
        self.melds = melds
        self.discards = discards
        self.wall = wall
        self.front = front
        self.back = back
        self.last_discard = last_discard
        self.terminal = terminal
        self.turns = turns
        self.fresh = fresh
        self.drawn = drawn
        self.seed = seed

    def _copy(self) -> "GameState":
        return GameState(self.to_act, self.phase, self.hands, self.melds,
                         self.discards, self.wall, self.front, self.back,
                         self.last_discard, self.terminal, self.turns,
                         self.fresh, self.drawn, self.seed)

    @property
    def round(self) -> int:
        return self.front + (len(self.wall) - self.back)

    @property
    def wall_remaining(self) -> int:
        return self.back - self.front

    @property
    def remaining_wall(self) -> tuple:
        return self.wall[self.front:self.back]

    @property
    def is_terminal(self) -> bool:
        return self.terminal is not None

    def key(self) -> tuple:
        return (self.to_act, self.phase, self.hands, self.melds, self.discards,
                self.front, self.back, self.last_discard, self.terminal,
                self.turns, self.fresh, self.drawn)

    def __eq__(self, other):
        return isinstance(other, GameState) and self.key() == other.key() \
            and self.wall == other.wall

    def __hash__(self):
        return hash(self.key())

    def tile_totals(self) -> list:
        """Per-kind count over hands, melds, discards and wall."""
        totals = [0] * NUM_KINDS
        for p in (0, 1):
            for k, c in enumerate(self.hands[p]):
                totals[k] += c
            for m in self.melds[p]:
                for k in m.tiles():
                    totals[k] += 1
            for k in self.discards[p]:
                totals[k] += 1
        for k in self.remaining_wall:
            totals[k] += 1
        return totals

    def describe(self) -> str:
        lines = [f"to_act={self.to_act} phase={self.phase} round={self.round} "
                 f"wall={self.wall_remaining} last_discard={self.last_discard} "
                 f"turns={self.turns} terminal={self.terminal}"]
        for p in (0, 1):
            melds = " ".join(f"{m.meld_type}:{m.base}" for m in self.melds[p])
            lines.append(f"  p{p} hand=[{format_hand(self.hands[p])}] melds=[{melds}] "
                         f"discards={list(self.discards[p])}")
        return "\n".join(lines)

    def __repr__(self):
        return f"GameState({self.describe()})"


def new_game(deal: Deal) -> GameState:
    """Initial state: 13 tiles each, 38 in the wall, player 0 about to draw."""
    h0, h1, wall = deal_initial(deal)
    return GameState(0, 1, (tuple(h0), tuple(h1)), ((), ()), ((), ()), wall,
                     0, len(wall), turns=(0, 0), fresh=False, drawn=False,
                     seed=deal.seed)


# -- transitions ----------------------------------------------------------------

def _with_hand(hands, p, hand):
    return (hand, hands[1]) if p == 0 else (hands[0], hand)


def _draw(s: GameState, p: int, end: str, events: list) -> None:
    """Draw in place on a fresh copy; ends the game when the wall is empty."""
    if s.front >= s.back:
        s.terminal = DRAWN_GAME
        events.append(("END", "drawn"))
        return
    if end == "front":
        tile = s.wall[s.front]
        s.front += 1
    else:
        tile = s.wall[s.back - 1]
        s.back -= 1
    hand = list(s.hands[p])
    hand[tile] += 1
    s.hands = _with_hand(s.hands, p, tuple(hand))
    events.append(("DRAW", p, tile, end))


def _opening_draw(state: GameState, events: list) -> GameState:
    s = state._copy()
    s.drawn = True
    s.turns = (1, state.turns[1])
    s.fresh = True
    _draw(s, 0, "front", events)
    return s


def draw_if_needed(state: GameState, events: Optional[list] = None) -> GameState:
    """Perform player 0's opening draw if it has not happened yet."""
    if state.drawn or state.terminal is not None:
        return state
    return _opening_draw(state, events if events is not None else [])


def legal_actions(state: GameState) -> List[Action]:
    if state.terminal is not None:
        raise IllegalActionError("legal_actions on a terminal state")
    state = draw_if_needed(state)
    if state.terminal is not None:
        raise IllegalActionError("legal_actions on a terminal state")
    p = state.to_act
    hand = state.hands[p]
    melds = state.melds[p]
    if state.phase == 2:
        return [Action(DISCARD, k) for k in range(NUM_KINDS) if hand[k]]
    if state.phase == 1:
        acts = [PASS_ACTION]
        acts.extend(Action(KONG_CONCEALED, k) for k in range(NUM_KINDS) if hand[k] == 4)
        if evaluate_win(hand, melds).pattern is not None:
            acts.append(WIN_ACTION)
        return acts
    k = state.last_discard
    acts = [PASS_ACTION]
    if k < 9:
        for b in (k - 2, k - 1, k):
            if 0 <= b <= 6 and all(hand[x] for x in (b, b + 1, b + 2) if x != k):
                acts.append(Action(CHOW_ACT, b))
    if hand[k] >= 2:
        acts.append(Action(PONG_ACT, k))
    if hand[k] == 3:
        acts.append(Action(KONG_EXPOSED, k))
    with_tile = list(hand)
    with_tile[k] += 1
    if with_tile[k] <= COPIES and evaluate_win(with_tile, melds).pattern is not None:
        acts.append(WIN_ACTION)
    return acts


def _illegal(state, action, why=""):
    msg = f"illegal action {action} in phase {state.phase} for player {state.to_act}"
    if why:
        msg += f": {why}"
    return IllegalActionError(msg + "\n" + state.describe())


def step(state: GameState, action: Action) -> Tuple[GameState, list]:
    """Apply ``action`` and return (new_state, log events)."""
    events: list = []
    if state.terminal is not None:
        raise _illegal(state, action, "game is over")
    if not state.drawn:
        state = _opening_draw(state, events)
        if state.terminal is not None:
            raise _illegal(state, action, "game is over")
    if action not in legal_actions(state):
        raise _illegal(state, action)
    p = state.to_act
    s = state._copy()
    s.fresh = False
    tag = action.tag
    if state.phase == 2:
        k = action.kind
        hand = list(state.hands[p])
        hand[k] -= 1
        s.hands = _with_hand(state.hands, p, tuple(hand))
        ds = state.discards[p] + (k,)
        s.discards = _with_hand(state.discards, p, ds)
        s.last_discard = k
        s.to_act = 1 - p
        s.phase = 0
        events.append(("DISCARD", p, k))
        return s, events

    if state.phase == 1:
        if tag == PASS:
            s.phase = 2
            events.append(("PASS", p, 1))
        elif tag == WIN:
            res = evaluate_win(state.hands[p], state.melds[p])
            s.terminal = Terminal(p, res.pattern, res.points)
            events.append(("END", "win", p, res.pattern, res.points))
        else:
            k = action.kind
            hand = list(state.hands[p])
            hand[k] -= 4
            s.hands = _with_hand(state.hands, p, tuple(hand))
            s.melds = _with_hand(state.melds, p, state.melds[p] + (Meld(KONG, k, False),))
            events.append(("KONG", p, k, "concealed"))
            _draw(s, p, "back", events)
        return s, events

    # phase 0: p may seize the opponent's last discard
    k = state.last_discard
    d = 1 - p
    if tag == PASS:
        events.append(("PASS", p, 0))
        s.phase = 1
        s.last_discard = None
        s.turns = _with_hand(state.turns, p, state.turns[p] + 1)
        s.fresh = True
        _draw(s, p, "front", events)
        if s.terminal is not None:
            s.fresh = False
        return s, events
    s.discards = _with_hand(state.discards, d, state.discards[d][:-1])
    s.last_discard = None
    hand = list(state.hands[p])
    hand[k] += 1
    if tag == WIN:
        s.hands = _with_hand(state.hands, p, tuple(hand))
        res = evaluate_win(hand, state.melds[p])
        s.terminal = Terminal(p, res.pattern, res.points)
        events.append(("END", "win", p, res.pattern, res.points))
        return s, events
    if tag == CHOW_ACT:
        b = action.kind
        for x in (b, b + 1, b + 2):
            hand[x] -= 1
        meld = Meld(CHOW, b, True)
        events.append(("CHOW", p, b))
        s.phase = 2
    elif tag == PONG_ACT:
        hand[k] -= 3
        meld = Meld(PONG, k, True)
        events.append(("PONG", p, k))
        s.phase = 2
    else:
        hand[k] -= 4
        meld = Meld(KONG, k, True)
        events.append(("KONG", p, k, "exposed"))
        s.phase = 1
    s.hands = _with_hand(state.hands, p, tuple(hand))
    s.melds = _with_hand(state.melds, p, state.melds[p] + (meld,))
    if tag == KONG_EXPOSED:
        _draw(s, p, "back", events)
    return s, events


def apply(state: GameState, action: Action) -> GameState:
    """Pure transition; raises IllegalActionError for illegal actions."""
    return step(state, action)[0]


def terminal_utility(state: GameState) -> Tuple[int, int]:
    if state.terminal is None:
        raise ValueError("terminal_utility on a non-terminal state")
    w = state.terminal.winner
    if w is None:
        return (0, 0)
    pts = state.terminal.points
    return (pts, -pts) if w == 0 else (-pts, pts)


# -- playouts -------------------------------------------------------------------

Selector = Callable[[GameState], Action]


@dataclass
class GameLog:
    """Replayable record of one game; see ``cfrp.persistence`` for the text form."""
    events: list = field(default_factory=list)

    def utilities(self) -> Tuple[int, int]:
        end = self.events[-1] if self.events else None
        if not end or end[0] != "END":
            raise ValueError("log has no END event")
        if end[1] == "drawn":
            return (0, 0)
        _, _, p, _, pts = end
        return (pts, -pts) if p == 0 else (-pts, pts)


def start_events(state: GameState) -> list:
    events = []
    if state.seed is not None:
        events.append(("SEED", state.seed))
    for p in (0, 1):
        kinds = [k for k in range(NUM_KINDS) for _ in range(state.hands[p][k])]
        events.append(("HAND", p, tuple(kinds)))
    return events


def playout(state: GameState, policy0: Selector, policy1: Selector):
    """Run both selectors to the end. Returns (utilities, GameLog).

    Selectors may expose ``drain_events()`` returning extra log events (for
    example POLICY lines) produced during their last call.
    """
    log = GameLog(start_events(state))
    selectors = (policy0, policy1)
    state = draw_if_needed(state, log.events)
    while state.terminal is None:
        sel = selectors[state.to_act]
        action = sel(state)
        drain = getattr(sel, "drain_events", None)
        if drain is not None:
            log.events.extend(drain())
        try:
            state, events = step(state, action)
        except IllegalActionError as exc:
            raise IllegalActionError(f"selector for player {state.to_act} chose "
                                     f"an illegal action: {exc}") from None
        log.events.extend(events)
    return terminal_utility(state), log


ACTION_EVENTS = ("PASS", "DISCARD", "CHOW", "PONG", "KONG")


def replay_actions(deal: Deal, log: GameLog) -> GameState:
    """Re-run the actions recorded in ``log`` on ``deal``; returns the final state.

    The regenerated event stream (draws included) must match the log exactly,
    so a log that does not belong to the deal is rejected.
    """
    produced: list = []
    state = draw_if_needed(new_game(deal), produced)
    for ev in log.events:
        if ev[0] in ACTION_EVENTS or (ev[0] == "END" and ev[1] == "win"):
            state, events = step(state, _action_from_event(state, ev))
            produced.extend(events)
    recorded = [ev for ev in log.events if ev[0] not in ("SEED", "HAND", "POLICY")]
    if produced != recorded:
        for i, (a, b) in enumerate(zip(produced, recorded)):
            if a != b:
                raise ValueError(f"replay diverges at event {i}: log has {b}, game gives {a}")
        raise ValueError(f"replay length mismatch: log {len(recorded)}, game {len(produced)}")
    if state.terminal is None:
        raise ValueError("log does not reach a terminal state")
    return state


def _action_from_event(state: GameState, ev) -> Action:
    tag = ev[0]
    if tag == "PASS":
        return PASS_ACTION
    if tag == "DISCARD":
        return Action(DISCARD, ev[2])
    if tag == "CHOW":
        return Action(CHOW_ACT, ev[2])
    if tag == "PONG":
        return Action(PONG_ACT, ev[2])
    if tag == "KONG":
        return Action(KONG_CONCEALED if ev[3] == "concealed" else KONG_EXPOSED, ev[2])
    if tag == "END":
        return WIN_ACTION
    raise ValueError(f"unknown event {ev}")


def check_conservation(state: GameState) -> None:
    totals = state.tile_totals()
    if any(t != COPIES for t in totals):
        raise AssertionError(f"tile conservation violated: {totals}\n{state.describe()}")
