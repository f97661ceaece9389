"""Restricted best-response evaluation of a trained store.

The opponent set is the three fixed-pattern agents. For every benchmark deal
the CFR agent plays each seat against each opponent; the best opponent score
per (deal, seat) is averaged. This overstates the true exploitability only
in the opponent's favour relative to the restricted set, so the number is an
estimate, not the game-theoretic quantity.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import engine
from .abstraction import (DEFAULT_SCHEDULE, info_set_key, is_decision_point,
                          legal_abstract_actions)
from .cfr import NodeStore, average_strategy
from .patterns import PATTERNS, Pattern
from .policy import choose_action, fixed_pattern_agent
from .tiles import MASK64, Deal, SplitMix64


def parse_mode(mode: str) -> Tuple[str, Optional[int]]:
    """``"argmax"`` or ``"sample:SEED"`` -> (kind, seed)."""
    if mode == "argmax":
        return "argmax", None
    if mode.startswith("sample:"):
        seed = int(mode[len("sample:"):])
        if not 0 <= seed <= MASK64:
            raise ValueError(f"sample seed out of range: {seed}")
        return "sample", seed
    raise ValueError(f"mode must be 'argmax' or 'sample:SEED', got {mode!r}")


class EvalAgent:
    """Plays the store's average strategy at scheduled decision points.

    Between decisions the bound pattern's executor moves. Unknown keys and
    single-choice points bind Normal. Call ``reset()`` before a new game.
    """

    def __init__(self, store: NodeStore, mode: str = "argmax", seat: int = 0,
                 schedule=DEFAULT_SCHEDULE, rng_seed: Optional[int] = None):
        self.store = store
        self.kind, seed = parse_mode(mode)
        if rng_seed is not None:
            seed = rng_seed
        self._rng = SplitMix64(seed) if self.kind == "sample" else None
        self.seat = seat
        self.schedule = tuple(schedule)
        self.reset()

    def reset(self) -> None:
        self.pattern = Pattern.NORMAL
        self._events: list = []

    def choose_pattern(self, state) -> Pattern:
        mask = legal_abstract_actions(state, self.seat)
        if sum(mask) < 2:
            return Pattern.NORMAL
        node = self.store.get(info_set_key(state, self.seat))
        if node is None:
            return Pattern.NORMAL
        probs = average_strategy(node, mask)
        if self._rng is None:
            best = max(range(len(probs)), key=lambda a: (probs[a], -a))
            return Pattern(best)
        u = self._rng.next() / 2.0 ** 64
        acc = 0.0
        last = 0
        for a, p in enumerate(probs):
            if p <= 0:
                continue
            last = a
            acc += p
            if u < acc:
                return Pattern(a)
        return Pattern(last)

    def __call__(self, state) -> engine.Action:
        state = engine.draw_if_needed(state)
        if is_decision_point(state, self.seat, self.schedule):
            self.pattern = self.choose_pattern(state)
            self._events.append(("POLICY", self.seat, state.round, self.pattern))
        return choose_action(state, self.seat, self.pattern)

    def drain_events(self) -> list:
        out, self._events = self._events, []
        return out


@dataclass
class EvalReport:
    deals: int
    exploitability: float
    per_opponent_scores: Tuple[float, float, float]
    seat_breakdown: Tuple[float, float]

    def summary(self) -> str:
        opp = ", ".join(f"{p.label}={s:+.4f}" for p, s in zip(PATTERNS, self.per_opponent_scores))
        return (f"deals: {self.deals}\n"
                f"exploitability (estimate, points/game): {self.exploitability:.6f}\n"
                f"mean opponent score by opponent: {opp}\n"
                f"agent seat 0: {self.seat_breakdown[0]:.6f}  "
                f"agent seat 1: {self.seat_breakdown[1]:.6f}")


def _game_seed(mode_seed: int, deal_index: int, seat: int, opponent: int) -> int:
    return SplitMix64((mode_seed + 6 * deal_index + 3 * seat + opponent) & MASK64).next()


def play_game(deal: Deal, agent, seat: int, opponent: Pattern):
    """One game of ``agent`` in ``seat`` against a fixed-pattern opponent.
    Returns (agent utility, GameLog)."""
    if hasattr(agent, "reset"):
        agent.reset()
    opp = fixed_pattern_agent(opponent)
    selectors = (agent, opp) if seat == 0 else (opp, agent)
    utils, log = engine.playout(engine.new_game(deal), *selectors)
    return utils[seat], log


def opponent_scores(deal: Deal, agent: EvalAgent, seat: int,
                    opponents: Sequence[Pattern] = PATTERNS) -> List[int]:
    """Opponent utility against ``agent`` for each opponent pattern."""
    agent.seat = seat
    return [-play_game(deal, agent, seat, opp)[0] for opp in opponents]


def best_response_score(deal: Deal, agent: EvalAgent, seat: int,
                        opponents: Sequence[Pattern] = PATTERNS) -> int:
    """Highest opponent score on this deal with the agent in ``seat``."""
    return max(opponent_scores(deal, agent, seat, opponents))


def _score_block(args):
    store, deals, start, mode, schedule, opponents = args
    kind, mode_seed = parse_mode(mode)
    out = []
    for i, deal in enumerate(deals, start=start):
        row = []
        for seat in (0, 1):
            scores = []
            for j, opp in enumerate(opponents):
                seed = _game_seed(mode_seed, i, seat, j) if kind == "sample" else None
                agent = EvalAgent(store, mode, seat, schedule, rng_seed=seed)
                scores.append(-play_game(deal, agent, seat, opp)[0])
            row.append(scores)
        out.append(row)
    return out


def score_table(store: NodeStore, benchmark: Sequence[Deal], mode: str = "argmax",
                workers: int = 1, schedule=DEFAULT_SCHEDULE,
                opponents: Sequence[Pattern] = PATTERNS) -> list:
    """table[deal][seat][opponent] = opponent utility, in benchmark order."""
    parse_mode(mode)
    opponents = tuple(Pattern(o) for o in opponents)
    if workers <= 1 or len(benchmark) < 2:
        return _score_block((store, list(benchmark), 0, mode, schedule, opponents))
    n = len(benchmark)
    size = -(-n // workers)
    jobs = [(store, list(benchmark[i:i + size]), i, mode, schedule, opponents)
            for i in range(0, n, size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        blocks = list(pool.map(_score_block, jobs))
    return [row for block in blocks for row in block]


def evaluate(store: NodeStore, benchmark: Sequence[Deal], mode: str = "argmax",
             workers: int = 1, schedule=DEFAULT_SCHEDULE,
             opponents: Sequence[Pattern] = PATTERNS) -> EvalReport:
    """Seat-averaged mean over deals of the best opponent score.

    Per-game results are integers and are reduced in benchmark order, so the
    report does not depend on ``workers``.
    """
    if not benchmark:
        raise ValueError("benchmark is empty")
    if not opponents:
        raise ValueError("need at least one opponent")
    table = score_table(store, benchmark, mode, workers, schedule, opponents)
    n = len(table)
    seat_max = [sum(max(row[s]) for row in table) for s in (0, 1)]
    per_opp = [0.0, 0.0, 0.0]
    for j, opp in enumerate(opponents):
        per_opp[int(opp)] = sum(row[s][j] for row in table for s in (0, 1)) / (2 * n)
    return EvalReport(
        deals=n,
        exploitability=(seat_max[0] + seat_max[1]) / (2 * n),
        per_opponent_scores=tuple(per_opp),
        seat_breakdown=(seat_max[0] / n, seat_max[1] / n),
    )
