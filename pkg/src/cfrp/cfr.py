"""Regret matching, a normal-form solver, and chance-sampled CFR over the
three-pattern abstract game.

Training samples one deal per iteration. On that deal the abstract game is
small: players choose a pattern only at their scheduled decision turns and
everything in between is played by the deterministic executors. The tree of
abstract decisions is built once per deal and then traversed with the usual
counterfactual updates, both players in the same pass.
"""

import logging
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from numba import njit

from . import engine
from .abstraction import (DEFAULT_SCHEDULE, encode, extract_features,
                          is_decision_point, legal_abstract_actions)
from .engine import GameState
from .patterns import Pattern
from .policy import choose_action
from .tiles import Deal, SplitMix64, shuffle_deal

log = logging.getLogger(__name__)

NUM_ACTIONS = 3


def regret_match(regret_sum: Sequence[float], legal_mask: Sequence[bool]) -> Tuple[float, ...]:
    """Strategy proportional to positive regret; uniform over legal actions
    when no regret is positive."""
    n_legal = sum(1 for m in legal_mask if m)
    if n_legal == 0:
        raise ValueError("regret_match needs at least one legal action")
    pos = [max(r, 0.0) if m else 0.0 for r, m in zip(regret_sum, legal_mask)]
    total = sum(pos)
    if total > 0:
        return tuple(x / total for x in pos)
    return tuple(1.0 / n_legal if m else 0.0 for m in legal_mask)


@dataclass
class CFRNode:
    key: int
    legal_mask: Tuple[bool, bool, bool]
    regret_sum: List[float] = field(default_factory=lambda: [0.0] * NUM_ACTIONS)
    strategy_sum: List[float] = field(default_factory=lambda: [0.0] * NUM_ACTIONS)
    visits: int = 0

    @property
    def num_legal(self) -> int:
        return sum(self.legal_mask)

    def strategy(self) -> Tuple[float, ...]:
        return regret_match(self.regret_sum, self.legal_mask)


def average_strategy(node: CFRNode, legal_mask=None) -> Tuple[float, ...]:
    """Normalized strategy sums over ``legal_mask`` (default: the node's mask);
    uniform when nothing has been accumulated."""
    if legal_mask is None:
        legal_mask = node.legal_mask
    mask = tuple(bool(m) for m in legal_mask)
    total = sum(s for s, m in zip(node.strategy_sum, mask) if m)
    if total <= 0:
        n = sum(mask)
        return tuple(1.0 / n if m else 0.0 for m in mask)
    return tuple(s / total if m else 0.0 for s, m in zip(node.strategy_sum, mask))


class NodeStore:
    """Info-set key -> CFRNode. ``snapshot()`` gives a read-only copy."""

    def __init__(self, nodes: Optional[Dict[int, CFRNode]] = None, read_only: bool = False):
        self.nodes: Dict[int, CFRNode] = dict(nodes or {})
        self.read_only = read_only

    def get(self, key: int) -> Optional[CFRNode]:
        return self.nodes.get(key)

    def get_or_create(self, key: int, legal_mask) -> CFRNode:
        """Fetch or lazily create a node. Features cannot tell an exposed Pong
        from a concealed one, so a key may meet different masks; the stored
        mask is their union and callers restrict to the mask at hand."""
        mask = tuple(bool(m) for m in legal_mask)
        node = self.nodes.get(key)
        if node is None:
            if self.read_only:
                raise RuntimeError("store is read-only")
            node = CFRNode(key, mask)
            self.nodes[key] = node
        elif any(m and not n for m, n in zip(mask, node.legal_mask)):
            if self.read_only:
                raise RuntimeError("store is read-only")
            node.legal_mask = tuple(m or n for m, n in zip(mask, node.legal_mask))
        return node

    def add(self, node: CFRNode) -> None:
        if node.key in self.nodes:
            raise ValueError(f"duplicate key {node.key}")
        self.nodes[node.key] = node

    def snapshot(self) -> "NodeStore":
        return NodeStore({k: CFRNode(n.key, n.legal_mask, list(n.regret_sum),
                                     list(n.strategy_sum), n.visits)
                          for k, n in self.nodes.items()}, read_only=True)

    def __len__(self):
        return len(self.nodes)

    def __iter__(self) -> Iterator[CFRNode]:
        for k in sorted(self.nodes):
            yield self.nodes[k]

    def __contains__(self, key):
        return key in self.nodes

    def __eq__(self, other):
        return isinstance(other, NodeStore) and self.nodes == other.nodes


# -- normal-form regret matching ------------------------------------------------

def rm_normal_form(payoff, iterations: int, rng: Optional[np.random.Generator] = None):
    """Simultaneous regret matching in a two-player matrix game.

    ``payoff`` is the row player's payoff matrix (zero-sum) or a pair
    ``(row_payoff, col_payoff)``. With ``rng`` each player samples an action
    per round and regrets use the sampled opposing action; without it the
    full expected payoffs are used. Returns the average strategies.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if isinstance(payoff, (tuple, list)) and len(payoff) == 2 and np.ndim(payoff[0]) == 2:
        a = np.asarray(payoff[0], dtype=float)
        b = np.asarray(payoff[1], dtype=float)
    else:
        a = np.asarray(payoff, dtype=float)
        b = -a
    if a.ndim != 2 or a.shape != b.shape or min(a.shape) < 1 or not np.all(np.isfinite(a)):
        raise ValueError(f"malformed payoff matrix of shape {a.shape}")
    uniforms = rng.random((iterations, 2)) if rng is not None else np.empty((0, 2))
    return _rm_loop(a, b, iterations, uniforms)


@njit(cache=True)
def _rm_strategy(regret):
    pos = np.maximum(regret, 0.0)
    total = pos.sum()
    if total > 0:
        return pos / total
    return np.full(len(regret), 1.0 / len(regret))


@njit(cache=True)
def _pick(sigma, u):
    acc = 0.0
    for i in range(len(sigma)):
        acc += sigma[i]
        if u < acc:
            return i
    return len(sigma) - 1


@njit(cache=True)
def _rm_loop(a, b, iterations, uniforms):
    n, m = a.shape
    reg_row, reg_col = np.zeros(n), np.zeros(m)
    sum_row, sum_col = np.zeros(n), np.zeros(m)
    sampled = uniforms.shape[0] > 0
    for t in range(iterations):
        s_row = _rm_strategy(reg_row)
        s_col = _rm_strategy(reg_col)
        sum_row += s_row
        sum_col += s_col
        if sampled:
            u_row = a[:, _pick(s_col, uniforms[t, 1])].copy()
            u_col = b[_pick(s_row, uniforms[t, 0]), :].copy()
        else:
            u_row = a @ s_col
            u_col = s_row @ b
        reg_row += u_row - s_row @ u_row
        reg_col += u_col - s_col @ u_col
    return sum_row / sum_row.sum(), sum_col / sum_col.sum()


def matrix_exploitability(payoff, row: np.ndarray, col: np.ndarray) -> float:
    """Sum of both players' best-response gains in a zero-sum matrix game."""
    a = np.asarray(payoff, dtype=float)
    return float((a @ col).max() - (row @ a).min())


# -- the abstract game on one deal ------------------------------------------------

@dataclass
class Leaf:
    utilities: Tuple[int, int]


@dataclass
class Decision:
    player: int
    key: int
    legal_mask: Tuple[bool, bool, bool]
    round: int
    children: Dict[int, Union["Decision", Leaf]]


def _advance(state: GameState, bound: Tuple[Pattern, Pattern], schedule):
    """Play forward until a branching decision or the end of the game.

    Returns (state, bound, branching) where ``branching`` is True when the
    player to act faces a scheduled choice with two or more legal patterns.
    """
    state = engine.draw_if_needed(state)
    while state.terminal is None:
        p = state.to_act
        if is_decision_point(state, p, schedule):
            mask = legal_abstract_actions(state, p)
            if sum(mask) >= 2:
                return state, bound, True
            bound = _rebind(bound, p, Pattern.NORMAL)
        state = engine.apply(state, choose_action(state, p, bound[p]))
    return state, bound, False


def _rebind(bound, p, pattern):
    return (pattern, bound[1]) if p == 0 else (bound[0], pattern)


def build_tree(deal: Deal, schedule=DEFAULT_SCHEDULE):
    """The tree of abstract decisions for one deal.

    Players start bound to Normal; a binding persists until the player's
    next scheduled decision. Single-choice decision points create no node.
    """
    return _build(engine.new_game(deal), (Pattern.NORMAL, Pattern.NORMAL), schedule)


def _build(state, bound, schedule):
    state, bound, branching = _advance(state, bound, schedule)
    if not branching:
        return Leaf(engine.terminal_utility(state))
    p = state.to_act
    mask = legal_abstract_actions(state, p)
    key = encode(extract_features(state, p))
    children = {}
    for a in range(NUM_ACTIONS):
        if mask[a]:
            pat = Pattern(a)
            nxt = engine.apply(state, choose_action(state, p, pat))
            children[a] = _build(nxt, _rebind(bound, p, pat), schedule)
    return Decision(p, key, mask, state.round, children)


def tree_size(tree) -> Tuple[int, int]:
    """(decision nodes, leaves)."""
    if isinstance(tree, Leaf):
        return 0, 1
    d, l = 1, 0
    for child in tree.children.values():
        cd, cl = tree_size(child)
        d += cd
        l += cl
    return d, l


def cfr_traverse(tree, store: NodeStore, reach=(1.0, 1.0)) -> Tuple[float, float]:
    """One counterfactual-regret pass over an abstract tree; updates ``store``
    and returns the expected utilities of the current strategy profile."""
    if isinstance(tree, Leaf):
        return tree.utilities
    p = tree.player
    node = store.get_or_create(tree.key, tree.legal_mask)
    sigma = regret_match(node.regret_sum, tree.legal_mask)
    values = {}
    u0 = u1 = 0.0
    for a, child in tree.children.items():
        w = sigma[a]
        if p == 0:
            v = cfr_traverse(child, store, (reach[0] * w, reach[1]))
        else:
            v = cfr_traverse(child, store, (reach[0], reach[1] * w))
        values[a] = v
        u0 += w * v[0]
        u1 += w * v[1]
    mine = u0 if p == 0 else u1
    opp_reach = reach[1 - p]
    own_reach = reach[p]
    for a, v in values.items():
        node.regret_sum[a] += opp_reach * (v[p] - mine)
        node.strategy_sum[a] += own_reach * sigma[a]
    node.visits += 1
    return (u0, u1)


@lru_cache(maxsize=4)
def _cached_tree(deal: Deal, schedule: tuple):
    return build_tree(deal, schedule)


def cfr_iteration(deal: Deal, store: NodeStore, schedule=DEFAULT_SCHEDULE,
                  tree=None) -> Tuple[float, float]:
    """Chance-sampled CFR on one deal. The abstract tree depends only on the
    deal, so repeated calls on the same deal reuse it."""
    if tree is None:
        tree = _cached_tree(deal, tuple(schedule))
    return cfr_traverse(tree, store)


# -- training loop -----------------------------------------------------------------

@dataclass
class TrainConfig:
    iterations: int
    epoch_size: int
    seed: int
    benchmark: Optional[List[Deal]] = None
    store_path: Optional[str] = None
    report_path: Optional[str] = None
    schedule: Tuple[int, ...] = DEFAULT_SCHEDULE
    eval_workers: int = 1
    eval_mode: str = "argmax"


@dataclass
class EpochReport:
    epoch: int
    iterations_total: int
    nodes: int
    exploitability: float

    def csv_row(self) -> str:
        return f"{self.epoch},{self.iterations_total},{self.nodes},{self.exploitability!r}"


class Trainer:
    """Step-wise trainer over the deal stream SplitMix64(seed) -> shuffle_deal."""

    def __init__(self, seed: int, store: Optional[NodeStore] = None,
                 schedule=DEFAULT_SCHEDULE):
        self.store = store if store is not None else NodeStore()
        self.schedule = tuple(schedule)
        self._stream = SplitMix64(seed)
        self.iterations = 0

    def next_deal(self) -> Deal:
        return shuffle_deal(self._stream.next())

    def run(self, n: int) -> None:
        for _ in range(n):
            cfr_iteration(self.next_deal(), self.store, self.schedule)
            self.iterations += 1


def train(config: TrainConfig):
    """Run CFR for ``config.iterations`` sampled deals, evaluating every epoch.

    Returns (store, reports). The store and the CSV report are rewritten
    atomically after every epoch, so an interrupted run leaves the last
    completed epoch on disk.
    """
    from .eval import evaluate
    from .persistence import save_store, write_report

    if config.iterations < 0 or config.epoch_size < 1:
        raise ValueError("iterations must be >= 0 and epoch_size >= 1")
    trainer = Trainer(config.seed, schedule=config.schedule)
    reports: List[EpochReport] = []
    epoch = 0
    while trainer.iterations < config.iterations:
        n = min(config.epoch_size, config.iterations - trainer.iterations)
        trainer.run(n)
        epoch += 1
        if config.benchmark:
            rep = evaluate(trainer.store.snapshot(), config.benchmark,
                           mode=config.eval_mode, workers=config.eval_workers,
                           schedule=config.schedule)
            expl = rep.exploitability
        else:
            expl = float("nan")
        reports.append(EpochReport(epoch, trainer.iterations, len(trainer.store), expl))
        log.info("epoch %d: %d iterations, %d nodes, exploitability %.4f",
                 epoch, trainer.iterations, len(trainer.store), expl)
        try:
            if config.store_path:
                save_store(trainer.store, config.store_path)
            if config.report_path:
                write_report(reports, config.report_path)
        except OSError as exc:
            raise OSError(f"epoch {epoch}: could not write checkpoint: {exc}") from exc
    if config.iterations == 0:
        if config.store_path:
            save_store(trainer.store, config.store_path)
        if config.report_path:
            write_report(reports, config.report_path)
    return trainer.store, reports
