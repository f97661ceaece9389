import numpy as np
import pytest

import oracles
from cfrp import engine
from cfrp.abstraction import DEFAULT_SCHEDULE, info_set_key, is_decision_point, legal_abstract_actions
from cfrp.cfr import (CFRNode, Decision, Leaf, NodeStore, Trainer, TrainConfig,
                      average_strategy, build_tree, cfr_iteration, matrix_exploitability,
                      regret_match, rm_normal_form, train, tree_size)
from cfrp.patterns import Pattern
from cfrp.policy import choose_action
from cfrp.tiles import shuffle_deal

RPS = np.array([[0, -1, 1], [1, 0, -1], [-1, 1, 0]])


def test_regret_match_examples():
    assert regret_match([-0.598, 2.128, -1.356], (True,) * 3) == (0.0, 1.0, 0.0)
    assert regret_match([-1, -1, -1], (True,) * 3) == pytest.approx((1 / 3,) * 3)
    assert regret_match([2, 2, 0], (True,) * 3) == (0.5, 0.5, 0.0)


def test_regret_match_masks_illegal():
    assert regret_match([5, 1, 1], (False, True, True)) == (0.0, 0.5, 0.5)
    assert regret_match([0, 0, 0], (True, True, False)) == (0.5, 0.5, 0.0)
    with pytest.raises(ValueError):
        regret_match([1, 1, 1], (False, False, False))


def test_average_strategy_examples():
    node = CFRNode(734401, (True,) * 3, [-0.598, 2.128, -1.356], [1.359, 1.975, 0.667], 1)
    assert average_strategy(node) == pytest.approx((0.3397, 0.4936, 0.1667), abs=1e-3)
    assert average_strategy(CFRNode(0, (True,) * 3)) == pytest.approx((1 / 3,) * 3)
    assert average_strategy(CFRNode(0, (True,) * 3, strategy_sum=[5, 0, 0])) == (1, 0, 0)


def test_rm_rock_paper_scissors():
    x, y = rm_normal_form(RPS, 100_000, rng=np.random.default_rng(0))
    assert np.abs(x - 1 / 3).max() < 0.02 and np.abs(y - 1 / 3).max() < 0.02
    assert matrix_exploitability(RPS, x, y) < 0.02


def test_rm_matching_pennies():
    pennies = np.array([[1, -1], [-1, 1]])
    x, y = rm_normal_form(pennies, 100_000, rng=np.random.default_rng(1))
    assert np.abs(x - 0.5).max() < 0.02 and np.abs(y - 0.5).max() < 0.02


def test_rm_dominant_row():
    game = np.array([[2, 3], [0, 1]])
    x, _ = rm_normal_form(game, 1000)
    assert x[0] >= 0.99


def test_rm_rejects_bad_input():
    with pytest.raises(ValueError):
        rm_normal_form(RPS, 0)
    with pytest.raises(ValueError):
        rm_normal_form(np.ones(3), 10)


def test_store_widens_mask_and_rejects_duplicates():
    store = NodeStore()
    node = store.get_or_create(5, (True, False, False))
    store.get_or_create(5, (True, True, False))
    assert node.legal_mask == (True, True, False)
    with pytest.raises(ValueError):
        store.add(CFRNode(5, (True, True, True)))
    snap = store.snapshot()
    with pytest.raises(RuntimeError):
        snap.get_or_create(6, (True, True, True))


def test_cfr_iteration_zero_sum_and_sums_bounded():
    store = NodeStore()
    for seed in range(20):
        u0, u1 = cfr_iteration(shuffle_deal(seed), store)
        assert u0 + u1 == pytest.approx(0.0)
    for node in store:
        assert node.num_legal >= 2
        assert sum(node.strategy_sum) <= node.visits + 1e-9
        assert all(s >= 0 for s in node.strategy_sum)
        for a in range(3):
            if not node.legal_mask[a]:
                assert node.regret_sum[a] == 0 and node.strategy_sum[a] == 0


def _single_choice_deal():
    """A deal where some scheduled decision has only Normal legal."""
    for seed in range(400):
        s = engine.draw_if_needed(engine.new_game(shuffle_deal(seed)))
        while s.terminal is None:
            p = s.to_act
            if is_decision_point(s, p) and sum(legal_abstract_actions(s, p)) == 1:
                return shuffle_deal(seed), info_set_key(s, p)
            s = engine.apply(s, choose_action(s, p, Pattern.NORMAL))
    raise AssertionError("no single-choice decision found")


def _keys(tree):
    if isinstance(tree, Leaf):
        return set()
    out = {tree.key}
    for c in tree.children.values():
        out |= _keys(c)
    return out


def test_single_choice_points_create_no_node():
    deal, key = _single_choice_deal()
    store = NodeStore()
    cfr_iteration(deal, store)
    if key not in _keys(build_tree(deal)):
        assert key not in store


def test_no_branching_means_plain_playout():
    # a schedule nobody reaches: the tree is a single leaf
    deal = shuffle_deal(3)
    store = NodeStore()
    u = cfr_iteration(deal, store, schedule=(40,))
    agent = lambda s: choose_action(s, s.to_act, Pattern.NORMAL)
    expected, _ = engine.playout(engine.new_game(deal), agent, agent)
    assert u == expected and len(store) == 0


def _dominant_qidui_deal():
    """Seed whose root QiDui choice beats the other patterns against every
    opponent plan (checked by exhaustive enumeration)."""
    for seed in range(300):
        deal = shuffle_deal(seed)
        tree = build_tree(deal)
        if not isinstance(tree, Decision) or tree_size(tree)[0] > 8:
            continue
        m, s0, _ = oracles.abstract_matrix(deal, DEFAULT_SCHEDULE)
        rows = {a: [i for i, s in enumerate(s0) if s[tree.key] == a] for a in range(3)}
        best_q = m[rows[2]].max(axis=0)
        worst_q = m[rows[2]].min(axis=0)
        others = np.vstack([m[rows[0]], m[rows[1]]])
        if len({s[tree.key] for s in s0}) == 3 and (worst_q > others.max(axis=0)).all():
            return deal, tree.key
    pytest.skip("no deal with a dominant QiDui root in the scanned range")


def test_regret_favours_dominant_qidui():
    deal, root = _dominant_qidui_deal()
    store = NodeStore()
    for _ in range(100):
        cfr_iteration(deal, store)
    assert int(np.argmax(store.get(root).regret_sum)) == Pattern.QIDUI


def test_train_zero_iterations(tmp_path):
    store, reports = train(TrainConfig(0, 5, 1, store_path=str(tmp_path / "s.txt"),
                                       report_path=str(tmp_path / "r.csv")))
    assert len(store) == 0 and reports == []
    assert (tmp_path / "r.csv").read_text() == "epoch,iterations_total,nodes,exploitability\n"


def test_trainer_is_deterministic():
    a, b = Trainer(3), Trainer(3)
    a.run(15)
    b.run(15)
    assert a.store == b.store and len(a.store) > 0
