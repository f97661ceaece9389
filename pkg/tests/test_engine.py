import random

import pytest

from cfrp import engine
from cfrp.engine import (PASS_ACTION, WIN_ACTION, Chow, Discard, IllegalActionError,
                         KongConcealed, Pong, check_conservation, legal_actions,
                         new_game, playout, replay_actions, step, terminal_utility)
from cfrp.patterns import Pattern
from cfrp.policy import fixed_pattern_agent
from cfrp.tiles import shuffle_deal
from helpers import build_deal, kinds

C1, C2, C3, C4, C5, C6, C7, C8, C9 = range(9)
E, S, W, N, RED, GREEN, WHITE = range(9, 16)


def test_new_game_setup():
    s = new_game(shuffle_deal(1))
    assert s.wall_remaining == 38 and s.phase == 1 and s.to_act == 0
    assert s.terminal is None and s.round == 0
    check_conservation(s)


def test_phase1_pass_only_without_options():
    hand0 = kinds({C1: 1, C3: 1, C5: 1, C7: 1, C9: 1, E: 1, S: 1, W: 1, N: 1,
                   RED: 1, GREEN: 1, WHITE: 1, C2: 1})
    deal = build_deal(hand0, kinds({C1: 3, C3: 3, C5: 3, C7: 3, C9: 1}), wall_front=[C4])
    s = engine.draw_if_needed(new_game(deal))
    assert s.round == 1 and s.hands[0][C4] == 1
    assert legal_actions(s) == [PASS_ACTION]


def test_chow_offered_on_discard():
    hand1 = kinds({C3: 1, C4: 1, E: 3, S: 3, W: 3, N: 2})
    hand0 = kinds({C5: 1, C1: 2, C2: 2, C7: 2, C8: 2, RED: 2, GREEN: 2})
    deal = build_deal(hand0, hand1, wall_front=[WHITE])
    s = engine.draw_if_needed(new_game(deal))
    s = engine.apply(s, PASS_ACTION)
    s = engine.apply(s, Discard(C5))
    assert s.to_act == 1 and s.phase == 0 and s.last_discard == C5
    acts = legal_actions(s)
    assert Chow(C3) in acts and PASS_ACTION in acts


def test_discard_actions_one_per_kind():
    hand0 = kinds({C1: 2, C2: 2, C3: 1, C4: 1, C5: 1, C6: 1, C7: 1, C8: 1,
                   C9: 1, E: 1, S: 1})
    deal = build_deal(hand0, kinds({RED: 4, GREEN: 4, WHITE: 4, N: 1}), wall_front=[W])
    s = engine.apply(engine.draw_if_needed(new_game(deal)), PASS_ACTION)
    assert s.phase == 2
    assert legal_actions(s) == [Discard(k) for k in range(12)]


def test_concealed_kong_draws_from_back():
    hand0 = kinds({E: 3, C1: 1, C2: 1, C3: 1, C5: 1, C6: 1, C7: 1, S: 1, W: 1, N: 1, RED: 1})
    deal = build_deal(hand0, kinds({C9: 4, C8: 4, GREEN: 4, WHITE: 1}),
                      wall_front=[E], wall_back=[C4])
    s = engine.draw_if_needed(new_game(deal))
    assert KongConcealed(E) in legal_actions(s)
    s2, events = step(s, KongConcealed(E))
    assert s2.phase == 1 and s2.to_act == 0
    assert s2.round == s.round + 1 and s2.wall_remaining == s.wall_remaining - 1
    assert events == [("KONG", 0, E, "concealed"), ("DRAW", 0, C4, "back")]
    check_conservation(s2)


def test_pong_then_discard_phase():
    hand1 = kinds({C9: 2, E: 3, S: 3, W: 3, N: 2})
    hand0 = kinds({C9: 1, C1: 2, C2: 2, C3: 2, C4: 2, C5: 2, C6: 2})
    deal = build_deal(hand0, hand1, wall_front=[RED])
    s = engine.apply(engine.draw_if_needed(new_game(deal)), PASS_ACTION)
    s = engine.apply(s, Discard(C9))
    s2 = engine.apply(s, Pong(C9))
    assert s2.phase == 2 and s2.to_act == 1 and s2.discards[0] == ()
    check_conservation(s2)


def test_win_on_discard_and_utilities():
    hand1 = kinds({C1: 2, C2: 2, C3: 2, E: 2, S: 2, RED: 2, GREEN: 1})
    hand0 = kinds({GREEN: 1, C4: 2, C5: 2, C6: 2, C7: 2, C8: 2, W: 2})
    deal = build_deal(hand0, hand1, wall_front=[N])
    s = engine.apply(engine.draw_if_needed(new_game(deal)), PASS_ACTION)
    s = engine.apply(s, Discard(GREEN))
    assert WIN_ACTION in legal_actions(s)
    end = engine.apply(s, WIN_ACTION)
    assert end.terminal.pattern == Pattern.QIDUI
    assert terminal_utility(end) == (-2, 2)


def test_illegal_action_rejected_with_phase():
    s = engine.draw_if_needed(new_game(shuffle_deal(2)))
    with pytest.raises(IllegalActionError, match="phase 1"):
        engine.apply(s, Discard(0))


def test_apply_does_not_mutate():
    s = engine.draw_if_needed(new_game(shuffle_deal(3)))
    before = (s.key(), s.wall)
    engine.apply(s, PASS_ACTION)
    assert (s.key(), s.wall) == before


def pass_discard_first(state):
    return legal_actions(state)[0]


def test_wall_exhaustion_is_a_draw():
    u, log = playout(new_game(shuffle_deal(4)), pass_discard_first, pass_discard_first)
    draws = [e for e in log.events if e[0] == "DRAW"]
    assert len(draws) <= 38
    assert sum(u) == 0


def test_exhaustion_reached_without_winner():
    # both players keep all-distinct honors-heavy hands and discard the drawn tile
    def discard_drawn(state):
        acts = legal_actions(state)
        if state.phase < 2:
            return PASS_ACTION
        return acts[-1]

    for seed in range(30):
        u, log = playout(new_game(shuffle_deal(seed)), discard_drawn, discard_drawn)
        if log.events[-1] == ("END", "drawn"):
            assert u == (0, 0)
            assert sum(1 for e in log.events if e[0] == "DRAW") == 38
            return
    pytest.fail("no drawn game found")


def test_terminal_utility_rejects_live_state():
    with pytest.raises(ValueError):
        terminal_utility(new_game(shuffle_deal(0)))


def test_playout_deterministic_and_replayable():
    deal = shuffle_deal(5)
    a = fixed_pattern_agent(Pattern.NORMAL)
    b = fixed_pattern_agent(Pattern.QIDUI)
    u1, log1 = playout(new_game(deal), a, b)
    u2, log2 = playout(new_game(deal), a, b)
    assert u1 == u2 and log1.events == log2.events
    final = replay_actions(deal, log1)
    assert terminal_utility(final) == u1 == log1.utilities()


def test_replay_rejects_foreign_log():
    _, log = playout(new_game(shuffle_deal(6)), fixed_pattern_agent(0), fixed_pattern_agent(0))
    with pytest.raises(ValueError):
        replay_actions(shuffle_deal(7), log)


def test_random_playouts_keep_invariants():
    rng = random.Random(0)
    for seed in range(200):
        s = new_game(shuffle_deal(seed))
        while s.terminal is None:
            acts = legal_actions(s)
            assert acts
            s = engine.apply(s, rng.choice(acts))
            check_conservation(s)
            assert s.round == 38 - s.wall_remaining
        u = terminal_utility(s)
        assert sum(u) == 0 and all(abs(x) <= 2 for x in u)
