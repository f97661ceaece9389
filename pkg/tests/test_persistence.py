import random

import pytest

from cfrp import engine
from cfrp.cfr import CFRNode, NodeStore, Trainer
from cfrp.eval import EvalAgent, play_game
from cfrp.patterns import Pattern
from cfrp.persistence import (FormatError, format_benchmark, format_log, format_store,
                              load_store, make_benchmark, parse_benchmark, parse_log,
                              parse_store, read_benchmark, read_log, save_store,
                              write_benchmark, write_log)
from cfrp.tiles import Deal, canonical_tiles, shuffle_deal

HEADER = "cfrp-store v1 actions=normal,pongpong,qidui"


def random_store(rng, n):
    store = NodeStore()
    for key in rng.sample(range(1 << 20), n):
        mask = (True, rng.random() < 0.7, rng.random() < 0.5)
        r = [rng.uniform(-50, 50) if m else 0.0 for m in mask]
        s = [rng.expovariate(0.1) if m else 0.0 for m in mask]
        store.add(CFRNode(key, mask, r, s, rng.randint(1, 10_000)))
    return store


def test_empty_store_is_header_only(tmp_path):
    path = tmp_path / "s.txt"
    save_store(NodeStore(), path)
    assert path.read_text() == HEADER + "\n"
    assert len(load_store(path)) == 0


def test_table4_line():
    store = NodeStore()
    store.add(CFRNode(734401, (True,) * 3, [-0.598, 2.128, -1.356], [1.359, 1.975, 0.667], 42))
    assert format_store(store).splitlines()[1] == \
        "734401,111,42,-0.598,2.128,-1.356,1.359,1.975,0.667"


def test_store_round_trip_randomized():
    rng = random.Random(0)
    for _ in range(200):
        store = random_store(rng, rng.randint(0, 30))
        text = format_store(store)
        back = parse_store(text.splitlines())
        assert back == store
        assert format_store(back) == text


def test_trained_store_bit_exact(tmp_path):
    t = Trainer(1)
    t.run(30)
    path = tmp_path / "s.txt"
    save_store(t.store, path)
    back = load_store(path)
    for node in t.store:
        other = back.get(node.key)
        assert other.regret_sum == node.regret_sum
        assert other.strategy_sum == node.strategy_sum
        assert other.visits == node.visits and other.legal_mask == node.legal_mask


@pytest.mark.parametrize("lines,match", [
    (["cfrp-store v2 actions=normal,pongpong,qidui"], "bad header"),
    ([HEADER, "1,111,1,0,0,0,0,0"], ":2: expected 9 fields"),
    ([HEADER, "1,111,1,0,0,0,0,0,0", "1,111,1,0,0,0,0,0,0"], "duplicate key 1"),
    ([HEADER, "2,111,1,0,0,0,0,0,0", "1,111,1,0,0,0,0,0,0"], "out of order"),
    ([HEADER, "1,1x1,1,0,0,0,0,0,0"], "bad legal mask"),
    ([HEADER, "1,111,1,0,0,nan,0,0,0"], "non-finite"),
])
def test_store_rejects_bad_files(lines, match):
    with pytest.raises(FormatError, match=match):
        parse_store(lines)


def test_save_is_atomic_on_failure(tmp_path, monkeypatch):
    path = tmp_path / "s.txt"
    save_store(NodeStore(), path)
    import os
    monkeypatch.setattr(os, "replace", lambda *a: (_ for _ in ()).throw(OSError("disk")))
    with pytest.raises(OSError):
        save_store(random_store(random.Random(1), 3), path)
    assert path.read_text() == HEADER + "\n"
    assert [p.name for p in tmp_path.iterdir()] == ["s.txt"]


def sample_log(seed, opponent=Pattern.QIDUI, store=None):
    agent = EvalAgent(store or NodeStore(), "argmax", 0)
    return play_game(shuffle_deal(seed), agent, 0, opponent)[1]


def test_log_round_trip_and_replay(tmp_path):
    log = sample_log(3)
    path = tmp_path / "g.log"
    write_log(log, path)
    back = read_log(path)
    assert back.events == log.events
    assert format_log(back) == path.read_text()
    final = engine.replay_actions(shuffle_deal(3), back)
    assert engine.terminal_utility(final) == log.utilities()


def test_log_round_trip_randomized():
    t = Trainer(2)
    t.run(20)
    for seed in range(300):
        log = sample_log(seed, Pattern(seed % 3), t.store)
        text = format_log(log)
        assert format_log(parse_log(text.splitlines())) == text


def test_log_rejects_malformed_lines():
    with pytest.raises(FormatError, match=":3: unknown event tag"):
        parse_log(["cfrp-log v1", "SEED 1", "JUMP 0 3"])
    with pytest.raises(FormatError, match="DRAW expects 3 fields"):
        parse_log(["cfrp-log v1", "DRAW 0 3"])
    with pytest.raises(FormatError, match="missing header"):
        parse_log(["SEED 1"])


def test_truncated_log_file(tmp_path):
    path = tmp_path / "g.log"
    text = format_log(sample_log(4))
    path.write_text(text[: len(text) // 2])
    with pytest.raises(FormatError):
        read_log(path)


def test_benchmark_round_trip(tmp_path):
    deals = make_benchmark(5, 7)
    path = tmp_path / "b.txt"
    write_benchmark(deals, path, seed=7)
    assert read_benchmark(path) == deals
    write_benchmark([], path)
    assert path.read_text().startswith("cfrp-bench v1 count=0 seed=none")
    assert read_benchmark(path) == []


def test_benchmark_is_reproducible():
    assert format_benchmark(make_benchmark(4, 9), 9) == format_benchmark(make_benchmark(4, 9), 9)


def test_benchmark_rejects_wrong_multiset():
    bad = " ".join(["0"] * 64)
    lines = ["cfrp-bench v1 count=1 seed=none generator=splitmix64-fy-v1", bad]
    with pytest.raises(FormatError, match=":2:"):
        parse_benchmark(lines)


def test_benchmark_randomized_round_trip():
    rng = random.Random(5)
    for _ in range(100):
        deals = []
        for _ in range(rng.randint(0, 4)):
            tiles = canonical_tiles()
            rng.shuffle(tiles)
            deals.append(Deal(tuple(tiles)))
        text = format_benchmark(deals)
        assert format_benchmark(parse_benchmark(text.splitlines())) == text
