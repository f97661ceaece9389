from collections import Counter
from math import factorial

import pytest
from hypothesis import given, strategies as st

from cfrp.tiles import (NUM_TILES, WALL_SIZE, Deal, SplitMix64, canonical_tiles,
                        complexity_bounds, deal_initial, hand_from_dict, seed_stream,
                        shuffle_deal)

u64 = st.integers(min_value=0, max_value=2**64 - 1)


def test_splitmix_reference_values():
    # published test vector for seed 1234567
    rng = SplitMix64(1234567)
    assert [rng.next() for _ in range(3)] == [
        6457827717110365317, 3203168211198807973, 9817491932198370423]


def test_seed_stream_matches_generator():
    rng = SplitMix64(99)
    assert seed_stream(99, 4) == [rng.next() for _ in range(4)]


def test_below_stays_in_range():
    rng = SplitMix64(5)
    assert all(0 <= rng.below(7) < 7 for _ in range(1000))
    assert Counter(rng.below(3) for _ in range(3000)).keys() == {0, 1, 2}


def test_shuffle_is_deterministic():
    assert shuffle_deal(42) == shuffle_deal(42)
    assert shuffle_deal(42).permutation != shuffle_deal(43).permutation


@given(u64)
def test_shuffle_preserves_multiset(seed):
    deal = shuffle_deal(seed)
    assert sorted(deal.permutation) == canonical_tiles()
    assert deal.seed == seed


def test_distinct_permutations_over_seeds():
    perms = {shuffle_deal(s).permutation for s in range(1000)}
    assert len(perms) >= 990


def test_deal_initial_sizes_and_conservation():
    h0, h1, wall = deal_initial(shuffle_deal(3))
    assert sum(h0) == 13 and sum(h1) == 13 and len(wall) == WALL_SIZE == 38
    totals = Counter(wall)
    for k in range(16):
        assert h0[k] + h1[k] + totals[k] == 4


def test_deal_initial_direct_assignment():
    rest = [k for k in canonical_tiles() if k > 3] + [3, 3, 3]
    deal = Deal(tuple([0] * 4 + [1] * 4 + [2] * 4 + [3]) + tuple(rest))
    h0, _, _ = deal_initial(deal)
    assert h0 == [4, 4, 4, 1] + [0] * 12


def test_malformed_deal_rejected():
    with pytest.raises(ValueError):
        Deal(tuple([0] * NUM_TILES))
    with pytest.raises(ValueError):
        Deal(tuple(canonical_tiles()[:-1]))


def test_deal_line_round_trip():
    deal = shuffle_deal(11)
    assert Deal.from_line(deal.to_line(), deal.seed) == deal


def test_hand_from_dict():
    assert hand_from_dict({0: 2, 15: 1})[:2] == [2, 0]


def test_complexity_bounds():
    deals, leaves, abstract = complexity_bounds()
    assert abstract == 1350851717672992089
    assert len(str(leaves)) == 44
    assert deals == factorial(64) // factorial(4) ** 16
