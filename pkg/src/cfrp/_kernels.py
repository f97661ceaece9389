"""Compiled inner loops for shanten.

Both kernels return table[s, e]: the largest number of hand tiles that fit
into at most ``s`` sets and at most ``e`` eyes, where a target may hold at
most ``cap[k]`` copies of kind k.
"""

import numpy as np
from numba import njit

NEG = -100


@njit(cache=True)
def run_table(hand, cap):
    """Characters (kinds 0-8): pongs, runs and an eye.

    DP over kinds; the state carries sets used, eye used, and the number of
    runs started one and two kinds back.
    """
    cur = np.full((5, 2, 5, 5), NEG, dtype=np.int64)
    cur[0, 0, 0, 0] = 0
    for i in range(9):
        h = hand[i]
        c = cap[i]
        nxt = np.full((5, 2, 5, 5), NEG, dtype=np.int64)
        for s in range(5):
            for e in range(2):
                for r1 in range(5):
                    for r2 in range(5):
                        g = cur[s, e, r1, r2]
                        if g == NEG:
                            continue
                        base = r1 + r2
                        if base > c:
                            continue
                        for p in range(2):
                            if s + p > 4:
                                continue
                            for e2 in range(2 - e):
                                t0 = base + 3 * p + 2 * e2
                                if t0 > c:
                                    continue
                                xmax = 0
                                if i <= 6:
                                    xmax = min(c - t0, 4 - s - p)
                                for x in range(xmax + 1):
                                    t = t0 + x
                                    val = g + min(h, t)
                                    s2 = s + p + x
                                    if nxt[s2, e + e2, x, r1] < val:
                                        nxt[s2, e + e2, x, r1] = val
        cur = nxt
    table = np.full((5, 2), NEG, dtype=np.int64)
    for s in range(5):
        for e in range(2):
            table[s, e] = cur[s, e, 0, 0]
    return _at_most(table)


@njit(cache=True)
def set_table(hand, cap, lo, hi):
    """Kinds lo..hi-1 with pongs and an eye only (no runs)."""
    cur = np.full((5, 2), NEG, dtype=np.int64)
    cur[0, 0] = 0
    for k in range(lo, hi):
        h = hand[k]
        c = cap[k]
        if h == 0:
            continue
        nxt = cur.copy()
        g3 = min(h, 3)
        g2 = min(h, 2)
        for s in range(5):
            for e in range(2):
                g = cur[s, e]
                if g == NEG:
                    continue
                if c >= 3 and s < 4 and nxt[s + 1, e] < g + g3:
                    nxt[s + 1, e] = g + g3
                if c >= 2 and e == 0 and nxt[s, 1] < g + g2:
                    nxt[s, 1] = g + g2
        cur = nxt
    return _at_most(cur)


@njit(cache=True)
def _at_most(table):
    for s in range(5):
        if s > 0:
            for e in range(2):
                if table[s, e] < table[s - 1, e]:
                    table[s, e] = table[s - 1, e]
        if table[s, 1] < table[s, 0]:
            table[s, 1] = table[s, 0]
    return table


@njit(cache=True)
def shanten_normal(hand, cap, need):
    chars = run_table(hand, cap)
    honors = set_table(hand, cap, 9, 16)
    best = 0
    for sc in range(need + 1):
        sh = need - sc
        v = chars[sc, 0] + honors[sh, 1]
        if v > best:
            best = v
        v = chars[sc, 1] + honors[sh, 0]
        if v > best:
            best = v
    return 3 * need + 1 - best


@njit(cache=True)
def shanten_pongpong(hand, cap, need):
    return 3 * need + 1 - set_table(hand, cap, 0, 16)[need, 1]


@njit(cache=True)
def _shanten(hand, cap, need, pong_only):
    if pong_only:
        return shanten_pongpong(hand, cap, need)
    return shanten_normal(hand, cap, need)


@njit(cache=True)
def discard_scan(hand, cap, need, pong_only):
    """Shanten after each possible discard (99 where nothing to discard) and,
    for the discards tied at the minimum, their acceptance count (-1 elsewhere)."""
    n = len(hand)
    sh = np.full(n, 99, dtype=np.int64)
    acc = np.full(n, -1, dtype=np.int64)
    h = hand.copy()
    low = 99
    for k in range(n):
        if h[k] == 0:
            continue
        h[k] -= 1
        sh[k] = _shanten(h, cap, need, pong_only)
        h[k] += 1
        if sh[k] < low:
            low = sh[k]
    ties = 0
    for k in range(n):
        if sh[k] == low:
            ties += 1
    if ties < 2:
        return sh, acc
    for k in range(n):
        if sh[k] != low:
            continue
        h[k] -= 1
        count = 0
        if low > -1:
            for j in range(n):
                if h[j] >= cap[j]:
                    continue
                h[j] += 1
                if _shanten(h, cap, need, pong_only) < low:
                    count += 1
                h[j] -= 1
        acc[k] = count
        h[k] += 1
    return sh, acc
