"""Anchored longest-common-subsequence distance between event sequences.

The match must begin with the first event of the first sequence; if that
event never occurs in the second sequence the score is 0. Ball-ball events
compare as unordered pairs.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from ..physics import BALL_INDEX, POCKET_INDEX, Event
from ..physics.types import KIND_BALL_BALL, KIND_CUSHION, KIND_POCKET


def encode_events(events) -> np.ndarray:
    """(n, 3) int64 rows of (kind, a, b); ball pairs sorted, cushion b=-1."""
    out = np.empty((len(events), 3), dtype=np.int64)
    for i, ev in enumerate(events):
        if ev.kind == KIND_BALL_BALL:
            x = BALL_INDEX[ev.ball1]
            y = BALL_INDEX[ev.ball2]
            out[i] = (KIND_BALL_BALL, min(x, y), max(x, y))
        elif ev.kind == KIND_CUSHION:
            out[i] = (KIND_CUSHION, BALL_INDEX[ev.ball1], -1)
        else:
            out[i] = (KIND_POCKET, BALL_INDEX[ev.ball1],
                      POCKET_INDEX[ev.pocket])
    return out


@njit(cache=True)
def lcs_match_packed(a: np.ndarray, b: np.ndarray) -> int:
    """Anchored LCS on encoded rows: longest common subsequence of a and b
    whose first matched element is a[0]."""
    n = a.shape[0]
    m = b.shape[0]
    if n == 0 or m == 0:
        return 0
    # dp[i, j] = plain LCS of a[i:] and b[j:]; only the i=n row and j=m
    # column are read before being written, so zeroing the interior is
    # wasted work (this sits inside the annealing hot loop).
    dp = np.empty((n + 1, m + 1), dtype=np.int64)
    for j in range(m + 1):
        dp[n, j] = 0
    for i in range(n):
        dp[i, m] = 0
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if (a[i, 0] == b[j, 0] and a[i, 1] == b[j, 1]
                    and a[i, 2] == b[j, 2]):
                dp[i, j] = 1 + dp[i + 1, j + 1]
            else:
                x = dp[i + 1, j]
                y = dp[i, j + 1]
                dp[i, j] = x if x > y else y
    best = 0
    for j in range(m):
        if (a[0, 0] == b[j, 0] and a[0, 1] == b[j, 1]
                and a[0, 2] == b[j, 2]):
            cand = 1 + dp[1, j + 1]
            if cand > best:
                best = cand
    return best


def lcs_match(target: list[Event], trace: list[Event]) -> int:
    return int(lcs_match_packed(encode_events(target), encode_events(trace)))
