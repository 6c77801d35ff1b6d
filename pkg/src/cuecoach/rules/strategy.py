"""Offensive/defensive strategy vectors over the value rules."""
from __future__ import annotations

import numpy as np

from .texts import N_RULES

_OFFENSIVE_IDS = (1, 2, 3, 4, 6, 8, 10, 11, 13)
_DEFENSIVE_IDS = (5, 6, 7, 9, 12)  # rule 6 is two-way: in both

STRATEGIES = ("offensive", "defensive", "none")


def strategy_vectors() -> tuple[np.ndarray, np.ndarray]:
    """(w_o, w_d): binary masks over the 29 rules, zero on 14..29."""
    w_o = np.zeros(N_RULES)
    w_d = np.zeros(N_RULES)
    for i in _OFFENSIVE_IDS:
        w_o[i - 1] = 1.0
    for i in _DEFENSIVE_IDS:
        w_d[i - 1] = 1.0
    return w_o, w_d


W_OFFENSIVE, W_DEFENSIVE = strategy_vectors()


def strategy_value(r: np.ndarray, strategy: str) -> float:
    """Alignment of a rule vector with the requested play style.

    Defensive play rewards defensive rules and penalizes offensive ones;
    offensive play is the mirror image; "none" contributes nothing.
    """
    r = np.asarray(r, dtype=float)
    if strategy == "defensive":
        return float((W_DEFENSIVE - W_OFFENSIVE) @ r)
    if strategy == "offensive":
        return float((W_OFFENSIVE - W_DEFENSIVE) @ r)
    if strategy == "none":
        return 0.0
    raise ValueError(f"unknown strategy: {strategy!r}")


def split_value_difficulty(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """First 13 components are value rules, the remaining 16 difficulty."""
    r = np.asarray(r, dtype=float)
    return r[:13].copy(), r[13:].copy()
