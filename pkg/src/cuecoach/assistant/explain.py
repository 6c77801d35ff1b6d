"""Explainer context assembly, rule report, and the LM explanation call."""

from __future__ import annotations

from typing import List, Sequence

import numpy as np

from ..physics.types import BALL_IDS, POCKET_IDS, POCKET_XY, TableState
from ..rules.likert import quantize_likert
from ..rules.strategy import W_DEFENSIVE, W_OFFENSIVE
from ..rules.texts import RULE_SHORT_NAMES, RULE_TEXTS
from .prompts import EXPLAINER_OUTPUT_FIELDS, EXPLAINER_SYSTEM, render_user
from .tuner import TunedShot

__all__ = [
    "build_explainer_context",
    "explain",
    "rule_report",
    "render_rule_lines",
]


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def render_rule_lines(r: np.ndarray, ids: Sequence[int]) -> str:
    """One line per rule: verbatim text, percentage weight, Likert key."""
    lines = []
    for i in ids:
        value = float(r[i - 1])
        _, key = quantize_likert(value)
        lines.append(f"{i}. {RULE_TEXTS[i]} -- {value * 100:.1f}% ({key})")
    return "\n".join(lines)


def build_explainer_context(state: TableState, shot: TunedShot) -> str:
    """Render the explainer's user message (the context C_e).

    Fixed field order, 4-decimal coordinates, percentage weights with Likert
    keys; byte-stable for identical inputs.
    """
    sp = shot.shot
    shot_params = "\n".join([
        f"V0: {_fmt(sp.v)}",
        f"theta: {_fmt(sp.beta)}",
        f"phi: {_fmt(sp.alpha)}",
        f"a: {_fmt(sp.a)}",
        f"b: {_fmt(sp.b)}",
    ])
    coords = [
        f"{bid}: ({_fmt(state.balls[bid].x)}, {_fmt(state.balls[bid].y)})"
        for bid in BALL_IDS
        if state.balls[bid].on_table
    ]
    coords += [
        f"pocket {pid}: ({_fmt(POCKET_XY[pid][0])}, {_fmt(POCKET_XY[pid][1])})"
        for pid in POCKET_IDS
    ]
    events = "\n".join(
        f"{ev.text} at ({_fmt(ev.pos[0])}, {_fmt(ev.pos[1])})"
        for ev in shot.trace
    )
    values = [
        ("shot_params", shot_params),
        ("board_coordinates", "\n".join(coords)),
        ("events", events),
        ("value_rules", render_rule_lines(shot.rule_vector, range(1, 14))),
        ("difficulty_rules", render_rule_lines(shot.rule_vector, range(14, 30))),
    ]
    return render_user(values, EXPLAINER_OUTPUT_FIELDS)


def explain(lm, context: str, temperature: float = 0.7) -> str:
    """One LM call: fixed explainer system prompt, the context as user text."""
    return lm.complete(EXPLAINER_SYSTEM, context, temperature=temperature)


def rule_report(shot: TunedShot) -> List[dict]:
    """Per-rule report rows {id, name, value, likert, polarity}.

    Positive: the rule raises the chosen strategy's alignment term, or it is
    a value rule above the moderate bin. Negative: a difficulty rule above
    the moderate bin. Everything else is neutral.
    """
    if shot.strategy == "defensive":
        coeff = W_DEFENSIVE - W_OFFENSIVE
    elif shot.strategy == "offensive":
        coeff = W_OFFENSIVE - W_DEFENSIVE
    else:
        coeff = np.zeros(29)
    rows = []
    for i in range(1, 30):
        value = float(shot.rule_vector[i - 1])
        b, key = quantize_likert(value)
        if coeff[i - 1] * value > 0 or (i <= 13 and b > 3):
            polarity = "positive"
        elif i >= 14 and b > 3:
            polarity = "negative"
        else:
            polarity = "neutral"
        rows.append({
            "id": i,
            "name": RULE_SHORT_NAMES[i],
            "value": value,
            "likert": key,
            "polarity": polarity,
        })
    return rows
