"""End-to-end assistant: recommend -> fit -> tune -> explain.

The pipeline degrades gracefully: without a reachable LM it tunes K seeded
random candidates and emits a templated, rule-grounded explanation instead
of prose, flagged so callers can tell the difference.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..annealing import SAConfig
from ..errors import LMUnavailable, ModelMissing
from ..physics.engine import strike_and_trace
from ..physics.types import DEFAULT_SPEC, Frame, TableSpec, TableState
from .explain import build_explainer_context, explain, rule_report
from .recommend import CandidatePlan, recommend
from .tuner import PLAYER1_TARGETS, TunedShot, fit_shot_to_events, tune, tune_shot_candidates

__all__ = ["AssistConfig", "AssistResult", "assist", "templated_explanation"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AssistConfig:
    n_candidates: int = 5       # plans requested from the LM
    steps: int = 300            # annealing steps per chain (fit and tune)
    seed: int = 0
    k_degraded: int = 3         # random candidates when no plans are usable
    targets: Tuple[str, ...] = PLAYER1_TARGETS
    temperature: float = 0.7
    k_retry: int = 2
    lam: float = 0.1
    want_frames: bool = True


@dataclass
class AssistResult:
    shot: TunedShot
    explanation: str
    degraded: bool
    rule_report: List[dict]
    frames: Optional[List[Frame]]

    @property
    def trace(self):
        return self.shot.trace


def templated_explanation(tuned: TunedShot, report: List[dict]) -> str:
    """Deterministic fallback prose built from the rule report alone."""
    sp = tuned.shot
    by_value = sorted(report[:13], key=lambda row: -row["value"])[:3]
    by_diff = sorted(report[13:], key=lambda row: -row["value"])[:3]

    def _fmt_rows(rows):
        return "; ".join(
            f"{row['name']} ({row['value'] * 100:.1f}%, {row['likert']})"
            for row in rows
        )

    lines = [
        "Rule-based summary (language model unavailable).",
        (
            f"Recommended shot: V0 {sp.v:.2f}, phi {sp.alpha:.1f}, "
            f"theta {sp.beta:.1f}, a {sp.a:.3f}, b {sp.b:.3f}."
        ),
        (
            f"Expected value {tuned.expected_value:.3f}"
            f" (strategy {tuned.strategy}, difficulty {tuned.difficulty})."
        ),
        f"Strongest value rules: {_fmt_rows(by_value)}.",
        f"Main difficulty factors: {_fmt_rows(by_diff)}.",
    ]
    if tuned.trace:
        lines.append(
            "Predicted events: " + ", ".join(ev.text for ev in tuned.trace) + "."
        )
    return "\n".join(lines)


def _fit_plans(
    state: TableState,
    plans: Sequence[CandidatePlan],
    cfg: AssistConfig,
    spec: TableSpec,
) -> List[Tuple]:
    sa = SAConfig(steps=cfg.steps, lam=cfg.lam, seed=cfg.seed)
    candidates = []
    for i, plan in enumerate(plans):
        rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 2, i)))
        theta, _ = fit_shot_to_events(state, plan, sa, spec=spec, rng=rng)
        candidates.append((theta, plan))
    return candidates


def assist(
    state: TableState,
    query: str,
    lm,
    model,
    cfg: Optional[AssistConfig] = None,
    spec: TableSpec = DEFAULT_SPEC,
) -> AssistResult:
    """Answer one query: pick a shot, score it, explain it.

    Deterministic given (state, query, cfg.seed, mock fixtures). Stage errors
    keep their stage tag; only an unreachable LM triggers the degraded path.
    """
    if model is None:
        raise ModelMissing("assist needs a trained surrogate model")
    cfg = cfg or AssistConfig()
    state.validate(spec)

    plans: List[CandidatePlan] = []
    lm_ok = lm is not None
    if lm_ok:
        try:
            plans = recommend(
                state, query, cfg.targets, lm, cfg.n_candidates,
                k_retry=cfg.k_retry, temperature=cfg.temperature)
        except LMUnavailable as exc:
            log.warning("recommender LM unavailable, degrading: %s", exc)
            lm_ok = False

    sa = SAConfig(steps=cfg.steps, lam=cfg.lam, seed=cfg.seed)
    if plans:
        candidates = _fit_plans(state, plans, cfg, spec)
        tuned = tune(state, candidates, model, sa,
                     targets=cfg.targets, spec=spec)
        degraded = False
    else:
        # tune-only fallback: K seeded random candidates, no event plans
        tuned = tune_shot_candidates(
            state, cfg.targets, model,
            k=cfg.k_degraded, steps=cfg.steps, seed=cfg.seed, spec=spec)
        degraded = True

    report = rule_report(tuned)

    explanation: Optional[str] = None
    if lm_ok:
        try:
            explanation = explain(
                lm, build_explainer_context(state, tuned),
                temperature=cfg.temperature)
        except LMUnavailable as exc:
            log.warning("explainer LM unavailable, degrading: %s", exc)
            degraded = True
    if explanation is None:
        explanation = templated_explanation(tuned, report)
        degraded = True

    frames: Optional[List[Frame]] = None
    if cfg.want_frames:
        sim = strike_and_trace(state, tuned.shot, spec=spec, want_frames=True)
        frames = sim.frames

    return AssistResult(
        shot=tuned,
        explanation=explanation,
        degraded=degraded,
        rule_report=report,
        frames=frames,
    )
