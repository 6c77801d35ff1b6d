"""Shot fitting and tuning by simulated annealing.

Two optimization problems share one annealer:

* fit: make the simulated event trace realize a target event train
  (energy = -anchored_lcs + lam * (trace length + parameter norm));
* tune: maximize the surrogate-predicted value of the shot plus the
  strategy and difficulty alignment terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..annealing import SAConfig, anneal, random_shot
from ..errors import ModelMissing
from ..physics.engine import events_from_arrays, simulate_arrays
from ..physics.types import (
    BALL_INDEX,
    DEFAULT_SPEC,
    KIND_BALL_BALL,
    KIND_CUSHION,
    Event,
    ShotParams,
    TableSpec,
    TableState,
)
from ..rules.evaluators import evaluate_rules_arrays
from ..rules.strategy import strategy_value
from ..surrogate.metrics import difficulty_score, entropy, expected_value
from .lcs import encode_events, lcs_match_packed
from .recommend import CandidatePlan

__all__ = [
    "TunedShot",
    "fit_shot_to_events",
    "tune",
    "tune_shot_candidates",
]

# player 1's colours in display order (set containers lose ordering)
PLAYER1_TARGETS = ("blue", "red", "yellow")


@dataclass
class TunedShot:
    """The tuner's pick plus everything downstream stages need to explain it."""

    shot: ShotParams
    rule_vector: np.ndarray
    expected_value: float
    v_s: float
    v_d: float
    achieved_lcs: int
    trace: List[Event]
    post: TableState
    strategy: str = "none"
    difficulty: str = "none"
    plan: Optional[CandidatePlan] = None
    candidate_scores: List[float] = field(default_factory=list)

    @property
    def score(self) -> float:
        return self.expected_value + self.v_s + self.v_d


class _ShotEvaluator:
    """Precomputed arrays for repeatedly simulating shots from one state."""

    def __init__(self, state: TableState, targets: Sequence[str],
                 spec: TableSpec = DEFAULT_SPEC):
        state.validate(spec)
        self.spec = spec
        self.pos = state.positions()
        self.on = state.on_mask()
        own = set(targets)
        self.own_idx = np.array(sorted(BALL_INDEX[b] for b in own),
                                dtype=np.int64)
        self.opp_idx = np.array(
            sorted(BALL_INDEX[b] for b in BALL_INDEX
                   if b != "cue" and b not in own),
            dtype=np.int64)

    def simulate(self, shot: ShotParams):
        """Returns (pos1, on1, packed trace, raw events tuple)."""
        pos1, on1, events, _, _, _ = simulate_arrays(
            self.pos, self.on, shot, self.spec)
        n_ev, kinds, eas, ebs, _, ex, ey, _, _ = events
        packed = (n_ev, kinds[:n_ev], eas[:n_ev], ebs[:n_ev],
                  ex[:n_ev], ey[:n_ev])
        return pos1, on1, packed, events

    def rules(self, shot: ShotParams, pos1, on1, packed) -> np.ndarray:
        shot_arr = np.array([shot.v, shot.alpha, shot.beta, shot.a, shot.b])
        return evaluate_rules_arrays(
            self.pos, self.on, pos1, on1, shot_arr,
            (packed[0], packed[1], packed[2], packed[3], packed[4], packed[5]),
            self.own_idx, self.opp_idx, self.spec)


def _encode_packed(packed) -> np.ndarray:
    """Packed kernel trace -> (n, 3) int64 match keys (pair order-free).

    The kernel stores the wall index in the second id slot for cushion
    events; match keys ignore which wall was hit, so it becomes -1.
    """
    n, kinds, eas, ebs = packed[0], packed[1], packed[2], packed[3]
    out = np.empty((n, 3), dtype=np.int64)
    for q in range(n):
        a, b = int(eas[q]), int(ebs[q])
        if kinds[q] == KIND_BALL_BALL and b < a:
            a, b = b, a
        elif kinds[q] == KIND_CUSHION:
            b = -1
        out[q, 0] = int(kinds[q])
        out[q, 1] = a
        out[q, 2] = b
    return out


def fit_shot_to_events(
    state: TableState,
    plan: CandidatePlan,
    sa: SAConfig,
    spec: TableSpec = DEFAULT_SPEC,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[ShotParams, int]:
    """Anneal shot parameters toward a trace realizing the plan's events.

    Minimizes -lcs(target, trace) + lam * (|trace| + ||theta_norm||); the lcs
    is anchored at the target's first event. Always returns the best found.
    """
    ev = _ShotEvaluator(state, PLAYER1_TARGETS, spec)
    target = encode_events(list(plan.target_events))
    if rng is None:
        rng = np.random.default_rng(sa.seed)

    def energy(shot: ShotParams) -> float:
        _, _, packed, _ = ev.simulate(shot)
        trace_enc = _encode_packed(packed)
        lcs = lcs_match_packed(target, trace_enc)
        penalty = packed[0] + float(np.linalg.norm(shot.normalized()))
        return -float(lcs) + sa.lam * penalty

    initial = random_shot(rng)
    best, _, _ = anneal(energy, initial, sa, rng=rng)
    _, _, packed, _ = ev.simulate(best)
    achieved = int(lcs_match_packed(target, _encode_packed(packed)))
    return best, achieved


def _score_parts(ev: _ShotEvaluator, shot: ShotParams, model,
                 strategy: str, difficulty: str, anchors):
    pos1, on1, packed, events = ev.simulate(shot)
    r = ev.rules(shot, pos1, on1, packed)
    p = model.predict(r)
    value = expected_value(p)
    v_s = strategy_value(r, strategy)
    v_d = difficulty_score(entropy(p), difficulty, anchors, model.h_max)
    return value, v_s, v_d, r, pos1, on1, events


def tune(
    state: TableState,
    candidates: Sequence[Tuple[ShotParams, Optional[CandidatePlan]]],
    model,
    sa: SAConfig,
    anchors=None,
    targets: Sequence[str] = PLAYER1_TARGETS,
    spec: TableSpec = DEFAULT_SPEC,
    default_strategy: str = "none",
    default_difficulty: str = "none",
) -> TunedShot:
    """Anneal every candidate against the surrogate objective and pick the best.

    Each chain maximizes expected_value(predict(r(theta))) + v_s + v_d with
    the candidate's own (strategy, difficulty); the returned TunedShot is the
    argmax over the chains' best-so-far scores. Candidates without a plan
    (agent mode) score under the default labels.
    """
    if model is None:
        raise ModelMissing("tuner needs a trained surrogate model")
    if not candidates:
        raise ValueError("tune requires at least one candidate")
    if anchors is None:
        anchors = model.anchors
    ev = _ShotEvaluator(state, targets, spec)

    best_scores: List[float] = []
    best_shots: List[ShotParams] = []
    for i, (shot0, plan) in enumerate(candidates):
        strategy = plan.strategy if plan is not None else default_strategy
        difficulty = plan.difficulty if plan is not None else default_difficulty

        def energy(shot: ShotParams) -> float:
            value, v_s, v_d, _, _, _, _ = _score_parts(
                ev, shot, model, strategy, difficulty, anchors)
            return -(value + v_s + v_d)

        rng = np.random.default_rng(np.random.SeedSequence((sa.seed, i)))
        best, best_e, _ = anneal(energy, shot0, sa, rng=rng)
        best_shots.append(best)
        best_scores.append(-best_e)

    winner = int(np.argmax(best_scores))
    shot = best_shots[winner]
    plan = candidates[winner][1]
    strategy = plan.strategy if plan is not None else default_strategy
    difficulty = plan.difficulty if plan is not None else default_difficulty
    value, v_s, v_d, r, pos1, on1, events = _score_parts(
        ev, shot, model, strategy, difficulty, anchors)
    trace = events_from_arrays(events)
    achieved = 0
    if plan is not None:
        achieved = int(lcs_match_packed(
            encode_events(list(plan.target_events)), encode_events(trace)))
    return TunedShot(
        shot=shot,
        rule_vector=r,
        expected_value=value,
        v_s=v_s,
        v_d=v_d,
        achieved_lcs=achieved,
        trace=trace,
        post=TableState.from_arrays(pos1, on1),
        strategy=strategy,
        difficulty=difficulty,
        plan=plan,
        candidate_scores=best_scores,
    )


def tune_shot_candidates(
    state: TableState,
    targets: Sequence[str],
    model,
    strategy: str = "none",
    difficulty: str = "none",
    k: int = 3,
    steps: int = 300,
    seed: int = 0,
    spec: TableSpec = DEFAULT_SPEC,
    sa: Optional[SAConfig] = None,
) -> TunedShot:
    """Agent-mode tuning: k seeded random initial shots, no LM plans."""
    if model is None:
        raise ModelMissing("tuner needs a trained surrogate model")
    if sa is None:
        # More jumpy than the fit default: value landscapes are flat away
        # from contact basins, so fresh draws buy more than refinement.
        sa = SAConfig(steps=steps, seed=seed, p_jump=0.3)
    inits = []
    for i in range(max(k, 1)):
        rng = np.random.default_rng(np.random.SeedSequence((seed, 7, i)))
        inits.append((random_shot(rng), None))
    return tune(state, inits, model, sa, targets=targets, spec=spec,
                default_strategy=strategy, default_difficulty=difficulty)
