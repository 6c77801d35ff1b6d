"""Evaluation harness: tournaments, potting rates, diverse sampling, rule relevance."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from .assistant.prompts import (
    RELEVANCE_OUTPUT_FIELDS,
    RELEVANCE_WITHOUT_R_SYSTEM,
    RELEVANCE_WITH_R_SYSTEM,
    render_user,
)
from .assistant.explain import render_rule_lines
from .errors import AgentError, DatasetTooSmall
from .game import NoiseModel, PLAYER_TARGETS, play_game, random_table_state
from .physics.engine import simulate_arrays
from .physics.types import (
    BALL_INDEX,
    DEFAULT_SPEC,
    KIND_POCKET,
    TableSpec,
    TableState,
)
from .rules.likert import parse_likert_key, quantize_likert
from .rules.texts import N_RULES, RULE_TEXTS
from .surrogate.sampling import TrainingSample

__all__ = [
    "PairRecord",
    "WinTable",
    "run_tournament",
    "potting_rate",
    "DiverseSample",
    "kmeans_diverse_sample",
    "LikertAgreement",
    "likert_agreement_eval",
    "build_relevance_user",
    "parse_likert_response",
]


# ---------------------------------------------------------------------------
# tournament
# ---------------------------------------------------------------------------

@dataclass
class PairRecord:
    """Games where `player1` shot first against `player2`."""

    player1: str
    player2: str
    games: int
    wins: int  # player-1 wins

    @property
    def rate(self) -> float:
        """Win rate as a percentage."""
        return 100.0 * self.wins / self.games if self.games else 0.0

    @property
    def std(self) -> float:
        """Binomial standard deviation of the rate, in percentage points."""
        if not self.games:
            return 0.0
        p = self.wins / self.games
        return float(np.sqrt(p * (1.0 - p) / self.games) * 100.0)

    def to_dict(self) -> dict:
        return {
            "player1": self.player1,
            "player2": self.player2,
            "games": self.games,
            "wins": self.wins,
            "rate": self.rate,
            "std": self.std,
        }


@dataclass
class WinTable:
    names: List[str]
    records: List[PairRecord] = field(default_factory=list)

    def record(self, p1: str, p2: str) -> Optional[PairRecord]:
        for rec in self.records:
            if rec.player1 == p1 and rec.player2 == p2:
                return rec
        return None

    def overall(self, a: str, b: str) -> float:
        """a's win rate against b across both seat orders, as a percentage."""
        ab, ba = self.record(a, b), self.record(b, a)
        games = (ab.games if ab else 0) + (ba.games if ba else 0)
        wins = (ab.wins if ab else 0) + ((ba.games - ba.wins) if ba else 0)
        return 100.0 * wins / games if games else 0.0

    def overall_std(self, a: str, b: str) -> float:
        ab, ba = self.record(a, b), self.record(b, a)
        games = (ab.games if ab else 0) + (ba.games if ba else 0)
        if not games:
            return 0.0
        p = self.overall(a, b) / 100.0
        return float(np.sqrt(p * (1.0 - p) / games) * 100.0)

    def to_dict(self) -> dict:
        return {
            "names": list(self.names),
            "records": [r.to_dict() for r in self.records],
            "overall": {
                a: {
                    b: None if a == b else self.overall(a, b)
                    for b in self.names
                }
                for a in self.names
            },
        }

    def format_text(self) -> str:
        """Aligned text table of overall rates, row = the named agent."""
        width = max(10, max((len(n) for n in self.names), default=0) + 2)
        head = "".ljust(width) + "".join(n.ljust(width) for n in self.names)
        lines = [head]
        for a in self.names:
            cells = []
            for b in self.names:
                if a == b:
                    cells.append("-".ljust(width))
                else:
                    cells.append(
                        f"{self.overall(a, b):.1f} ({self.overall_std(a, b):.1f})".ljust(width)
                    )
            lines.append(a.ljust(width) + "".join(cells))
        return "\n".join(lines)


def run_tournament(
    agents: Sequence,
    games_per_pair: int = 100,
    noise: Optional[NoiseModel] = None,
    seed: int = 0,
    spec: TableSpec = DEFAULT_SPEC,
    turn_cap: int = 60,
    progress: Optional[Callable[[str], None]] = None,
) -> WinTable:
    """Round-robin over unordered agent pairs, half the games on each seat.

    Every pair sees the same seeded starting states; each state is played
    twice with the seats swapped to cancel starting-position bias.
    """
    if len(agents) < 2:
        raise ValueError("tournament needs at least two agents")
    names = [a.name for a in agents]
    if len(set(names)) != len(names):
        names = [f"{a.name}#{i}" for i, a in enumerate(agents)]
    table = WinTable(names=names)

    half = games_per_pair // 2
    extra = games_per_pair - 2 * half
    starts = [
        random_table_state(
            np.random.default_rng(np.random.SeedSequence((seed, 3, g))), spec=spec)
        for g in range(half + extra)
    ]
    game_seeds = [
        int(np.random.SeedSequence((seed, 4, g)).generate_state(1)[0])
        for g in range(half + extra)
    ]

    for i in range(len(agents)):
        for j in range(i + 1, len(agents)):
            a, b = agents[i], agents[j]
            rec_ab = PairRecord(names[i], names[j], 0, 0)
            rec_ba = PairRecord(names[j], names[i], 0, 0)
            for g in range(half + extra):
                sides = [(a, b, rec_ab)]
                if g < half:
                    sides.append((b, a, rec_ba))
                for p1, p2, rec in sides:
                    try:
                        result = play_game(
                            p1, p2, starts[g], seed=game_seeds[g],
                            noise=noise, spec=spec, turn_cap=turn_cap)
                    except AgentError as exc:
                        raise AgentError(
                            f"pair {rec.player1} vs {rec.player2}, "
                            f"game {g}: {exc}") from exc
                    rec.games += 1
                    rec.wins += result.winner == 1
                if progress is not None:
                    progress(f"{names[i]} vs {names[j]}: game {g + 1}")
            table.records.extend([rec_ab, rec_ba])
    return table


# ---------------------------------------------------------------------------
# potting rate
# ---------------------------------------------------------------------------

def potting_rate(
    agent,
    states: Sequence[TableState],
    noise: Optional[NoiseModel] = None,
    seed: int = 0,
    spec: TableSpec = DEFAULT_SPEC,
) -> float:
    """Fraction of one-shot-per-state attempts that pot a shooter target.

    The shot executes exactly as selected unless a noise model is supplied.
    """
    if not states:
        raise ValueError("potting_rate needs at least one state")
    targets = PLAYER_TARGETS[1]
    target_idx = {BALL_INDEX[b] for b in targets}
    pots = 0
    for k, state in enumerate(states):
        shot_seed = int(np.random.SeedSequence((seed, 5, k)).generate_state(1)[0])
        shot = agent.select_shot(state, targets, shot_seed)
        if noise is not None:
            shot = noise.apply(shot, np.random.default_rng(
                np.random.SeedSequence((seed, 6, k))))
        pos, on = state.positions(), state.on_mask()
        _, _, events, _, _, _ = simulate_arrays(pos, on, shot, spec)
        n_ev, kinds, eas = events[0], events[1], events[2]
        for q in range(n_ev):
            if kinds[q] == KIND_POCKET and int(eas[q]) in target_idx:
                pots += 1
                break
    return pots / len(states)


# ---------------------------------------------------------------------------
# K-means diverse sampling
# ---------------------------------------------------------------------------

@dataclass
class DiverseSample:
    samples: List[TrainingSample]
    indices: List[int]
    assignments: np.ndarray
    K: int


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Seeded k-means++ start: spread the initial centers by squared distance."""
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    first = int(rng.integers(n))
    centers[0] = X[first]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        total = float(d2.sum())
        if total <= 0.0:
            centers[c:] = X[int(rng.integers(n))]
            break
        probs = d2 / total
        pick = int(rng.choice(n, p=probs))
        centers[c] = X[pick]
        d2 = np.minimum(d2, np.sum((X - centers[c]) ** 2, axis=1))
    return centers


def kmeans_diverse_sample(
    dataset: Sequence[TrainingSample],
    K: int = 25,
    per_cluster: int = 1,
    seed: int = 0,
    max_iter: int = 100,
    tol: float = 1e-6,
) -> DiverseSample:
    """Cluster rule vectors and draw uniformly from every nonempty cluster."""
    if len(dataset) < K:
        raise DatasetTooSmall(
            f"need at least K={K} samples, got {len(dataset)}")
    X = np.array([np.asarray(s.r, dtype=float) for s in dataset])
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_init(X, K, rng)
    assign = np.zeros(len(X), dtype=np.int64)
    for _ in range(max_iter):
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        assign = np.argmin(d2, axis=1)
        new_centers = centers.copy()
        for c in range(K):
            members = X[assign == c]
            if len(members):
                new_centers[c] = members.mean(axis=0)
        shift = float(np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max())
        centers = new_centers
        if shift <= tol:
            break
    indices: List[int] = []
    for c in range(K):
        members = np.flatnonzero(assign == c)
        if not len(members):
            continue
        take = min(per_cluster, len(members))
        picks = rng.choice(members, size=take, replace=False)
        indices.extend(int(p) for p in picks)
    indices.sort()
    return DiverseSample(
        samples=[dataset[i] for i in indices],
        indices=indices,
        assignments=assign,
        K=K,
    )


# ---------------------------------------------------------------------------
# rule-relevance (Likert distance) experiment
# ---------------------------------------------------------------------------

def _rule_lines(r: np.ndarray, ids: Sequence[int], with_r: bool) -> str:
    if with_r:
        return render_rule_lines(r, ids)
    return "\n".join(f"{i}. {RULE_TEXTS[i]}" for i in ids)


def build_relevance_user(sample: TrainingSample, with_r: bool,
                         spec: TableSpec = DEFAULT_SPEC) -> str:
    """User message for the relevance probe; mirrors the explainer context."""
    from .assistant.explain import _fmt
    from .physics.engine import events_from_arrays
    from .physics.types import BALL_IDS, POCKET_IDS, POCKET_XY

    state, shot = sample.state, sample.shot
    r = np.asarray(sample.r, dtype=float)
    shot_params = "\n".join([
        f"V0: {_fmt(shot.v)}",
        f"theta: {_fmt(shot.beta)}",
        f"phi: {_fmt(shot.alpha)}",
        f"a: {_fmt(shot.a)}",
        f"b: {_fmt(shot.b)}",
    ])
    coords = [
        f"{bid}: ({_fmt(state.balls[bid].x)}, {_fmt(state.balls[bid].y)})"
        for bid in BALL_IDS if state.balls[bid].on_table
    ]
    coords += [
        f"pocket {pid}: ({_fmt(POCKET_XY[pid][0])}, {_fmt(POCKET_XY[pid][1])})"
        for pid in POCKET_IDS
    ]
    pos, on = state.positions(), state.on_mask()
    _, _, events, _, _, _ = simulate_arrays(pos, on, shot, spec)
    trace = events_from_arrays(events)
    events_text = "\n".join(
        f"{ev.text} at ({_fmt(ev.pos[0])}, {_fmt(ev.pos[1])})" for ev in trace)
    values = [
        ("shot_params", shot_params),
        ("board_coordinates", "\n".join(coords)),
        ("events", events_text),
        ("value_rules", _rule_lines(r, range(1, 14), with_r)),
        ("difficulty_rules", _rule_lines(r, range(14, 30), with_r)),
    ]
    return render_user(values, RELEVANCE_OUTPUT_FIELDS)


def parse_likert_response(text: str) -> Optional[np.ndarray]:
    """Extract the 29 per-rule Likert bins; None when any rule is missing.

    Accepts lines like ``12: moderately high`` or ``12. <anything>: high``;
    the last colon-separated chunk must be a Likert key.
    """
    bins = np.full(N_RULES, -1, dtype=np.int64)
    for line in text.splitlines():
        stripped = line.strip().lstrip("-* ")
        if not stripped:
            continue
        head = stripped.split(":", 1)[0].strip()
        digits = "".join(ch for ch in head if ch.isdigit())
        if not digits:
            continue
        rid = int(digits)
        if not (1 <= rid <= N_RULES):
            continue
        tail = stripped.rsplit(":", 1)[-1].strip().strip(".,;")
        b = parse_likert_key(tail)
        if b is not None:
            bins[rid - 1] = b
    if (bins < 0).any():
        return None
    return bins


@dataclass
class LikertAgreement:
    per_rule_mean: np.ndarray
    per_rule_stderr: np.ndarray
    overall_mean: float
    overall_stderr: float
    n_included: int
    n_excluded: int

    @property
    def exclusion_rate(self) -> float:
        total = self.n_included + self.n_excluded
        return self.n_excluded / total if total else 0.0

    def to_dict(self) -> dict:
        return {
            "per_rule_mean": [float(x) for x in self.per_rule_mean],
            "per_rule_stderr": [float(x) for x in self.per_rule_stderr],
            "overall_mean": self.overall_mean,
            "overall_stderr": self.overall_stderr,
            "n_included": self.n_included,
            "n_excluded": self.n_excluded,
            "exclusion_rate": self.exclusion_rate,
        }


def likert_agreement_eval(
    lm,
    samples: Sequence[TrainingSample],
    with_r: bool = True,
    spec: TableSpec = DEFAULT_SPEC,
) -> LikertAgreement:
    """Mean per-rule |LM bin - ground-truth bin| over the given samples.

    Unparseable responses are excluded and counted; an unreachable LM
    propagates as LMUnavailable.
    """
    system = RELEVANCE_WITH_R_SYSTEM if with_r else RELEVANCE_WITHOUT_R_SYSTEM
    rows: List[np.ndarray] = []
    excluded = 0
    for sample in samples:
        user = build_relevance_user(sample, with_r, spec=spec)
        text = lm.complete(system, user)
        got = parse_likert_response(text)
        if got is None:
            excluded += 1
            continue
        truth = np.array(
            [quantize_likert(float(v))[0] for v in np.asarray(sample.r)],
            dtype=np.int64)
        rows.append(np.abs(got - truth).astype(float))
    if not rows:
        return LikertAgreement(
            per_rule_mean=np.full(N_RULES, np.nan),
            per_rule_stderr=np.full(N_RULES, np.nan),
            overall_mean=float("nan"),
            overall_stderr=float("nan"),
            n_included=0,
            n_excluded=excluded,
        )
    D = np.vstack(rows)
    n = D.shape[0]
    per_rule_mean = D.mean(axis=0)
    per_rule_stderr = (
        D.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(N_RULES))
    flat = D.ravel()
    overall_stderr = (
        float(flat.std(ddof=1) / np.sqrt(flat.size)) if flat.size > 1 else 0.0)
    return LikertAgreement(
        per_rule_mean=per_rule_mean,
        per_rule_stderr=per_rule_stderr,
        overall_mean=float(flat.mean()),
        overall_stderr=overall_stderr,
        n_included=n,
        n_excluded=excluded,
    )
