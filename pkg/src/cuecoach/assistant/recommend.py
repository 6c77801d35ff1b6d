"""LM-backed shot recommender: prompt assembly, response parsing, plan extraction."""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from ..errors import ParseFailure
from ..physics.types import (
    BALL_IDS,
    Event,
    TableState,
    encode_trace,
    parse_event_token,
)
from .prompts import (
    RECOMMENDER_OUTPUT_FIELDS,
    RECOMMENDER_SYSTEM,
    render_user,
)

__all__ = [
    "CandidatePlan",
    "STRATEGIES",
    "DIFFICULTIES",
    "build_recommender_user",
    "parse_recommendation",
    "recommend",
]

log = logging.getLogger(__name__)

STRATEGIES = ("offensive", "defensive", "none")
DIFFICULTIES = ("easy", "medium", "hard", "none")

# voting/retry defaults
N_VOTES = 3
TEMPERATURE = 0.7
K_RETRY = 2

_LABEL_RE = re.compile(r"^\s*(strategy|difficulty)\s*:\s*([A-Za-z]+)", re.IGNORECASE)
_SHOT_RE = re.compile(r"^\s*\d+\s*[.)]\s*(.+)$")


@dataclass(frozen=True)
class CandidatePlan:
    """A desired event train plus the strategy/difficulty labels attached to it."""

    target_events: Tuple[Event, ...]
    strategy: str = "none"
    difficulty: str = "none"

    def __post_init__(self):
        if not self.target_events:
            raise ValueError("plan requires at least one target event")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy: {self.strategy!r}")
        if self.difficulty not in DIFFICULTIES:
            raise ValueError(f"unknown difficulty: {self.difficulty!r}")

    @property
    def text(self) -> str:
        return encode_trace(list(self.target_events))


def build_recommender_user(
    state: TableState,
    targets: Sequence[str],
    query: str,
    n_shots: int,
) -> str:
    """Render the user message: ball coordinates, target/avoid ids, query, count."""
    balls = "\n".join(
        f"{bid}: ({state.balls[bid].x:.4f}, {state.balls[bid].y:.4f})"
        for bid in BALL_IDS
        if state.balls[bid].on_table
    )
    target_set = set(targets)
    avoid = [b for b in BALL_IDS if b != "cue" and b not in target_set]
    # sorted so set-typed target containers still render byte-stably
    targets_text = (
        "must pot: " + ", ".join(sorted(target_set))
        + "\nmust avoid: " + ", ".join(avoid)
    )
    values = [
        ("balls", balls),
        ("targets", targets_text),
        ("message", query),
        ("n_shots", str(n_shots)),
    ]
    return render_user(values, RECOMMENDER_OUTPUT_FIELDS)


def parse_recommendation(text: str) -> Tuple[str, str, List[List[Event]]]:
    """Extract (strategy, difficulty, event sequences) from an LM response.

    STRATEGY/DIFFICULTY lines are matched case-insensitively; shots are
    numbered lines of comma-separated event tokens. A line with any unknown
    id or malformed token is dropped without affecting its neighbours.
    """
    strategy = "none"
    difficulty = "none"
    sequences: List[List[Event]] = []
    for line in text.splitlines():
        m = _LABEL_RE.match(line)
        if m:
            label, value = m.group(1).lower(), m.group(2).lower()
            if label == "strategy" and value in STRATEGIES:
                strategy = value
            elif label == "difficulty" and value in DIFFICULTIES:
                difficulty = value
            continue
        m = _SHOT_RE.match(line)
        if not m:
            continue
        tokens = [t for t in m.group(1).split(",") if t.strip()]
        if not tokens:
            continue
        events = [parse_event_token(t) for t in tokens]
        if any(e is None for e in events):
            continue  # unknown id or bad token rejects this line only
        sequences.append([e for e in events if e is not None])
    if not sequences:
        raise ParseFailure("no valid shot lines in LM response")
    return strategy, difficulty, sequences


@dataclass
class RecommendDiagnostics:
    """What happened across voting samples and retries (for logs and tests)."""

    attempts: int = 0
    parse_errors: List[str] = field(default_factory=list)
    votes: List[Tuple[str, str]] = field(default_factory=list)


def recommend(
    state: TableState,
    query: str,
    targets: Sequence[str],
    lm,
    n_r: int = 5,
    *,
    k_retry: int = K_RETRY,
    n_votes: int = N_VOTES,
    temperature: float = TEMPERATURE,
    diagnostics: Optional[RecommendDiagnostics] = None,
) -> List[CandidatePlan]:
    """Query the LM for up to ``n_r`` candidate plans.

    Each attempt draws ``n_votes`` samples; the (strategy, difficulty) pair is
    decided by majority vote over the parseable samples and the event lines
    come from the first parseable one. Attempts where nothing parses are
    retried up to ``k_retry`` times; after that the parseable subset (possibly
    empty) is returned rather than raising.
    """
    user = build_recommender_user(state, targets, query, n_r)
    diag = diagnostics if diagnostics is not None else RecommendDiagnostics()
    for attempt in range(1 + k_retry):
        diag.attempts = attempt + 1
        parsed = []
        for _ in range(max(n_votes, 1)):
            text = lm.complete(RECOMMENDER_SYSTEM, user, temperature=temperature)
            try:
                parsed.append(parse_recommendation(text))
            except ParseFailure as exc:
                diag.parse_errors.append(str(exc))
        if not parsed:
            continue
        diag.votes = [(s, d) for s, d, _ in parsed]
        counts = Counter(diag.votes)
        top = max(counts.values())
        strategy, difficulty = next(v for v in diag.votes if counts[v] == top)
        sequences = parsed[0][2]
        plans = []
        seen = set()
        for events in sequences:
            key = tuple(e.key() for e in events)
            if key in seen:
                continue
            seen.add(key)
            plans.append(CandidatePlan(tuple(events), strategy, difficulty))
            if len(plans) == n_r:
                break
        return plans
    log.warning(
        "recommender got no parseable response after %d attempts: %s",
        diag.attempts,
        "; ".join(diag.parse_errors[-3:]),
    )
    return []
