"""3Pool game flow: placement, shot judging, respotting, and the turn loop.

Two players share one cue ball. Player 1 pots blue/red/yellow, player 2
pots green/black/pink. A legal shot that sinks at least one own ball keeps
the table; fouls (wrong first contact, no contact, scratching the cue)
hand it over. First player whose whole set is off the table wins, no
matter whose shot removed the last ball.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AgentError, PlacementFailed
from .physics import (
    BALL_IDS,
    CUE,
    DEFAULT_SPEC,
    KIND_BALL_BALL,
    KIND_POCKET,
    PLAYER1_TARGETS,
    PLAYER2_TARGETS,
    POCKET_ARRAY,
    BallState,
    Event,
    ShotParams,
    TableSpec,
    TableState,
    encode_trace,
    strike_and_trace,
)

PLAYER_TARGETS = {1: PLAYER1_TARGETS, 2: PLAYER2_TARGETS}

FOUL_CUE_POCKETED = "cue_pocketed"
FOUL_NO_CONTACT = "no_contact"
FOUL_WRONG_FIRST_CONTACT = "wrong_first_contact"

_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


@dataclass
class NoiseModel:
    """Gaussian execution noise added to every shot a player attempts."""

    sigma_v: float = 0.05
    sigma_alpha: float = 0.5
    sigma_beta: float = 0.5
    sigma_a: float = 0.005
    sigma_b: float = 0.005

    def apply(self, shot: ShotParams, rng: np.random.Generator) -> ShotParams:
        return ShotParams(
            v=shot.v + rng.normal(0.0, self.sigma_v),
            alpha=shot.alpha + rng.normal(0.0, self.sigma_alpha),
            beta=shot.beta + rng.normal(0.0, self.sigma_beta),
            a=shot.a + rng.normal(0.0, self.sigma_a),
            b=shot.b + rng.normal(0.0, self.sigma_b),
        )

    def as_sigmas(self) -> np.ndarray:
        return np.array([self.sigma_v, self.sigma_alpha, self.sigma_beta,
                         self.sigma_a, self.sigma_b])


def random_table_state(rng: np.random.Generator,
                       spec: TableSpec = DEFAULT_SPEC) -> TableState:
    """All seven balls placed uniformly with pairwise and pocket clearance."""
    R = spec.ball_radius
    min_gap = 2.2 * R
    pocket_clear = spec.pocket_radius + R
    placed: list[tuple[float, float]] = []
    for _ in range(7):
        ok = False
        for _attempt in range(10000):
            x = rng.uniform(R, spec.width - R)
            y = rng.uniform(R, spec.length - R)
            if any(math.hypot(x - px, y - py) < min_gap for px, py in placed):
                continue
            if any(math.hypot(x - cx, y - cy) < pocket_clear
                   for cx, cy in POCKET_ARRAY):
                continue
            placed.append((x, y))
            ok = True
            break
        if not ok:
            raise PlacementFailed("could not place all balls")
    balls = {bid: BallState(x, y, True)
             for bid, (x, y) in zip(BALL_IDS, placed)}
    return TableState(balls=balls)


@dataclass
class ShotJudgement:
    foul: str | None
    first_contact: str | None
    potted_own: list[str]
    potted_opp: list[str]
    cue_potted: bool
    shooter_continues: bool
    winner: int | None

    def to_dict(self) -> dict:
        return {
            "foul": self.foul,
            "first_contact": self.first_contact,
            "potted_own": list(self.potted_own),
            "potted_opp": list(self.potted_opp),
            "cue_potted": self.cue_potted,
            "shooter_continues": self.shooter_continues,
            "winner": self.winner,
        }


def judge_shot(shooter: int, trace: list[Event], post: TableState) -> ShotJudgement:
    """Apply the 3Pool rules to one shot's event trace and outcome."""
    own = PLAYER_TARGETS[shooter]
    opp = PLAYER_TARGETS[3 - shooter]

    first_contact = None
    for ev in trace:
        if ev.kind == KIND_BALL_BALL and (ev.ball1 == "cue" or ev.ball2 == "cue"):
            first_contact = ev.ball2 if ev.ball1 == "cue" else ev.ball1
            break

    cue_potted = False
    potted_own: list[str] = []
    potted_opp: list[str] = []
    for ev in trace:
        if ev.kind != KIND_POCKET:
            continue
        if ev.ball1 == "cue":
            cue_potted = True
        elif ev.ball1 in own:
            potted_own.append(ev.ball1)
        else:
            potted_opp.append(ev.ball1)

    if cue_potted:
        foul = FOUL_CUE_POCKETED
    elif first_contact is None:
        foul = FOUL_NO_CONTACT
    elif first_contact not in own:
        foul = FOUL_WRONG_FIRST_CONTACT
    else:
        foul = None

    # Shooter's set decides first when one shot clears both sets.
    winner = None
    if all(not post.balls[b].on_table for b in own):
        winner = shooter
    elif all(not post.balls[b].on_table for b in opp):
        winner = 3 - shooter

    shooter_continues = foul is None and len(potted_own) > 0
    return ShotJudgement(
        foul=foul,
        first_contact=first_contact,
        potted_own=potted_own,
        potted_opp=potted_opp,
        cue_potted=cue_potted,
        shooter_continues=shooter_continues,
        winner=winner,
    )


def respot_cue(state: TableState, spec: TableSpec = DEFAULT_SPEC) -> TableState:
    """Return the cue ball to the table after a scratch.

    Candidates walk a sunflower spiral out from (0.5, 0.5); the first spot
    clear of other balls and pocket mouths wins, so respotting is
    deterministic.
    """
    R = spec.ball_radius
    min_gap = 2.2 * R
    pocket_clear = spec.pocket_radius + R
    others = [(b.x, b.y) for bid, b in state.balls.items()
              if bid != "cue" and b.on_table]
    cx0, cy0 = 0.5, 0.5
    for k in range(8000):
        r = 0.02 * math.sqrt(k)
        th = k * _GOLDEN_ANGLE
        x = cx0 + r * math.cos(th)
        y = cy0 + r * math.sin(th)
        if not (R <= x <= spec.width - R and R <= y <= spec.length - R):
            continue
        if any(math.hypot(x - px, y - py) < min_gap for px, py in others):
            continue
        if any(math.hypot(x - qx, y - qy) < pocket_clear
               for qx, qy in POCKET_ARRAY):
            continue
        new = state.copy()
        new.balls["cue"] = BallState(x, y, True)
        return new
    raise PlacementFailed("no clear spot for the cue ball")


@dataclass
class ShotRecord:
    turn: int
    player: int
    intended: ShotParams
    executed: ShotParams
    pre: TableState
    post: TableState
    trace: list[Event]
    judgement: ShotJudgement

    def to_dict(self) -> dict:
        return {
            "turn": self.turn,
            "player": self.player,
            "intended": self.intended.to_dict(),
            "executed": self.executed.to_dict(),
            "pre_state": self.pre.to_dict(),
            "post_state": self.post.to_dict(),
            "trace": encode_trace(self.trace),
            "judgement": self.judgement.to_dict(),
        }


@dataclass
class GameResult:
    winner: int
    turns: int
    capped: bool
    records: list[ShotRecord] = field(default_factory=list)

    def to_dict(self, include_records: bool = True) -> dict:
        d = {"winner": self.winner, "turns": self.turns, "capped": self.capped}
        if include_records:
            d["records"] = [r.to_dict() for r in self.records]
        return d


def _balls_potted(state: TableState, targets) -> int:
    return sum(0 if state.balls[b].on_table else 1 for b in targets)


def play_game(agent1, agent2, start_state: TableState, seed: int,
              noise: NoiseModel | None = None,
              spec: TableSpec = DEFAULT_SPEC,
              turn_cap: int = 60,
              record: bool = False,
              start_player: int = 1) -> GameResult:
    """Play one full game. Both players' intended shots pass through the
    same noise model; all randomness comes from the seeded generator."""
    if noise is None:
        noise = NoiseModel()
    rng = np.random.default_rng(seed)
    state = start_state.copy()
    agents = {1: agent1, 2: agent2}
    shooter = start_player
    records: list[ShotRecord] = []

    for turn in range(turn_cap):
        agent = agents[shooter]
        shot_seed = int(rng.integers(2**62))
        try:
            intended = agent.select_shot(state, PLAYER_TARGETS[shooter],
                                         shot_seed)
        except Exception as exc:  # noqa: BLE001 - surfaced with turn context
            raise AgentError(f"agent for player {shooter} failed on turn "
                             f"{turn}: {exc}", turn=turn) from exc
        executed = noise.apply(intended, rng)
        result = strike_and_trace(state, executed, spec)
        judgement = judge_shot(shooter, result.trace, result.post)
        post = result.post
        if judgement.cue_potted and judgement.winner is None:
            post = respot_cue(post, spec)
        if record:
            records.append(ShotRecord(turn=turn, player=shooter,
                                      intended=intended, executed=executed,
                                      pre=state, post=post,
                                      trace=result.trace,
                                      judgement=judgement))
        state = post
        if judgement.winner is not None:
            return GameResult(winner=judgement.winner, turns=turn + 1,
                              capped=False, records=records)
        if not judgement.shooter_continues:
            shooter = 3 - shooter

    # Cap reached: more cleared balls wins, seeded coin flip on a tie.
    p1 = _balls_potted(state, PLAYER1_TARGETS)
    p2 = _balls_potted(state, PLAYER2_TARGETS)
    if p1 > p2:
        winner = 1
    elif p2 > p1:
        winner = 2
    else:
        winner = 1 + int(rng.integers(2))
    return GameResult(winner=winner, turns=turn_cap, capped=True,
                      records=records)


def did_player1_win(result: GameResult) -> bool:
    return result.winner == 1
