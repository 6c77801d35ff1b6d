"""Training-sample generation: perturbed rollouts of an agent's chosen shot
followed by self-play games, summarized as a win-rate histogram."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import AgentError, CueCoachError, EmptyInput
from ..game import (
    NoiseModel,
    PLAYER_TARGETS,
    judge_shot,
    play_game,
    random_table_state,
    respot_cue,
)
from ..physics import (
    BallState,
    DEFAULT_SPEC,
    ShotParams,
    TableSpec,
    TableState,
    strike_and_trace,
)
from ..rules import RuleContext, evaluate_rules

DEFAULT_M = 20
DEFAULT_N = 5

# Mirror of the two colour sets: relabeling turns a player-2-to-move state
# into an equivalent player-1-to-move one.
_SIDE_SWAP = {"cue": "cue", "blue": "green", "red": "black",
              "yellow": "pink", "green": "blue", "black": "red",
              "pink": "yellow"}


def _swap_sides(state: TableState) -> TableState:
    balls = {_SIDE_SWAP[bid]: BallState(b.x, b.y, b.on_table)
             for bid, b in state.balls.items()}
    return TableState(balls=balls)


def _burned_state(agent, rng: np.random.Generator, burn: int,
                  noise: NoiseModel, spec: TableSpec) -> TableState:
    """A rack advanced by 0..burn noisy agent shots, normalized so the
    player to move owns {blue, red, yellow}.

    Mid-game states put the agent in positions (snookers, cleared balls,
    forced safeties) a fresh rack never shows, which is what gives the
    rule dimensions tied to potting and fouling their variance.
    """
    while True:
        state = random_table_state(rng, spec)
        steps = int(rng.integers(0, burn + 1))
        shooter = 1
        finished = False
        for _ in range(steps):
            shot_seed = int(rng.integers(2**62))
            intended = agent.select_shot(state, PLAYER_TARGETS[shooter],
                                         shot_seed)
            executed = noise.apply(intended, rng)
            res = strike_and_trace(state, executed, spec)
            judgement = judge_shot(shooter, res.trace, res.post)
            if judgement.winner is not None:
                finished = True
                break
            post = res.post
            if judgement.cue_potted:
                post = respot_cue(post, spec)
            state = post
            if not judgement.shooter_continues:
                shooter = 3 - shooter
        if finished:
            continue
        return state if shooter == 1 else _swap_sides(state)


def histogram(values, n: int) -> np.ndarray:
    """n-bin histogram over [0,1]: bin k covers [k/n, (k+1)/n), the last
    bin is closed at 1; masses are counts divided by len(values)."""
    vals = np.asarray(list(values), dtype=np.float64)
    if vals.size == 0:
        raise EmptyInput("histogram needs at least one value")
    p = np.zeros(n)
    # epsilon keeps exact bin edges (k/n as a float) in their own bin
    bins = np.minimum((vals * n + 1e-9).astype(np.int64), n - 1)
    for b in bins:
        p[b] += 1.0
    return p / vals.size


def _json_safe(x):
    """Recursively strip numpy types so a meta dict survives json.dumps."""
    if isinstance(x, np.ndarray):
        return [_json_safe(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    return x


@dataclass
class TrainingSample:
    state: TableState
    shot: ShotParams
    r: np.ndarray
    p: np.ndarray
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "state": self.state.to_dict(),
            "shot": self.shot.to_dict(),
            "r": [float(x) for x in self.r],
            "p": [float(x) for x in self.p],
            "meta": _json_safe(self.meta),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainingSample":
        return cls(state=TableState.from_dict(d["state"]),
                   shot=ShotParams.from_dict(d["shot"]),
                   r=np.asarray(d["r"], dtype=np.float64),
                   p=np.asarray(d["p"], dtype=np.float64),
                   meta=dict(d.get("meta", {})))


def gen_sample(agent, state: TableState, f=None,
               noise: NoiseModel | None = None,
               M: int = DEFAULT_M, N: int = DEFAULT_N, n: int = 10,
               seed: int = 0, shooter: int = 1,
               spec: TableSpec = DEFAULT_SPEC,
               turn_cap: int = 60) -> TrainingSample:
    """One (state, shot, r, p) tuple.

    The agent picks a shot for `state`; r is evaluated on its noiseless
    outcome. Each of the M rollouts perturbs the shot, simulates it, and
    plays N self-play games to completion from the resulting position; v_j
    is that rollout's player-1 win fraction and p the n-bin histogram of
    the v's.
    """
    if f is None:
        f = lambda s, sh: strike_and_trace(s, sh, spec)  # noqa: E731
    if noise is None:
        noise = NoiseModel()
    targets = PLAYER_TARGETS[shooter]
    opponents = PLAYER_TARGETS[3 - shooter]

    theta = agent.select_shot(state, targets, seed)
    base = f(state, theta)
    ctx = RuleContext(pre=state, shot=theta, post=base.post, trace=base.trace,
                      shooter_targets=targets, opponent_targets=opponents,
                      spec=spec)
    r = evaluate_rules(ctx)

    # Game seeds are shared across the M rollouts ((seed, 1, k), disjoint
    # from the perturbation streams (seed, 0, j)): with zero noise every
    # rollout then replays the same games, so p collapses to one-hot.
    game_seeds = [int(np.random.SeedSequence((seed, 1, k)).generate_state(1)[0])
                  for k in range(N)]
    v = np.empty(M)
    for j in range(M):
        rng_j = np.random.default_rng(np.random.SeedSequence((seed, 0, j)))
        theta_j = noise.apply(theta, rng_j)
        res = f(state, theta_j)
        judgement = judge_shot(shooter, res.trace, res.post)
        if judgement.winner is not None:
            v[j] = 1.0 if judgement.winner == 1 else 0.0
            continue
        x1 = res.post
        if judgement.cue_potted:
            x1 = respot_cue(x1, spec)
        nxt = shooter if judgement.shooter_continues else 3 - shooter
        wins = 0
        for k in range(N):
            g = play_game(agent, agent, x1, seed=game_seeds[k], noise=noise,
                          spec=spec, turn_cap=turn_cap, start_player=nxt)
            if g.winner == 1:
                wins += 1
        v[j] = wins / N

    p = histogram(v, n)
    meta = {"seed": seed, "M": M, "N": N, "shooter": shooter,
            "sigma": noise.as_sigmas()}
    return TrainingSample(state=state.copy(), shot=theta, r=r, p=p, meta=meta)


def gen_dataset(agent, count: int, M: int = DEFAULT_M, N: int = DEFAULT_N,
                n: int = 10, noise: NoiseModel | None = None, seed: int = 0,
                spec: TableSpec = DEFAULT_SPEC, burn: int = 0,
                progress=None) -> list[TrainingSample]:
    """count samples from seeded random racks; errors carry the sample index.

    burn > 0 advances each rack by up to that many noisy agent shots first,
    so the dataset also covers mid-game states.
    """
    samples = []
    burn_noise = noise if noise is not None else NoiseModel()
    for i in range(count):
        ss = np.random.SeedSequence((seed, i))
        if burn > 0:
            state = _burned_state(agent, np.random.default_rng(ss), burn,
                                  burn_noise, spec)
        else:
            state = random_table_state(np.random.default_rng(ss), spec)
        sample_seed = int(ss.generate_state(1)[0])
        try:
            samples.append(gen_sample(agent, state, None, noise, M, N, n,
                                      sample_seed, spec=spec))
        except AgentError as exc:
            raise AgentError(f"sample {i}: {exc}", turn=exc.turn) from exc
        except CueCoachError as exc:
            exc.message = f"sample {i}: {exc.message}"
            raise
        if progress is not None:
            progress(i + 1, count)
    return samples


def save_dataset(samples, path) -> None:
    with open(path, "w") as fh:
        for s in samples:
            fh.write(json.dumps(s.to_dict()) + "\n")


def load_dataset(path) -> list[TrainingSample]:
    samples = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                samples.append(TrainingSample.from_dict(json.loads(line)))
    return samples
