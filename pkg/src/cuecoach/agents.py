"""Shot-selection agents: greedy ghost-ball, a PoolMaster-style grid
search, and the surrogate-guided annealing agent."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import numpy as np

from .annealing import random_shot
from .errors import ModelMissing
from .physics import (
    BALL_INDEX,
    CUE,
    DEFAULT_SPEC,
    POCKET_ARRAY,
    POCKET_IDS,
    PLAYER1_TARGETS,
    ShotParams,
    TableSpec,
    TableState,
    simulate_arrays,
)
from .physics.kernel import EV_POCKET

_DIAG = math.sqrt(5.0)


@runtime_checkable
class Agent(Protocol):
    name: str

    def select_shot(self, state: TableState, targets, seed: int) -> ShotParams:
        ...


def ghost_ball_aim(cue_xy, ball_xy, pocket_xy, R: float = DEFAULT_SPEC.ball_radius):
    """Ghost-ball position and azimuth for potting ball_xy into pocket_xy.

    The ghost sits one ball-diameter behind the object ball on the
    ball-pocket line; alpha is the azimuth of cue -> ghost.
    """
    bx, by = float(ball_xy[0]), float(ball_xy[1])
    px, py = float(pocket_xy[0]), float(pocket_xy[1])
    d = math.hypot(px - bx, py - by)
    if d <= 0.0:
        return (bx, by), 0.0
    gx = bx - 2.0 * R * (px - bx) / d
    gy = by - 2.0 * R * (py - by) / d
    alpha = math.degrees(math.atan2(gy - cue_xy[1], gx - cue_xy[0])) % 360.0
    return (gx, gy), alpha


NULL_SHOT = ShotParams(0.0, 0.0, 0.0, 0.0, 0.0)


def _own_potted(events, own_idx) -> int:
    n_ev, kinds, eas = events[0], events[1], events[2]
    pots = 0
    for q in range(n_ev):
        if kinds[q] == EV_POCKET and eas[q] in own_idx:
            pots += 1
    return pots


def _cue_potted(events) -> bool:
    n_ev, kinds, eas = events[0], events[1], events[2]
    for q in range(n_ev):
        if kinds[q] == EV_POCKET and eas[q] == CUE:
            return True
    return False


class GreedyAgent:
    """Ghost-ball aim at each target's closest pocket; speed scales with
    path length, the remaining parameters are sampled; best pot count wins.
    """

    name = "greedy"

    def __init__(self, spec: TableSpec = DEFAULT_SPEC):
        self.spec = spec

    def select_shot(self, state: TableState, targets, seed: int) -> ShotParams:
        rng = np.random.default_rng(seed)
        cue = state.balls["cue"]
        own = [t for t in sorted(targets) if state.balls[t].on_table]
        if not own or not cue.on_table:
            return NULL_SHOT
        R = self.spec.ball_radius
        pos = state.positions()
        on = state.on_mask()
        own_idx = {BALL_INDEX[t] for t in own}

        candidates: list[ShotParams] = []
        for t in own:
            b = state.balls[t]
            dists = [math.hypot(b.x - px, b.y - py) for px, py in POCKET_ARRAY]
            pk = int(np.argmin(dists))
            (gx, gy), alpha = ghost_ball_aim((cue.x, cue.y), (b.x, b.y),
                                             POCKET_ARRAY[pk], R)
            path = math.hypot(gx - cue.x, gy - cue.y) + dists[pk]
            v_base = 1.0 + 3.0 * min(1.0, path / _DIAG)
            candidates.append(ShotParams(v_base, alpha, 0.0, 0.0, 0.0))
            v_rand = min(4.0, max(1.0, v_base * rng.uniform(0.8, 1.2)))
            if rng.random() < 0.5:
                candidates.append(ShotParams(v_rand, alpha, 0.0, 0.0, 0.0))
            else:
                candidates.append(ShotParams(
                    v_rand, alpha, rng.uniform(0.0, 90.0),
                    rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)))

        pots = np.array([_own_potted(simulate_arrays(pos, on, c, self.spec)[2],
                                     own_idx)
                         for c in candidates])
        best = np.flatnonzero(pots == pots.max())
        return candidates[int(rng.choice(best))]


@dataclass
class PoolMasterConfig:
    grid: int = 15
    v_values: tuple = (1.5, 2.75, 4.0)
    beta_values: tuple = (0.0,)
    a_values: tuple = (0.0,)
    b_values: tuple = (-0.3, 0.0, 0.3)  # draw/stun/follow for position
    pot_score: float = 10.0
    foul_penalty: float = 100.0
    position_weight: float = 1.0
    max_cut_deg: float = 85.0

    @classmethod
    def full(cls) -> "PoolMasterConfig":
        """Five-way sweeps over every shot parameter (slow, exhaustive)."""
        return cls(grid=30,
                   v_values=(1.0, 2.0, 3.0, 4.0, 5.0),
                   beta_values=(0.0, 11.25, 22.5, 33.75, 45.0),
                   a_values=(-0.5, -0.25, 0.0, 0.25, 0.5),
                   b_values=(-0.5, -0.25, 0.0, 0.25, 0.5))


class PoolMasterAgent:
    """Route enumeration over (target, pocket) pairs with mirrored-table
    banks as fallback; candidates scored on pots, cue position, and
    legality, discounted by geometric shot difficulty."""

    name = "poolmaster"

    def __init__(self, config: PoolMasterConfig | None = None,
                 spec: TableSpec = DEFAULT_SPEC):
        self.config = config or PoolMasterConfig()
        self.spec = spec

    # -- route geometry ------------------------------------------------
    def _route_ok(self, state, cue, b, aim_xy, R):
        """Cut-angle feasibility and clear corridors for a pot route."""
        (gx, gy), alpha = ghost_ball_aim((cue.x, cue.y), (b.x, b.y), aim_xy, R)
        ix, iy = gx - cue.x, gy - cue.y
        dx, dy = aim_xy[0] - b.x, aim_xy[1] - b.y
        ni = math.hypot(ix, iy)
        nd = math.hypot(dx, dy)
        if ni <= 1e-12 or nd <= 1e-12:
            return None
        c = (ix * dx + iy * dy) / (ni * nd)
        cut = math.degrees(math.acos(max(-1.0, min(1.0, c))))
        if cut > self.config.max_cut_deg:
            return None
        return alpha

    def _corridor_clear(self, state, ax, ay, bx, by, skip):
        R = self.spec.ball_radius
        for bid, ball in state.balls.items():
            if bid in skip or not ball.on_table:
                continue
            # point-segment distance
            dx, dy = bx - ax, by - ay
            l2 = dx * dx + dy * dy
            if l2 <= 0:
                continue
            t = max(0.0, min(1.0, ((ball.x - ax) * dx + (ball.y - ay) * dy) / l2))
            if math.hypot(ball.x - (ax + t * dx), ball.y - (ay + t * dy)) < 2 * R:
                return False
        return True

    def _routes(self, state, own):
        cue = state.balls["cue"]
        R = self.spec.ball_radius
        direct = []
        banks = []
        for t in own:
            b = state.balls[t]
            for k, (px, py) in enumerate(POCKET_ARRAY):
                alpha = self._route_ok(state, cue, b, (px, py), R)
                if alpha is None:
                    continue
                ghost, _ = ghost_ball_aim((cue.x, cue.y), (b.x, b.y), (px, py), R)
                if (self._corridor_clear(state, cue.x, cue.y, *ghost,
                                         skip={"cue", t})
                        and self._corridor_clear(state, b.x, b.y, px, py,
                                                 skip={"cue", t})):
                    direct.append((t, alpha))
            # one-cushion banks: pocket mirrored across each cushion line
            for k, (px, py) in enumerate(POCKET_ARRAY):
                for mx, my in ((-px, py), (2 * self.spec.width - px, py),
                               (px, -py), (px, 2 * self.spec.length - py)):
                    alpha = self._route_ok(state, cue, b, (mx, my), R)
                    if alpha is not None:
                        banks.append((t, alpha))
        return direct, banks

    def _grid_snap(self, x, y):
        g = self.config.grid
        cw = self.spec.width / g
        ch = self.spec.length / (2 * g)
        return ((math.floor(x / cw) + 0.5) * cw,
                (math.floor(y / ch) + 0.5) * ch)

    def select_shot(self, state: TableState, targets, seed: int) -> ShotParams:
        cfg = self.config
        cue = state.balls["cue"]
        own = [t for t in sorted(targets) if state.balls[t].on_table]
        if not own or not cue.on_table:
            return NULL_SHOT
        own_idx = {BALL_INDEX[t] for t in own}
        opp_idx = {BALL_INDEX[b] for b in state.balls
                   if b != "cue" and b not in targets}
        # full groups for the rule kernel; the on-masks hide potted balls
        own_arr = np.array(sorted(BALL_INDEX[t] for t in targets),
                           dtype=np.int64)
        opp_arr = np.array(sorted(opp_idx), dtype=np.int64)
        pos = state.positions()
        on = state.on_mask()

        direct, banks = self._routes(state, own)
        routes = direct if direct else banks
        if not routes:
            # safety fallback: soft roll onto the nearest own ball
            t = min(own, key=lambda t: math.hypot(
                state.balls[t].x - cue.x, state.balls[t].y - cue.y))
            b = state.balls[t]
            alpha = math.degrees(math.atan2(b.y - cue.y, b.x - cue.x)) % 360.0
            d = math.hypot(b.x - cue.x, b.y - cue.y)
            return ShotParams(min(2.0, 1.0 + d), alpha, 0.0, 0.0, 0.0)

        best_score = -math.inf
        best_shot = None
        from .rules.evaluators import evaluate_rules_arrays  # lazy: numba warmup
        for t, alpha in routes:
            for v in cfg.v_values:
                for be in cfg.beta_values:
                    for aa in cfg.a_values:
                        for bb in cfg.b_values:
                            shot = ShotParams(v, alpha, be, aa, bb)
                            post_pos, post_on, events, _, _, _ = \
                                simulate_arrays(pos, on, shot, self.spec)
                            pots = _own_potted(events, own_idx)
                            foul = _cue_potted(events)
                            if not foul:
                                n_ev, kinds, eas, ebs = (events[0], events[1],
                                                         events[2], events[3])
                                first = -1
                                for q in range(n_ev):
                                    if kinds[q] == 1 and (eas[q] == CUE
                                                          or ebs[q] == CUE):
                                        first = ebs[q] if eas[q] == CUE \
                                            else eas[q]
                                        break
                                if first < 0 or first in opp_idx:
                                    foul = True
                            r = evaluate_rules_arrays(
                                pos, on, post_pos, post_on, shot.as_array(),
                                _events_as_packed(events),
                                own_arr, opp_arr, self.spec)
                            d_coeff = (1.0 - r[13]) * (1.0 - r[14])
                            position = 0.0
                            if post_on[CUE]:
                                remaining = [i for i in own_idx if post_on[i]]
                                if remaining:
                                    cx, cy = self._grid_snap(
                                        post_pos[CUE, 0], post_pos[CUE, 1])
                                    dmin = min(math.hypot(
                                        post_pos[i, 0] - cx,
                                        post_pos[i, 1] - cy) for i in remaining)
                                    position = 1.0 - min(1.0, dmin / _DIAG)
                            score = (cfg.pot_score * pots * d_coeff
                                     + cfg.position_weight * position
                                     - cfg.foul_penalty * foul)
                            if score > best_score:
                                best_score = score
                                best_shot = shot
        return best_shot if best_shot is not None else NULL_SHOT


def _events_as_packed(events):
    n_ev, kinds, eas, ebs, et, ex, ey, _, _ = events
    return (n_ev, kinds[:n_ev], eas[:n_ev], ebs[:n_ev], ex[:n_ev], ey[:n_ev])


class SurrogateAgent:
    """K random candidates tuned by simulated annealing against the
    surrogate's expected value (no strategy or difficulty preference)."""

    name = "surrogate"

    def __init__(self, model, k: int = 3, steps: int = 300,
                 spec: TableSpec = DEFAULT_SPEC):
        if model is None:
            raise ModelMissing("surrogate agent needs a trained model")
        self.model = model
        self.k = k
        self.steps = steps
        self.spec = spec

    def select_shot(self, state: TableState, targets, seed: int) -> ShotParams:
        from .assistant.tuner import tune_shot_candidates
        own = [t for t in sorted(targets) if state.balls[t].on_table]
        if not own or not state.balls["cue"].on_table:
            return NULL_SHOT
        tuned = tune_shot_candidates(
            state, targets, self.model, strategy="none", difficulty="none",
            k=self.k, steps=self.steps, seed=seed, spec=self.spec)
        return tuned.shot


class AssistantAgent(SurrogateAgent):
    """Registry alias: the assistant's tuner acting as a bare agent."""

    name = "assistant"


class ExploringAgent:
    """Wraps an agent, replacing an epsilon fraction of its shots with
    uniform random draws.

    Data generated from a strong agent alone never demonstrates the bad
    regions of shot space (misses, scratches, wrong contacts), so a value
    model fit to it has nothing pushing those regions down. Used for
    training-data generation, not tournament play.
    """

    def __init__(self, inner, epsilon: float = 0.25):
        if not 0.0 <= epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")
        self.inner = inner
        self.epsilon = epsilon
        self.name = f"exploring-{inner.name}"

    def select_shot(self, state: TableState, targets, seed: int) -> ShotParams:
        rng = np.random.default_rng(np.random.SeedSequence((seed, 11)))
        if rng.random() < self.epsilon:
            return random_shot(rng)
        return self.inner.select_shot(state, targets, seed)


AGENT_NAMES = ("greedy", "poolmaster", "surrogate", "assistant")


def create_agent(name: str, model=None, config=None,
                 spec: TableSpec = DEFAULT_SPEC):
    if name == "greedy":
        return GreedyAgent(spec=spec)
    if name == "poolmaster":
        return PoolMasterAgent(config=config, spec=spec)
    if name == "surrogate":
        return SurrogateAgent(model, spec=spec)
    if name == "assistant":
        return AssistantAgent(model, spec=spec)
    raise KeyError(f"unknown agent: {name!r}")
