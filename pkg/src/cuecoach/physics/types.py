"""Domain types for the 3Pool table and shots.

Balls are indexed in lexicographic id order everywhere arrays are used;
that same order breaks ties when simultaneous events must be serialized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import InvalidState

# Canonical ball order (lexicographic). Index positions are load-bearing:
# the simulation kernel and the rule evaluators address balls by them.
BALL_IDS = ("black", "blue", "cue", "green", "pink", "red", "yellow")
BALL_INDEX = {name: i for i, name in enumerate(BALL_IDS)}
CUE = BALL_INDEX["cue"]

COLOUR_IDS = ("blue", "red", "yellow", "green", "black", "pink")
PLAYER1_TARGETS = frozenset({"blue", "red", "yellow"})
PLAYER2_TARGETS = frozenset({"green", "black", "pink"})

POCKET_IDS = ("lt", "rt", "lc", "rc", "lb", "rb")
POCKET_INDEX = {name: i for i, name in enumerate(POCKET_IDS)}
POCKET_XY = {
    "lt": (0.0, 2.0),
    "rt": (1.0, 2.0),
    "lc": (0.0, 1.0),
    "rc": (1.0, 1.0),
    "lb": (0.0, 0.0),
    "rb": (1.0, 0.0),
}
POCKET_ARRAY = np.array([POCKET_XY[p] for p in POCKET_IDS], dtype=np.float64)

OVERLAP_EPS = 1e-9

SHOT_BOUNDS = {
    "v": (0.0, 5.0),
    "alpha": (0.0, 360.0),
    "beta": (0.0, 90.0),
    "a": (-0.5, 0.5),
    "b": (-0.5, 0.5),
}


@dataclass(frozen=True)
class TableSpec:
    """Table geometry and dynamics constants, in table units (width = 1)."""

    width: float = 1.0
    length: float = 2.0
    ball_radius: float = 0.026
    pocket_radius: float = 0.052  # 2R capture disc, closed boundary
    mu_slide: float = 0.2
    mu_roll: float = 0.05
    e_ball: float = 0.95
    e_cushion: float = 0.85
    gravity: float = 9.81
    kappa_spin: float = 0.7  # sidespin retained per cushion contact
    spin_scale: float = 5.0  # k_s = k_t = spin_scale / R, per unit offset per unit speed
    rest_speed: float = 1e-3
    max_sim_time: float = 30.0
    frame_rate: float = 30.0

    def validate(self) -> None:
        if not (self.pocket_radius > self.ball_radius > 0):
            raise InvalidState("pocket radius must exceed ball radius")
        if not (0 < self.e_ball <= 1 and 0 < self.e_cushion <= 1):
            raise InvalidState("restitutions must lie in (0, 1]")
        if self.mu_slide <= 0 or self.mu_roll <= 0:
            raise InvalidState("friction coefficients must be positive")


DEFAULT_SPEC = TableSpec()


@dataclass(frozen=True)
class ShotParams:
    """theta = (v, alpha, beta, a, b).

    Out-of-range inputs are clamped (azimuth wraps modulo 360) and the
    instance is flagged, so noisy callers stay legal while direct user
    input can still surface the violation.
    """

    v: float
    alpha: float
    beta: float
    a: float
    b: float
    clamped: bool = False

    def __post_init__(self):
        clamped = self.clamped
        v, alpha, beta, a, b = self.v, self.alpha, self.beta, self.a, self.b
        if not (0.0 <= alpha < 360.0):
            alpha = alpha % 360.0
            clamped = True
        for name, value in (("v", v), ("beta", beta), ("a", a), ("b", b)):
            lo, hi = SHOT_BOUNDS[name]
            if not (lo <= value <= hi):
                clamped = True
        v = min(max(v, 0.0), 5.0)
        beta = min(max(beta, 0.0), 90.0)
        a = min(max(a, -0.5), 0.5)
        b = min(max(b, -0.5), 0.5)
        object.__setattr__(self, "v", float(v))
        object.__setattr__(self, "alpha", float(alpha))
        object.__setattr__(self, "beta", float(beta))
        object.__setattr__(self, "a", float(a))
        object.__setattr__(self, "b", float(b))
        object.__setattr__(self, "clamped", clamped)

    def as_array(self) -> np.ndarray:
        return np.array([self.v, self.alpha, self.beta, self.a, self.b])

    def normalized(self) -> np.ndarray:
        """Each parameter mapped onto [0, 1] by its bounds."""
        return np.array([
            self.v / 5.0,
            self.alpha / 360.0,
            self.beta / 90.0,
            self.a + 0.5,
            self.b + 0.5,
        ])

    def to_dict(self) -> dict:
        return {"v": self.v, "alpha": self.alpha, "beta": self.beta,
                "a": self.a, "b": self.b}

    @classmethod
    def from_dict(cls, d: dict) -> "ShotParams":
        return cls(v=float(d["v"]), alpha=float(d["alpha"]), beta=float(d["beta"]),
                   a=float(d["a"]), b=float(d["b"]))


@dataclass(frozen=True)
class BallState:
    x: float
    y: float
    on_table: bool = True


@dataclass
class TableState:
    """Positions and on-table flags for the cue ball and six colour balls."""

    balls: dict[str, BallState]

    def validate(self, spec: TableSpec = DEFAULT_SPEC) -> None:
        if set(self.balls) != set(BALL_IDS):
            raise InvalidState(
                f"state must contain exactly the balls {sorted(BALL_IDS)}")
        R = spec.ball_radius
        on = [(bid, b) for bid, b in self.balls.items() if b.on_table]

        def in_pocket(b: BallState) -> bool:
            return any(math.hypot(b.x - px, b.y - py) <= spec.pocket_radius
                       for px, py in POCKET_ARRAY)

        for bid, b in on:
            # A ball sitting in a pocket mouth is legal: it is captured at
            # the instant the next shot starts.
            if in_pocket(b):
                continue
            if not (R - 1e-9 <= b.x <= spec.width - R + 1e-9
                    and R - 1e-9 <= b.y <= spec.length - R + 1e-9):
                raise InvalidState(f"ball {bid} center out of bounds: "
                                   f"({b.x:.4f}, {b.y:.4f})")
        solid = [(bid, b) for bid, b in on if not in_pocket(b)]
        for i in range(len(solid)):
            for j in range(i + 1, len(solid)):
                d = math.hypot(solid[i][1].x - solid[j][1].x,
                               solid[i][1].y - solid[j][1].y)
                if d < 2 * R - OVERLAP_EPS:
                    raise InvalidState(
                        f"balls {solid[i][0]} and {solid[j][0]} overlap "
                        f"(d={d:.6f})")

    def copy(self) -> "TableState":
        return TableState(dict(self.balls))

    def on_table_ids(self) -> list[str]:
        return [bid for bid in BALL_IDS if self.balls[bid].on_table]

    def positions(self) -> np.ndarray:
        """(7, 2) array in canonical ball order."""
        return np.array([[self.balls[b].x, self.balls[b].y] for b in BALL_IDS])

    def on_mask(self) -> np.ndarray:
        return np.array([self.balls[b].on_table for b in BALL_IDS], dtype=np.bool_)

    @classmethod
    def from_arrays(cls, pos: np.ndarray, on: np.ndarray) -> "TableState":
        return cls({bid: BallState(float(pos[i, 0]), float(pos[i, 1]), bool(on[i]))
                    for i, bid in enumerate(BALL_IDS)})

    def to_dict(self) -> dict:
        return {"balls": {bid: {"x": b.x, "y": b.y, "on_table": b.on_table}
                          for bid, b in sorted(self.balls.items())}}

    @classmethod
    def from_dict(cls, d: dict) -> "TableState":
        balls = d.get("balls")
        if not isinstance(balls, dict):
            raise InvalidState("state JSON must have a 'balls' object")
        out = {}
        for bid, rec in balls.items():
            if bid not in BALL_INDEX:
                raise InvalidState(f"unknown ball id: {bid!r}")
            out[bid] = BallState(float(rec["x"]), float(rec["y"]),
                                 bool(rec.get("on_table", True)))
        state = cls(out)
        if set(out) != set(BALL_IDS):
            raise InvalidState(
                f"state must contain exactly the balls {sorted(BALL_IDS)}")
        return state


# Event kind codes. Numeric order doubles as the resolution priority for
# simultaneous events: pocket < ball-ball < cushion.
KIND_POCKET = 0
KIND_BALL_BALL = 1
KIND_CUSHION = 2


@dataclass(frozen=True)
class Event:
    """One simulation event: a ball-ball, ball-cushion, or ball-pocket contact."""

    kind: int
    ball1: str
    ball2: str | None
    pocket: str | None
    pos: tuple[float, float]
    t: float

    @property
    def text(self) -> str:
        if self.kind == KIND_BALL_BALL:
            return f"BALL-BALL-{self.ball1}-{self.ball2}"
        if self.kind == KIND_CUSHION:
            return f"BALL-CUSHION-{self.ball1}"
        return f"BALL-POCKET-{self.ball1}-{self.pocket}"

    def key(self) -> tuple:
        """Equality key for trace matching: kind plus ids, ball pairs unordered."""
        if self.kind == KIND_BALL_BALL:
            return (KIND_BALL_BALL,) + tuple(sorted((self.ball1, self.ball2)))
        if self.kind == KIND_CUSHION:
            return (KIND_CUSHION, self.ball1)
        return (KIND_POCKET, self.ball1, self.pocket)

    def to_dict(self) -> dict:
        return {"event": self.text, "x": self.pos[0], "y": self.pos[1], "t": self.t}


def ball_ball_event(b1: str, b2: str, pos=(0.0, 0.0), t=0.0) -> Event:
    return Event(KIND_BALL_BALL, b1, b2, None, pos, t)


def cushion_event(b: str, pos=(0.0, 0.0), t=0.0) -> Event:
    return Event(KIND_CUSHION, b, None, None, pos, t)


def pocket_event(b: str, pocket: str, pos=(0.0, 0.0), t=0.0) -> Event:
    return Event(KIND_POCKET, b, None, pocket, pos, t)


def parse_event_token(token: str) -> Event | None:
    """Parse one textual event token; None when it is not a valid event.

    Accepts any case and surrounding whitespace; ids must be known.
    """
    parts = token.strip().split("-")
    if len(parts) < 3:
        return None
    head = (parts[0] + "-" + parts[1]).upper()
    if head == "BALL-BALL" and len(parts) == 4:
        b1, b2 = parts[2].lower(), parts[3].lower()
        if b1 in BALL_INDEX and b2 in BALL_INDEX and b1 != b2:
            return ball_ball_event(b1, b2)
    elif head == "BALL-CUSHION" and len(parts) == 3:
        b = parts[2].lower()
        if b in BALL_INDEX:
            return cushion_event(b)
    elif head == "BALL-POCKET" and len(parts) == 4:
        b, p = parts[2].lower(), parts[3].lower()
        if b in BALL_INDEX and p in POCKET_INDEX:
            return pocket_event(b, p)
    return None


def encode_trace(events: list[Event]) -> str:
    return ", ".join(e.text for e in events)


@dataclass(frozen=True)
class BallKinematics:
    """Linear velocity (2D) and angular velocity (x, y, z axes; z vertical)."""

    velocity: tuple[float, float]
    spin: tuple[float, float, float]


@dataclass
class Frame:
    t: float
    state: TableState

    def to_dict(self) -> dict:
        return {"t": self.t, **self.state.to_dict()}


@dataclass
class SimResult:
    post: TableState
    trace: list[Event]
    frames: list[Frame]
    truncated: bool
    sim_time: float

    def to_dict(self, include_frames: bool = True) -> dict:
        d = {
            "post_state": self.post.to_dict(),
            "trace": [e.to_dict() for e in self.trace],
            "truncated": self.truncated,
            "sim_time": self.sim_time,
        }
        if include_frames:
            d["frames"] = [f.to_dict() for f in self.frames]
        return d
