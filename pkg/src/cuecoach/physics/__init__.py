"""Table model, shot parameters, and the event-driven simulator."""
from .types import (
    BALL_IDS,
    BALL_INDEX,
    COLOUR_IDS,
    CUE,
    DEFAULT_SPEC,
    Event,
    Frame,
    KIND_BALL_BALL,
    KIND_CUSHION,
    KIND_POCKET,
    PLAYER1_TARGETS,
    PLAYER2_TARGETS,
    POCKET_ARRAY,
    POCKET_IDS,
    POCKET_INDEX,
    POCKET_XY,
    SHOT_BOUNDS,
    BallState,
    ShotParams,
    SimResult,
    TableSpec,
    TableState,
    ball_ball_event,
    cushion_event,
    encode_trace,
    parse_event_token,
    pocket_event,
)
from .engine import (
    check_pocket,
    cue_impulse,
    energy_audit,
    events_from_arrays,
    frames_from_segments,
    resolve_ball_ball,
    resolve_cushion,
    simulate_arrays,
    strike_and_trace,
)

__all__ = [
    "BALL_IDS", "BALL_INDEX", "COLOUR_IDS", "CUE", "DEFAULT_SPEC",
    "Event", "Frame", "KIND_BALL_BALL", "KIND_CUSHION", "KIND_POCKET",
    "PLAYER1_TARGETS", "PLAYER2_TARGETS", "POCKET_ARRAY", "POCKET_IDS", "POCKET_INDEX",
    "POCKET_XY", "SHOT_BOUNDS", "BallState", "ShotParams", "SimResult", "TableSpec",
    "TableState", "ball_ball_event", "cushion_event", "encode_trace",
    "parse_event_token", "pocket_event", "check_pocket", "cue_impulse",
    "energy_audit", "events_from_arrays", "frames_from_segments",
    "resolve_ball_ball", "resolve_cushion", "simulate_arrays",
    "strike_and_trace",
]
