"""Shot execution: cue impulse, kernel dispatch, frames, and the
single-contact resolution rules exposed on their own for testing."""
from __future__ import annotations

import math

import numpy as np

from .types import (
    BALL_IDS,
    BALL_INDEX,
    BallState,
    CUE,
    DEFAULT_SPEC,
    Event,
    Frame,
    POCKET_ARRAY,
    POCKET_IDS,
    ShotParams,
    SimResult,
    TableSpec,
    TableState,
    ball_ball_event,
    cushion_event,
    pocket_event,
)
from .kernel import EV_BALL, EV_CUSHION, simulate_kernel

_WALL_POCKET = None  # placeholder to keep imports explicit


def cue_impulse(shot: ShotParams, spec: TableSpec = DEFAULT_SPEC):
    """Initial cue-ball kinematics (u, omega) for a strike.

    Elevation beta diverts cos(beta) of the stick speed into the table
    plane; tip offsets a (side) and b (top/bottom) become angular rates
    through the spin_scale / R gearing.
    """
    v = shot.v
    al = math.radians(shot.alpha)
    be = math.radians(shot.beta)
    ca, sa = math.cos(al), math.sin(al)
    u = np.array([v * math.cos(be) * ca, v * math.cos(be) * sa])
    k = spec.spin_scale / spec.ball_radius
    w_side = k * shot.a * v
    w_top = k * shot.b * v * (1.0 + math.sin(be))
    omega = np.array([-w_top * sa, w_top * ca, w_side])
    return u, omega


def resolve_ball_ball(u1, u2, normal, e: float):
    """Post-contact velocities for two equal-mass balls.

    `normal` points from ball 1 to ball 2. Only the approaching normal
    component is exchanged; tangential motion and spins are untouched.
    """
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    u1 = np.asarray(u1, dtype=float).copy()
    u2 = np.asarray(u2, dtype=float).copy()
    un1 = float(u1 @ n)
    un2 = float(u2 @ n)
    imp = 0.5 * (1.0 + e) * (un1 - un2)
    if imp > 0.0:
        u1 -= imp * n
        u2 += imp * n
    return u1, u2


def resolve_cushion(u, normal, e: float, omega_z: float = 0.0,
                    kappa: float = DEFAULT_SPEC.kappa_spin):
    """Reflect the wall-normal velocity component with restitution e.

    `normal` is the inward table normal of the cushion. Sidespin decays
    by kappa; the tangential velocity is returned unchanged.
    """
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    u = np.asarray(u, dtype=float).copy()
    un = float(u @ n)
    u -= (1.0 + e) * un * n
    # un' = -e * un along the normal; tangential part untouched
    return u, kappa * omega_z


def check_pocket(pos, spec: TableSpec = DEFAULT_SPEC):
    """Pocket id capturing a ball centred at pos, or None."""
    p = np.asarray(pos, dtype=float)
    for pid, centre in zip(POCKET_IDS, POCKET_ARRAY):
        if np.hypot(p[0] - centre[0], p[1] - centre[1]) <= spec.pocket_radius:
            return pid
    return None


def _state_to_arrays(state: TableState):
    pos = np.zeros((7, 2))
    on = np.zeros(7, dtype=np.bool_)
    for i, bid in enumerate(BALL_IDS):
        b = state.balls[bid]
        pos[i, 0] = b.x
        pos[i, 1] = b.y
        on[i] = b.on_table
    return pos, on


def simulate_arrays(pos, on, shot: ShotParams, spec: TableSpec = DEFAULT_SPEC):
    """Raw-array fast path used by game loops and the agents.

    Returns (pos1, on1, events-tuple, sim_time, truncated, segments-tuple).
    """
    u0 = np.zeros((7, 2))
    w0 = np.zeros((7, 3))
    if on[CUE]:
        u, omega = cue_impulse(shot, spec)
        u0[CUE] = u
        w0[CUE] = omega
    out = simulate_kernel(
        pos, on, u0, w0,
        spec.ball_radius, spec.pocket_radius, spec.mu_slide, spec.mu_roll,
        spec.gravity, spec.e_ball, spec.e_cushion, spec.kappa_spin,
        spec.rest_speed, spec.max_sim_time, spec.width, spec.length,
        POCKET_ARRAY,
    )
    pos1, on1 = out[0], out[1]
    sim_time, truncated = out[4], out[5]
    n_ev = out[6]
    events = (n_ev,) + out[7:15]
    segments = (out[15],) + out[16:]
    return pos1, on1, events, sim_time, truncated, segments


def events_from_arrays(events) -> list[Event]:
    n_ev, kind, a, b, t, x, y, _, _ = events
    out = []
    for q in range(n_ev):
        p = (float(x[q]), float(y[q]))
        if kind[q] == EV_BALL:
            out.append(ball_ball_event(BALL_IDS[a[q]], BALL_IDS[b[q]],
                                       p, float(t[q])))
        elif kind[q] == EV_CUSHION:
            out.append(cushion_event(BALL_IDS[a[q]], p, float(t[q])))
        else:
            out.append(pocket_event(BALL_IDS[a[q]], POCKET_IDS[b[q]],
                                    p, float(t[q])))
    return out


def frames_from_segments(segments, events, post_pos, post_on, sim_time,
                         spec: TableSpec = DEFAULT_SPEC) -> list:
    """Sample ball positions on the fixed frame grid from the recorded
    constant-acceleration segments. The last frame is pinned to the final
    state so playback ends exactly on the post state.
    """
    n_seg, ball, t0, t1, p, u, a, _, _ = segments
    if sim_time <= 0.0:
        times = np.array([0.0])
    else:
        n = int(math.floor(sim_time * spec.frame_rate)) + 1
        times = np.arange(n) / spec.frame_rate
        if times[-1] < sim_time - 1e-12:
            times = np.append(times, sim_time)
        else:
            times[-1] = sim_time

    nt = len(times)
    xs = np.zeros((nt, 7))
    ys = np.zeros((nt, 7))
    onf = np.zeros((nt, 7), dtype=bool)

    # Balls absent for the whole shot stay at their final (= initial) spot.
    for i in range(7):
        xs[:, i] = post_pos[i, 0]
        ys[:, i] = post_pos[i, 1]
        onf[:, i] = post_on[i]

    # A ball that started on the table is visible until its capture time.
    n_ev, kind, ea, eb, et, ex, ey, _, _ = events
    capture_t = {}
    for q in range(n_ev):
        if kind[q] == 0:
            capture_t[int(ea[q])] = float(et[q])

    for s in range(n_seg):
        i = int(ball[s])
        lo = np.searchsorted(times, t0[s] - 1e-12, side="left")
        hi = np.searchsorted(times, t1[s] + 1e-12, side="right")
        if hi <= lo:
            continue
        dt = times[lo:hi] - t0[s]
        xs[lo:hi, i] = p[s, 0] + u[s, 0] * dt + 0.5 * a[s, 0] * dt * dt
        ys[lo:hi, i] = p[s, 1] + u[s, 1] * dt + 0.5 * a[s, 1] * dt * dt
        onf[lo:hi, i] = True

    for i, tc in capture_t.items():
        gone = times > tc + 1e-12
        onf[gone, i] = False

    # Pin the terminal frame to the exact post state.
    xs[-1] = post_pos[:, 0]
    ys[-1] = post_pos[:, 1]
    onf[-1] = post_on

    frames = []
    for q in range(nt):
        balls = {}
        for i, bid in enumerate(BALL_IDS):
            balls[bid] = BallState(float(xs[q, i]), float(ys[q, i]),
                                   bool(onf[q, i]))
        frames.append(Frame(t=float(times[q]), state=TableState(balls=balls)))
    return frames


def strike_and_trace(state: TableState, shot: ShotParams,
                     spec: TableSpec = DEFAULT_SPEC,
                     want_frames: bool = False) -> SimResult:
    """Simulate one shot from `state` and return the post state, the
    ordered event trace, and (optionally) 30 fps playback frames."""
    state.validate(spec)
    pos, on = _state_to_arrays(state)
    pos1, on1, events, sim_time, truncated, segments = simulate_arrays(
        pos, on, shot, spec)
    post = TableState.from_arrays(pos1, on1)
    trace = events_from_arrays(events)
    frames = None
    if want_frames:
        frames = frames_from_segments(segments, events, pos1, on1,
                                      sim_time, spec)
    return SimResult(post=post, trace=trace, frames=frames,
                     truncated=bool(truncated), sim_time=float(sim_time))


def energy_audit(events):
    """(ke_before, ke_after) pairs per event, for conservation checks."""
    n_ev = events[0]
    ke0 = events[7]
    ke1 = events[8]
    return [(float(ke0[q]), float(ke1[q])) for q in range(n_ev)]
