"""Event-driven rigid-ball kernel, compiled with numba.

Motion between contacts is piecewise constant-acceleration (slide, roll,
rest), so each phase is integrated in closed form. Contacts are located
on the exact quadratic arcs: cushions by direct quadratic solve, ball-ball
and pocket captures by Lipschitz-guarded marching on the squared-distance
quartic with bracketed bisection to polish roots. No fixed global step is
taken, which keeps a full shot in the tens-to-hundreds of iterations.

All arithmetic is sequential and branch-deterministic: identical inputs
give bit-identical outputs.
"""
import numpy as np
from numba import njit

# Phase codes
REST = 0
SLIDE = 1
ROLL = 2

# Event kind codes double as simultaneous-event priority (lower first).
EV_POCKET = 0
EV_BALL = 1
EV_CUSHION = 2

MAX_EVENTS = 2048
MAX_SEGMENTS = 16384
TIME_TIE = 1e-12
DT_LIN = 1e-3  # window width for near-contact analysis
BIG = 1e30


@njit(cache=True)
def _ke_total(on, u, w, R):
    ke = 0.0
    for i in range(7):
        if on[i]:
            ke += 0.5 * (u[i, 0] * u[i, 0] + u[i, 1] * u[i, 1])
            ke += (R * R / 5.0) * (w[i, 0] * w[i, 0] + w[i, 1] * w[i, 1]
                                   + w[i, 2] * w[i, 2])
    return ke


@njit(cache=True)
def _set_phase(i, t, pos, u, w, phase, A, dw, phase_end,
               mu_s, mu_r, g, R, rest_speed):
    """Recompute ball i's motion phase from its current kinematics."""
    sx = u[i, 0] - R * w[i, 1]
    sy = u[i, 1] + R * w[i, 0]
    smag = np.sqrt(sx * sx + sy * sy)
    if smag > 1e-9:
        # Sliding: contact-point slip fixes the friction direction.
        shx = sx / smag
        shy = sy / smag
        A[i, 0] = -mu_s * g * shx
        A[i, 1] = -mu_s * g * shy
        k = 2.5 * mu_s * g / R
        dw[i, 0] = -k * shy  # z-hat cross s-hat
        dw[i, 1] = k * shx
        phase[i] = SLIDE
        phase_end[i] = t + 2.0 * smag / (7.0 * mu_s * g)
        return
    speed = np.sqrt(u[i, 0] * u[i, 0] + u[i, 1] * u[i, 1])
    if speed > rest_speed:
        # Rolling: snap spin to the no-slip values, decay along the motion.
        w[i, 0] = -u[i, 1] / R
        w[i, 1] = u[i, 0] / R
        ux = u[i, 0] / speed
        uy = u[i, 1] / speed
        A[i, 0] = -mu_r * g * ux
        A[i, 1] = -mu_r * g * uy
        dw[i, 0] = -A[i, 1] / R
        dw[i, 1] = A[i, 0] / R
        phase[i] = ROLL
        phase_end[i] = t + speed / (mu_r * g)
        return
    u[i, 0] = 0.0
    u[i, 1] = 0.0
    w[i, 0] = 0.0
    w[i, 1] = 0.0
    w[i, 2] = 0.0
    A[i, 0] = 0.0
    A[i, 1] = 0.0
    dw[i, 0] = 0.0
    dw[i, 1] = 0.0
    phase[i] = REST
    phase_end[i] = BIG


@njit(cache=True)
def _contain(pos, on, u, R, width, length, zero_normal):
    """Project numerically escaped balls back onto the cushion lines.

    Pocket capture always fires strictly inside the bounds, so an
    on-table center past a wall is integration error, never a real
    trajectory; the projection only ever removes energy.
    """
    for i in range(7):
        if not on[i]:
            continue
        if pos[i, 0] < R - 1e-12:
            pos[i, 0] = R
            if zero_normal and u[i, 0] < 0.0:
                u[i, 0] = 0.0
        elif pos[i, 0] > width - R + 1e-12:
            pos[i, 0] = width - R
            if zero_normal and u[i, 0] > 0.0:
                u[i, 0] = 0.0
        if pos[i, 1] < R - 1e-12:
            pos[i, 1] = R
            if zero_normal and u[i, 1] < 0.0:
                u[i, 1] = 0.0
        elif pos[i, 1] > length - R + 1e-12:
            pos[i, 1] = length - R
            if zero_normal and u[i, 1] > 0.0:
                u[i, 1] = 0.0


@njit(cache=True)
def _advance(i, dt, pos, u, w, A, dw):
    pos[i, 0] += u[i, 0] * dt + 0.5 * A[i, 0] * dt * dt
    pos[i, 1] += u[i, 1] * dt + 0.5 * A[i, 1] * dt * dt
    u[i, 0] += A[i, 0] * dt
    u[i, 1] += A[i, 1] * dt
    w[i, 0] += dw[i, 0] * dt
    w[i, 1] += dw[i, 1] * dt


@njit(cache=True)
def _quartic_eval(c0, c1, c2, c3, c4, t):
    return c0 + t * (c1 + t * (c2 + t * (c3 + t * c4)))


@njit(cache=True)
def _quartic_deriv(c1, c2, c3, c4, t):
    return c1 + t * (2.0 * c2 + t * (3.0 * c3 + t * 4.0 * c4))


@njit(cache=True)
def _bisect_root(c0, c1, c2, c3, c4, lo, hi):
    """Root of the quartic in [lo, hi] given f(lo) > 0 >= f(hi)."""
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if _quartic_eval(c0, c1, c2, c3, c4, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


@njit(cache=True)
def _cbrt(x):
    if x >= 0.0:
        return x ** (1.0 / 3.0)
    return -((-x) ** (1.0 / 3.0))


@njit(cache=True)
def _crit_points(c1, c2, c3, c4, h, out):
    """Ascending real roots of f'(tau) = c1 + 2 c2 tau + 3 c3 tau^2
    + 4 c4 tau^3 inside (0, h), Newton-polished. Returns the count.

    Degenerate leading coefficients fall through to the quadratic/linear
    cases scale-aware, so a vanishing relative acceleration never divides
    the solve by ~0 (the same failure mode the wall solver guards against).
    """
    a = 4.0 * c4
    b = 3.0 * c3
    c = 2.0 * c2
    d = c1
    n = 0
    scale_q = abs(b) * h * h + abs(c) * h + abs(d)
    if a == 0.0 or abs(a) * h * h * h <= 1e-12 * scale_q:
        scale_l = abs(c) * h + abs(d)
        if b == 0.0 or abs(b) * h * h <= 1e-12 * scale_l:
            if c != 0.0:
                r = -d / c
                if 0.0 < r < h:
                    out[n] = r
                    n += 1
            return n
        disc = c * c - 4.0 * b * d
        if disc < 0.0:
            return n
        sq = np.sqrt(disc)
        if c >= 0.0:
            q = -0.5 * (c + sq)
        else:
            q = -0.5 * (c - sq)
        r1 = q / b
        r2 = d / q if q != 0.0 else r1
        if r2 < r1:
            tmp = r1
            r1 = r2
            r2 = tmp
        if 0.0 < r1 < h:
            out[n] = r1
            n += 1
        if r2 != r1 and 0.0 < r2 < h:
            out[n] = r2
            n += 1
        return n

    # true cubic: depress with x = t - B/3
    inv = 1.0 / a
    B = b * inv
    C = c * inv
    D = d * inv
    shift = B / 3.0
    p = C - B * B / 3.0
    q = D - B * C / 3.0 + 2.0 * B * B * B / 27.0
    nr = 0
    x0 = 0.0
    x1 = 0.0
    x2 = 0.0
    if p == 0.0 and q == 0.0:
        x0 = 0.0
        nr = 1
    else:
        disc = 0.25 * q * q + p * p * p / 27.0
        if disc > 0.0:
            # one real root; pair the cube roots to dodge cancellation
            sq = np.sqrt(disc)
            u3 = -0.5 * q + sq
            v3 = -0.5 * q - sq
            if abs(u3) >= abs(v3):
                cu = _cbrt(u3)
                x0 = cu - p / (3.0 * cu) if cu != 0.0 else _cbrt(v3)
            else:
                cv = _cbrt(v3)
                x0 = cv - p / (3.0 * cv) if cv != 0.0 else _cbrt(u3)
            nr = 1
        else:
            m = 2.0 * np.sqrt(-p / 3.0)
            arg = 3.0 * q / (p * m)
            if arg > 1.0:
                arg = 1.0
            elif arg < -1.0:
                arg = -1.0
            phi = np.arccos(arg) / 3.0
            x0 = m * np.cos(phi)
            x1 = m * np.cos(phi - 2.0943951023931953)
            x2 = m * np.cos(phi - 4.1887902047863905)
            nr = 3
    for k in range(nr):
        if k == 0:
            x = x0 - shift
        elif k == 1:
            x = x1 - shift
        else:
            x = x2 - shift
        for _ in range(4):
            fx = d + x * (c + x * (b + x * a))
            dfx = c + x * (2.0 * b + 3.0 * a * x)
            if dfx == 0.0:
                break
            x -= fx / dfx
        if 0.0 < x < h:
            dup = False
            for s in range(n):
                if abs(out[s] - x) <= 1e-12:
                    dup = True
                    break
            if not dup:
                out[n] = x
                n += 1
    # insertion sort (n <= 3)
    for i in range(1, n):
        key = out[i]
        j = i - 1
        while j >= 0 and out[j] > key:
            out[j + 1] = out[j]
            j -= 1
        out[j + 1] = key
    return n


@njit(cache=True)
def _first_entry(px, py, vx, vy, bx, by, r2, h):
    """Earliest time in [0, h] at which the arc P + V t + B t^2 enters
    the disc |.| <= sqrt(r2). Returns h + 1 when there is none.

    P is the offset at t=0, B the half relative acceleration. f is a
    quartic in t, monotone between the critical points of f', so one
    evaluation per interval finds every sign change exactly.
    """
    c0 = px * px + py * py - r2
    c1 = 2.0 * (px * vx + py * vy)
    c2 = vx * vx + vy * vy + 2.0 * (px * bx + py * by)
    c3 = 2.0 * (vx * bx + vy * by)
    c4 = bx * bx + by * by
    none = h + 1.0

    start = 0.0
    if c0 <= 0.0:
        # Touching at the window start: immediate only if approaching.
        if _quartic_deriv(c1, c2, c3, c4, 0.0) < 0.0:
            return 0.0
        start = DT_LIN  # skip past the residual contact
        if start >= h:
            return none
        if _quartic_eval(c0, c1, c2, c3, c4, start) <= 0.0:
            return start

    crit = np.empty(3)
    nc = _crit_points(c1, c2, c3, c4, h, crit)
    prev = start
    for idx in range(nc + 1):
        nxt = crit[idx] if idx < nc else h
        if nxt <= prev:
            continue
        if _quartic_eval(c0, c1, c2, c3, c4, nxt) <= 0.0:
            return _bisect_root(c0, c1, c2, c3, c4, prev, nxt)
        prev = nxt
    return none


@njit(cache=True)
def _wall_toi(p, v, a, bound, into_positive, h):
    """Earliest t in (0, h] with p(t) = bound while moving into the wall.

    into_positive: the wall's inward normal points toward +axis (low walls).
    Solves 0.5 a t^2 + v t + c = 0 in the cancellation-free q-form, which
    stays exact as a -> 0 (tiny slide accelerations are common).
    """
    none = h + 1.0
    c = p - bound
    # At (or numerically past) the wall and still moving in: immediate
    # re-contact. The quadratic roots sit at t <= 0 here, so this case
    # would otherwise go undetected and the ball integrates through the
    # cushion (low-speed pinned balls hit it after a bounce cascade).
    if into_positive:
        if c <= 1e-12 and v < -1e-9:
            return 0.0
    else:
        if c >= -1e-12 and v > 1e-9:
            return 0.0
    half_a = 0.5 * a
    disc = v * v - 2.0 * a * c
    if disc < 0.0:
        return none
    sq = np.sqrt(disc)
    if v >= 0.0:
        q = -0.5 * (v + sq)
    else:
        q = -0.5 * (v - sq)
    best = none
    for which in range(2):
        if which == 0:
            if half_a == 0.0:
                continue
            t = q / half_a
        else:
            if q == 0.0:
                continue
            t = c / q
        if 1e-15 < t <= h:
            vel = v + a * t
            if (into_positive and vel < 0.0) or ((not into_positive) and vel > 0.0):
                if t < best:
                    best = t
    return best


@njit(cache=True)
def simulate_kernel(pos0, on0, u0, w0,
                    R, r_p, mu_s, mu_r, g, e_bb, e_c, kappa, rest_speed,
                    t_max, width, length, pockets):
    """Run one shot to rest (or t_max). Returns packed events, segments,
    final kinematic state, and status flags.
    """
    pos = pos0.copy()
    on = on0.copy()
    u = u0.copy()
    w = w0.copy()

    phase = np.zeros(7, dtype=np.int64)
    A = np.zeros((7, 2))
    dw = np.zeros((7, 2))
    phase_end = np.full(7, BIG)

    # empty, not zeros: only [0:n_ev]/[0:n_seg] are ever written and read,
    # and zeroing ~2 MB per call would dominate short simulations
    ev_kind = np.empty(MAX_EVENTS, dtype=np.int64)
    ev_a = np.empty(MAX_EVENTS, dtype=np.int64)
    ev_b = np.empty(MAX_EVENTS, dtype=np.int64)
    ev_t = np.empty(MAX_EVENTS)
    ev_x = np.empty(MAX_EVENTS)
    ev_y = np.empty(MAX_EVENTS)
    ev_ke0 = np.empty(MAX_EVENTS)
    ev_ke1 = np.empty(MAX_EVENTS)
    n_ev = 0

    seg_ball = np.empty(MAX_SEGMENTS, dtype=np.int64)
    seg_t0 = np.empty(MAX_SEGMENTS)
    seg_t1 = np.empty(MAX_SEGMENTS)
    seg_p = np.empty((MAX_SEGMENTS, 2))
    seg_u = np.empty((MAX_SEGMENTS, 2))
    seg_a = np.empty((MAX_SEGMENTS, 2))
    seg_w = np.empty((MAX_SEGMENTS, 3))
    seg_dw = np.empty((MAX_SEGMENTS, 2))
    n_seg = 0
    open_seg = np.full(7, -1, dtype=np.int64)

    t = 0.0
    truncated = False

    # t = 0 sweep: balls already inside a capture disc are potted outright.
    for i in range(7):
        if not on[i]:
            continue
        best_d2 = BIG
        best_pk = -1
        for k in range(6):
            dx = pos[i, 0] - pockets[k, 0]
            dy = pos[i, 1] - pockets[k, 1]
            d2 = dx * dx + dy * dy
            if d2 <= r_p * r_p and d2 < best_d2:
                best_d2 = d2
                best_pk = k
        if best_pk >= 0 and n_ev < MAX_EVENTS:
            ke0 = _ke_total(on, u, w, R)
            ev_kind[n_ev] = EV_POCKET
            ev_a[n_ev] = i
            ev_b[n_ev] = best_pk
            ev_t[n_ev] = 0.0
            ev_x[n_ev] = pos[i, 0]
            ev_y[n_ev] = pos[i, 1]
            on[i] = False
            u[i, 0] = 0.0
            u[i, 1] = 0.0
            w[i, 0] = 0.0
            w[i, 1] = 0.0
            w[i, 2] = 0.0
            pos[i, 0] = pockets[best_pk, 0]
            pos[i, 1] = pockets[best_pk, 1]
            ev_ke0[n_ev] = ke0
            ev_ke1[n_ev] = _ke_total(on, u, w, R)
            n_ev += 1

    for i in range(7):
        if on[i]:
            _set_phase(i, t, pos, u, w, phase, A, dw, phase_end,
                       mu_s, mu_r, g, R, rest_speed)
            if n_seg < MAX_SEGMENTS:
                open_seg[i] = n_seg
                seg_ball[n_seg] = i
                seg_t0[n_seg] = t
                seg_p[n_seg, 0] = pos[i, 0]
                seg_p[n_seg, 1] = pos[i, 1]
                seg_u[n_seg, 0] = u[i, 0]
                seg_u[n_seg, 1] = u[i, 1]
                seg_a[n_seg, 0] = A[i, 0]
                seg_a[n_seg, 1] = A[i, 1]
                seg_w[n_seg, 0] = w[i, 0]
                seg_w[n_seg, 1] = w[i, 1]
                seg_w[n_seg, 2] = w[i, 2]
                seg_dw[n_seg, 0] = dw[i, 0]
                seg_dw[n_seg, 1] = dw[i, 1]
                n_seg += 1

    four_r2 = 4.0 * R * R
    rp2 = r_p * r_p
    reach = np.zeros(7)
    guard = 0

    while True:
        guard += 1
        if guard > 400000 or n_ev >= MAX_EVENTS - 8 or n_seg >= MAX_SEGMENTS - 16:
            truncated = True
            break

        any_moving = False
        horizon = t_max
        for i in range(7):
            if on[i] and phase[i] != REST:
                any_moving = True
                if phase_end[i] < horizon:
                    horizon = phase_end[i]
        if not any_moving:
            break
        if t >= t_max:
            truncated = True
            break
        if horizon > t_max:
            horizon = t_max
        h = horizon - t
        if h < 0.0:
            h = 0.0

        # Find the earliest contact within (t, t + h].
        best_t = h + 1.0
        best_kind = 99
        best_i = -1
        best_j = -1

        # per-ball reach bound over this horizon: |u| h + 0.5 |A| h^2
        for i in range(7):
            reach[i] = (np.sqrt(u[i, 0] * u[i, 0] + u[i, 1] * u[i, 1]) * h
                        + 0.5 * np.sqrt(A[i, 0] * A[i, 0]
                                        + A[i, 1] * A[i, 1]) * h * h)

        for i in range(7):
            if not on[i] or phase[i] == REST:
                continue
            # cushions: x low/high, y low/high (fixed order for tie-breaks)
            for wall in range(4):
                if wall == 0:
                    toi = _wall_toi(pos[i, 0], u[i, 0], A[i, 0], R, True, h)
                elif wall == 1:
                    toi = _wall_toi(pos[i, 0], u[i, 0], A[i, 0], width - R, False, h)
                elif wall == 2:
                    toi = _wall_toi(pos[i, 1], u[i, 1], A[i, 1], R, True, h)
                else:
                    toi = _wall_toi(pos[i, 1], u[i, 1], A[i, 1], length - R, False, h)
                if toi <= h:
                    better = False
                    if toi < best_t - TIME_TIE:
                        better = True
                    elif abs(toi - best_t) <= TIME_TIE:
                        if (EV_CUSHION < best_kind
                            or (EV_CUSHION == best_kind
                                and (i < best_i or (i == best_i and wall < best_j)))):
                            better = True
                    if better:
                        best_t = toi
                        best_kind = EV_CUSHION
                        best_i = i
                        best_j = wall
            # pockets
            for k in range(6):
                dx = pos[i, 0] - pockets[k, 0]
                dy = pos[i, 1] - pockets[k, 1]
                if np.sqrt(dx * dx + dy * dy) - r_p > reach[i]:
                    continue  # unreachable this horizon
                toi = _first_entry(dx, dy,
                                   u[i, 0], u[i, 1], 0.5 * A[i, 0], 0.5 * A[i, 1],
                                   rp2, h)
                if toi <= h:
                    better = False
                    if toi < best_t - TIME_TIE:
                        better = True
                    elif abs(toi - best_t) <= TIME_TIE:
                        if (EV_POCKET < best_kind
                            or (EV_POCKET == best_kind
                                and (i < best_i or (i == best_i and k < best_j)))):
                            better = True
                    if better:
                        best_t = toi
                        best_kind = EV_POCKET
                        best_i = i
                        best_j = k

        for i in range(7):
            if not on[i]:
                continue
            for j in range(i + 1, 7):
                if not on[j]:
                    continue
                if phase[i] == REST and phase[j] == REST:
                    continue
                dx = pos[j, 0] - pos[i, 0]
                dy = pos[j, 1] - pos[i, 1]
                if np.sqrt(dx * dx + dy * dy) - 2.0 * R > reach[i] + reach[j]:
                    continue  # gap exceeds the pair's combined reach
                toi = _first_entry(dx, dy,
                                   u[j, 0] - u[i, 0], u[j, 1] - u[i, 1],
                                   0.5 * (A[j, 0] - A[i, 0]),
                                   0.5 * (A[j, 1] - A[i, 1]),
                                   four_r2, h)
                if toi <= h:
                    better = False
                    if toi < best_t - TIME_TIE:
                        better = True
                    elif abs(toi - best_t) <= TIME_TIE:
                        if (EV_BALL < best_kind
                            or (EV_BALL == best_kind
                                and (i < best_i or (i == best_i and j < best_j)))):
                            better = True
                    if better:
                        best_t = toi
                        best_kind = EV_BALL
                        best_i = i
                        best_j = j

        if best_t > h:
            # No contact before the horizon: advance and switch phases.
            for i in range(7):
                if on[i] and phase[i] != REST:
                    _advance(i, h, pos, u, w, A, dw)
            # No ball here can be moving wallward at the bound (that is a
            # contact and would have been detected), so zeroing is safe.
            _contain(pos, on, u, R, width, length, True)
            t = horizon
            for i in range(7):
                if on[i] and phase[i] != REST and phase_end[i] <= t + 1e-12:
                    if open_seg[i] >= 0:
                        seg_t1[open_seg[i]] = t
                    _set_phase(i, t, pos, u, w, phase, A, dw, phase_end,
                               mu_s, mu_r, g, R, rest_speed)
                    if n_seg < MAX_SEGMENTS:
                        open_seg[i] = n_seg
                        seg_ball[n_seg] = i
                        seg_t0[n_seg] = t
                        seg_p[n_seg, 0] = pos[i, 0]
                        seg_p[n_seg, 1] = pos[i, 1]
                        seg_u[n_seg, 0] = u[i, 0]
                        seg_u[n_seg, 1] = u[i, 1]
                        seg_a[n_seg, 0] = A[i, 0]
                        seg_a[n_seg, 1] = A[i, 1]
                        seg_w[n_seg, 0] = w[i, 0]
                        seg_w[n_seg, 1] = w[i, 1]
                        seg_w[n_seg, 2] = w[i, 2]
                        seg_dw[n_seg, 0] = dw[i, 0]
                        seg_dw[n_seg, 1] = dw[i, 1]
                        n_seg += 1
                    else:
                        open_seg[i] = -1
            continue

        # Advance everyone to the contact instant and resolve it.
        for i in range(7):
            if on[i] and phase[i] != REST:
                _advance(i, best_t, pos, u, w, A, dw)
        t += best_t

        ke0 = _ke_total(on, u, w, R)
        evx = 0.0
        evy = 0.0

        if best_kind == EV_BALL:
            i = best_i
            j = best_j
            nx = pos[j, 0] - pos[i, 0]
            ny = pos[j, 1] - pos[i, 1]
            d = np.sqrt(nx * nx + ny * ny)
            if d > 0.0:
                nx /= d
                ny /= d
            else:
                nx = 1.0
                ny = 0.0
            # Project to exact contact so the overlap invariant holds.
            corr = 0.5 * (2.0 * R - d)
            pos[i, 0] -= corr * nx
            pos[i, 1] -= corr * ny
            pos[j, 0] += corr * nx
            pos[j, 1] += corr * ny
            uni = u[i, 0] * nx + u[i, 1] * ny
            unj = u[j, 0] * nx + u[j, 1] * ny
            imp = 0.5 * (1.0 + e_bb) * (uni - unj)
            if imp > 0.0:
                u[i, 0] -= imp * nx
                u[i, 1] -= imp * ny
                u[j, 0] += imp * nx
                u[j, 1] += imp * ny
            evx = 0.5 * (pos[i, 0] + pos[j, 0])
            evy = 0.5 * (pos[i, 1] + pos[j, 1])
            # Aggressor named first: larger speed toward the other ball.
            if uni >= -unj:
                ea, eb = i, j
            else:
                ea, eb = j, i
            ev_kind[n_ev] = EV_BALL
            ev_a[n_ev] = ea
            ev_b[n_ev] = eb
            for bi in (i, j):
                if open_seg[bi] >= 0:
                    seg_t1[open_seg[bi]] = t
                _set_phase(bi, t, pos, u, w, phase, A, dw, phase_end,
                           mu_s, mu_r, g, R, rest_speed)
                if n_seg < MAX_SEGMENTS:
                    open_seg[bi] = n_seg
                    seg_ball[n_seg] = bi
                    seg_t0[n_seg] = t
                    seg_p[n_seg, 0] = pos[bi, 0]
                    seg_p[n_seg, 1] = pos[bi, 1]
                    seg_u[n_seg, 0] = u[bi, 0]
                    seg_u[n_seg, 1] = u[bi, 1]
                    seg_a[n_seg, 0] = A[bi, 0]
                    seg_a[n_seg, 1] = A[bi, 1]
                    seg_w[n_seg, 0] = w[bi, 0]
                    seg_w[n_seg, 1] = w[bi, 1]
                    seg_w[n_seg, 2] = w[bi, 2]
                    seg_dw[n_seg, 0] = dw[bi, 0]
                    seg_dw[n_seg, 1] = dw[bi, 1]
                    n_seg += 1
                else:
                    open_seg[bi] = -1
        elif best_kind == EV_CUSHION:
            i = best_i
            wall = best_j
            if wall == 0:
                pos[i, 0] = R
                u[i, 0] = -e_c * u[i, 0]
            elif wall == 1:
                pos[i, 0] = width - R
                u[i, 0] = -e_c * u[i, 0]
            elif wall == 2:
                pos[i, 1] = R
                u[i, 1] = -e_c * u[i, 1]
            else:
                pos[i, 1] = length - R
                u[i, 1] = -e_c * u[i, 1]
            w[i, 2] *= kappa
            # Sub-threshold rebounds capture against the cushion: the
            # normal velocity dies, along with the spin component whose
            # slip would keep grinding the ball into the wall (otherwise
            # the bounce cascade never terminates).
            if wall <= 1:
                if abs(u[i, 0]) < rest_speed:
                    u[i, 0] = 0.0
                    w[i, 1] = 0.0
            else:
                if abs(u[i, 1]) < rest_speed:
                    u[i, 1] = 0.0
                    w[i, 0] = 0.0
            evx = pos[i, 0]
            evy = pos[i, 1]
            ev_kind[n_ev] = EV_CUSHION
            ev_a[n_ev] = i
            ev_b[n_ev] = wall
            if open_seg[i] >= 0:
                seg_t1[open_seg[i]] = t
            _set_phase(i, t, pos, u, w, phase, A, dw, phase_end,
                       mu_s, mu_r, g, R, rest_speed)
            if n_seg < MAX_SEGMENTS:
                open_seg[i] = n_seg
                seg_ball[n_seg] = i
                seg_t0[n_seg] = t
                seg_p[n_seg, 0] = pos[i, 0]
                seg_p[n_seg, 1] = pos[i, 1]
                seg_u[n_seg, 0] = u[i, 0]
                seg_u[n_seg, 1] = u[i, 1]
                seg_a[n_seg, 0] = A[i, 0]
                seg_a[n_seg, 1] = A[i, 1]
                seg_w[n_seg, 0] = w[i, 0]
                seg_w[n_seg, 1] = w[i, 1]
                seg_w[n_seg, 2] = w[i, 2]
                seg_dw[n_seg, 0] = dw[i, 0]
                seg_dw[n_seg, 1] = dw[i, 1]
                n_seg += 1
            else:
                open_seg[i] = -1
        else:  # EV_POCKET
            i = best_i
            k = best_j
            evx = pos[i, 0]
            evy = pos[i, 1]
            ev_kind[n_ev] = EV_POCKET
            ev_a[n_ev] = i
            ev_b[n_ev] = k
            if open_seg[i] >= 0:
                seg_t1[open_seg[i]] = t
                open_seg[i] = -1
            on[i] = False
            phase[i] = REST
            phase_end[i] = BIG
            u[i, 0] = 0.0
            u[i, 1] = 0.0
            w[i, 0] = 0.0
            w[i, 1] = 0.0
            w[i, 2] = 0.0
            A[i, 0] = 0.0
            A[i, 1] = 0.0
            pos[i, 0] = pockets[k, 0]
            pos[i, 1] = pockets[k, 1]

        ev_t[n_ev] = t
        ev_x[n_ev] = evx
        ev_y[n_ev] = evy
        ev_ke0[n_ev] = ke0
        ev_ke1[n_ev] = _ke_total(on, u, w, R)
        n_ev += 1
        # Position-only here: a second ball pushed over a bound by the
        # overlap projection may still be owed a bounce next iteration,
        # so its wallward velocity must survive.
        _contain(pos, on, u, R, width, length, False)

    # Close any open segments at the final time.
    for i in range(7):
        if open_seg[i] >= 0:
            seg_t1[open_seg[i]] = t

    return (pos, on, u, w, t, truncated,
            n_ev, ev_kind, ev_a, ev_b, ev_t, ev_x, ev_y, ev_ke0, ev_ke1,
            n_seg, seg_ball, seg_t0, seg_t1, seg_p, seg_u, seg_a, seg_w, seg_dw)
