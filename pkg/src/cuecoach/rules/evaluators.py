"""Numeric evaluators for the 29 rules.

Value rules (1-13) read the table the shot leaves behind, from the
shooter's perspective; difficulty rules (14-29) read the starting layout,
the shot parameters, and the event trace. Everything is computed in one
numba kernel over packed arrays so the annealer can afford thousands of
evaluations per call.

The formulas are normalized counts and saturating exponentials chosen to
track each rule's prose description; they are documented in the generated
catalog entry by entry.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ..physics import (
    BALL_IDS,
    BALL_INDEX,
    CUE,
    DEFAULT_SPEC,
    Event,
    POCKET_ARRAY,
    ShotParams,
    TableSpec,
    TableState,
)
from ..physics.kernel import EV_BALL, EV_CUSHION, EV_POCKET
from .strategy import W_DEFENSIVE, W_OFFENSIVE
from .texts import N_RULES, RULE_TEXTS, rule_category

_DIAG = np.sqrt(5.0)  # 1 x 2 table diagonal
_GROUP_DIST = 0.25
_CLUSTER_DIST = 0.1
_COMBO_ANGLE = 30.0


@njit(cache=True)
def _seg_dist(ax, ay, bx, by, px, py):
    """Distance from point p to segment ab."""
    dx = bx - ax
    dy = by - ay
    l2 = dx * dx + dy * dy
    if l2 <= 0.0:
        return np.sqrt((px - ax) ** 2 + (py - ay) ** 2)
    t = ((px - ax) * dx + (py - ay) * dy) / l2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    cx = ax + t * dx
    cy = ay + t * dy
    return np.sqrt((px - cx) ** 2 + (py - cy) ** 2)


@njit(cache=True)
def _blockers(pos, on, ax, ay, bx, by, skip1, skip2, R):
    n = 0
    for i in range(7):
        if not on[i] or i == skip1 or i == skip2:
            continue
        if _seg_dist(ax, ay, bx, by, pos[i, 0], pos[i, 1]) < 2.0 * R:
            n += 1
    return n


@njit(cache=True)
def _nearest_pocket(x, y, pockets):
    best = 0
    bd = 1e30
    for k in range(6):
        d = (x - pockets[k, 0]) ** 2 + (y - pockets[k, 1]) ** 2
        if d < bd:
            bd = d
            best = k
    return best


@njit(cache=True)
def _rail_gap(x, y, R, width, length):
    g = x - R
    if width - R - x < g:
        g = width - R - x
    if y - R < g:
        g = y - R
    if length - R - y < g:
        g = length - R - y
    if g < 0.0:
        g = 0.0
    return g


@njit(cache=True)
def _cut_angle_deg(ix, iy, dx, dy):
    """Angle between the incoming and departure directions, clamped to 90."""
    ni = np.sqrt(ix * ix + iy * iy)
    nd = np.sqrt(dx * dx + dy * dy)
    if ni <= 0.0 or nd <= 0.0:
        return 0.0
    c = (ix * dx + iy * dy) / (ni * nd)
    if c > 1.0:
        c = 1.0
    elif c < -1.0:
        c = -1.0
    ang = np.degrees(np.arccos(c))
    if ang > 90.0:
        ang = 90.0
    return ang


@njit(cache=True)
def _easiness(pos, on, cue_i, o, pk, pockets, R):
    """How easy the pot of ball o into pocket pk looks from the cue:
    (1 - distance)(1 - cut/90) exp(-0.7 blockers), 0 when the cut is
    impossible."""
    cx = pos[cue_i, 0]
    cy = pos[cue_i, 1]
    ox = pos[o, 0]
    oy = pos[o, 1]
    px = pockets[pk, 0]
    py = pockets[pk, 1]
    d = (np.sqrt((ox - cx) ** 2 + (oy - cy) ** 2)
         + np.sqrt((px - ox) ** 2 + (py - oy) ** 2))
    dist = d / _DIAG
    if dist > 1.0:
        dist = 1.0
    # cut angle at the object ball
    ix = ox - cx
    iy = oy - cy
    dx = px - ox
    dy = py - oy
    ni = np.sqrt(ix * ix + iy * iy)
    nd = np.sqrt(dx * dx + dy * dy)
    if ni <= 0.0 or nd <= 0.0:
        return 0.0
    c = (ix * dx + iy * dy) / (ni * nd)
    if c <= 0.0:
        return 0.0  # would need a cut beyond 90 degrees
    if c > 1.0:
        c = 1.0
    ang = np.degrees(np.arccos(c))
    k = _blockers(pos, on, cx, cy, ox, oy, cue_i, o, R)
    k += _blockers(pos, on, ox, oy, px, py, o, cue_i, R)
    return (1.0 - dist) * (1.0 - ang / 90.0) * np.exp(-0.7 * k)


@njit(cache=True)
def _clustered_own(pos, on, own):
    n = 0
    for q in range(len(own)):
        i = own[q]
        if not on[i]:
            continue
        for j in range(7):
            if j == i or not on[j]:
                continue
            d = np.sqrt((pos[i, 0] - pos[j, 0]) ** 2
                        + (pos[i, 1] - pos[j, 1]) ** 2)
            if d < _CLUSTER_DIST:
                n += 1
                break
    return n


@njit(cache=True)
def evaluate_rules_kernel(pre_pos, pre_on, post_pos, post_on,
                          v, alpha, beta, spin_a, spin_b,
                          n_ev, kinds, eas, ebs, exs, eys,
                          own, opp,
                          R, r_p, width, length, pockets):
    r = np.zeros(29)
    n_own = len(own)
    n_opp = len(opp)

    # ---------------- trace scans ----------------
    first_obj = -1          # first ball the cue touched
    q_first_contact = n_ev
    q_target_contact = n_ev
    target_obj = -1
    for q in range(n_ev):
        if kinds[q] == EV_BALL and (eas[q] == CUE or ebs[q] == CUE):
            other = ebs[q] if eas[q] == CUE else eas[q]
            if first_obj < 0:
                first_obj = other
                q_first_contact = q
            if target_obj < 0:
                for t in range(n_own):
                    if other == own[t]:
                        target_obj = other
                        q_target_contact = q
                        break
            if target_obj >= 0:
                break

    cue_rails_before_contact = 0
    for q in range(n_ev):
        if q >= q_first_contact:
            break
        if kinds[q] == EV_CUSHION and eas[q] == CUE:
            cue_rails_before_contact += 1

    opp_contacts = 0
    for q in range(n_ev):
        if kinds[q] == EV_BALL and (eas[q] == CUE or ebs[q] == CUE):
            other = ebs[q] if eas[q] == CUE else eas[q]
            for t in range(n_opp):
                if other == opp[t]:
                    opp_contacts += 1
                    break

    q_pot = -1
    potted_ball = -1
    pot_pocket = -1
    for q in range(n_ev):
        if kinds[q] == EV_POCKET and eas[q] != CUE:
            q_pot = q
            potted_ball = eas[q]
            pot_pocket = ebs[q]
            break

    potted_own = 0
    for q in range(n_ev):
        if kinds[q] == EV_POCKET:
            for t in range(n_own):
                if eas[q] == own[t]:
                    potted_own += 1
                    break

    own_remaining_pre = 0
    for t in range(n_own):
        if pre_on[own[t]]:
            own_remaining_pre += 1

    # First target pot by the cue's own aim attributes to where it went;
    # otherwise aim at the nearest pocket from the object ball.
    if first_obj >= 0:
        obj_x = pre_pos[first_obj, 0]
        obj_y = pre_pos[first_obj, 1]
        if potted_ball == first_obj and pot_pocket >= 0:
            pk14 = pot_pocket
        else:
            pk14 = _nearest_pocket(obj_x, obj_y, pockets)
        proxy_obj = first_obj
    else:
        proxy_obj = -1
        best = 1e30
        for t in range(n_own):
            i = own[t]
            if not pre_on[i]:
                continue
            d = ((pre_pos[i, 0] - pre_pos[CUE, 0]) ** 2
                 + (pre_pos[i, 1] - pre_pos[CUE, 1]) ** 2)
            if d < best:
                best = d
                proxy_obj = i
        if proxy_obj >= 0:
            obj_x = pre_pos[proxy_obj, 0]
            obj_y = pre_pos[proxy_obj, 1]
            pk14 = _nearest_pocket(obj_x, obj_y, pockets)
        else:
            obj_x = 0.0
            obj_y = 0.0
            pk14 = 0

    # ---------------- difficulty rules ----------------
    # r14 distance
    if proxy_obj >= 0:
        path = (np.sqrt((obj_x - pre_pos[CUE, 0]) ** 2
                        + (obj_y - pre_pos[CUE, 1]) ** 2)
                + np.sqrt((pockets[pk14, 0] - obj_x) ** 2
                          + (pockets[pk14, 1] - obj_y) ** 2))
        r14 = path / _DIAG
        if r14 > 1.0:
            r14 = 1.0
    else:
        r14 = 0.0
    r[13] = r14

    # r15 cut angle of the first shooter-target contact
    r15 = 0.0
    if target_obj >= 0:
        q = q_target_contact
        ox = pre_pos[target_obj, 0]
        oy = pre_pos[target_obj, 1]
        ix = exs[q] - pre_pos[CUE, 0]
        iy = eys[q] - pre_pos[CUE, 1]
        dx = ox - exs[q]
        dy = oy - eys[q]
        r15 = _cut_angle_deg(ix, iy, dx, dy) / 90.0
    r[14] = r15

    # r16 obstacles on the aim corridors
    if proxy_obj >= 0:
        k16 = _blockers(pre_pos, pre_on, pre_pos[CUE, 0], pre_pos[CUE, 1],
                        obj_x, obj_y, CUE, proxy_obj, R)
        k16 += _blockers(pre_pos, pre_on, obj_x, obj_y,
                         pockets[pk14, 0], pockets[pk14, 1], proxy_obj, CUE, R)
        r[15] = 1.0 - np.exp(-0.7 * k16)

    # r17 cushions before first contact
    r[16] = 1.0 - 2.0 ** (-cue_rails_before_contact)

    r18 = abs(spin_a) / 0.5
    if r18 > 1.0:
        r18 = 1.0
    r[17] = r18
    r19 = abs(v - 2.5) / 2.5
    if r19 > 1.0:
        r19 = 1.0
    r[18] = r19
    r20 = abs(spin_b) / 0.5
    if r20 > 1.0:
        r20 = 1.0
    r[19] = r20

    # r21 object ball hugging a rail
    if first_obj >= 0:
        gap = _rail_gap(pre_pos[first_obj, 0], pre_pos[first_obj, 1],
                        R, width, length)
        val = 1.0 - gap / (2.0 * R)
        if val < 0.0:
            val = 0.0
        r[20] = val

    # r22 scratch risk along the cue ball's simulated path (shared w/ r12)
    s_pockets = 0
    lastx = pre_pos[CUE, 0]
    lasty = pre_pos[CUE, 1]
    for k in range(6):
        hit = False
        px = pockets[k, 0]
        py = pockets[k, 1]
        ax = lastx
        ay = lasty
        for q in range(n_ev):
            involved = ((kinds[q] == EV_BALL and (eas[q] == CUE or ebs[q] == CUE))
                        or (kinds[q] != EV_BALL and eas[q] == CUE))
            if not involved:
                continue
            if _seg_dist(ax, ay, exs[q], eys[q], px, py) <= r_p:
                hit = True
                break
            ax = exs[q]
            ay = eys[q]
        if not hit and post_on[CUE]:
            if _seg_dist(ax, ay, post_pos[CUE, 0], post_pos[CUE, 1],
                         px, py) <= r_p:
                hit = True
        if hit:
            s_pockets += 1
    scratch = 1.0 - np.exp(-0.7 * s_pockets)
    r[21] = scratch

    # r23 curve: spin and elevation combined
    be = beta / 90.0
    r[22] = r18 if r18 > be else be

    # r24 frozen contacts in the starting layout
    frozen = 0
    for i in range(7):
        if not pre_on[i]:
            continue
        if _rail_gap(pre_pos[i, 0], pre_pos[i, 1], R, width, length) < 1e-4:
            frozen += 1
        for j in range(i + 1, 7):
            if not pre_on[j]:
                continue
            d = np.sqrt((pre_pos[i, 0] - pre_pos[j, 0]) ** 2
                        + (pre_pos[i, 1] - pre_pos[j, 1]) ** 2)
            if d < 2.0 * R + 1e-4:
                frozen += 1
    r[23] = 1.0 - np.exp(-0.7 * frozen)

    # r25 how many difficulty factors act at once
    k25 = 0
    if r14 >= 0.5:
        k25 += 1
    if r15 >= 1.0 / 3.0:
        k25 += 1
    if r18 >= 1.0 / 3.0:
        k25 += 1
    if r19 >= 1.0 / 3.0:
        k25 += 1
    if r20 >= 1.0 / 3.0:
        k25 += 1
    if k25 > 1:
        r[24] = (k25 - 1) / 4.0

    # r26 throw grows with distance and either cut or side spin
    m26 = r15 if r15 > r18 else r18
    r[25] = r14 * m26

    # r27 deflection: side spin at speed or elevation
    m27 = v / 5.0
    if be > m27:
        m27 = be
    r[26] = r18 * m27

    # r28 collisions before the first pot
    if q_pot >= 0:
        nb = 0
        for q in range(q_pot):
            if kinds[q] == EV_BALL:
                nb += 1
        if nb > 1:
            r[27] = 1.0 - 2.0 ** (-(nb - 1))

    # r29 cushion bounces of the potted ball before its pot
    if q_pot >= 0:
        nc = 0
        for q in range(q_pot):
            if kinds[q] == EV_CUSHION and eas[q] == potted_ball:
                nc += 1
        r[28] = 1.0 - 2.0 ** (-nc)

    # ---------------- value rules (post state) ----------------
    # r1 own-ball groupings
    k1 = 0
    for t in range(n_own):
        i = own[t]
        if not post_on[i]:
            continue
        for s in range(t + 1, n_own):
            j = own[s]
            if not post_on[j]:
                continue
            d = np.sqrt((post_pos[i, 0] - post_pos[j, 0]) ** 2
                        + (post_pos[i, 1] - post_pos[j, 1]) ** 2)
            if d < _GROUP_DIST:
                k1 += 1
    r[0] = 1.0 - np.exp(-0.7 * k1)

    # r2 makable (ball, pocket) pairs; r3 balls makable into 3+ pockets
    m2 = 0
    k3 = 0
    for t in range(n_own):
        i = own[t]
        if not post_on[i]:
            continue
        open_pockets = 0
        for k in range(6):
            if _blockers(post_pos, post_on, post_pos[i, 0], post_pos[i, 1],
                         pockets[k, 0], pockets[k, 1], i, -1, R) == 0:
                open_pockets += 1
        m2 += open_pockets
        if open_pockets >= 3:
            k3 += 1
    r[1] = 1.0 - np.exp(-0.3 * m2)
    r[2] = 1.0 - np.exp(-0.7 * k3)

    # r4 clusters broken up by the shot
    broke = _clustered_own(pre_pos, pre_on, own) - _clustered_own(
        post_pos, post_on, own)
    if broke < 0:
        broke = 0
    r[3] = 1.0 - np.exp(-0.7 * broke)

    # r5 safety: how hard is the opponent's best reply; r7 their average
    opp_alive = 0
    for t in range(n_opp):
        if post_on[opp[t]]:
            opp_alive += 1
    if opp_alive > 0 and post_on[CUE]:
        best_e = 0.0
        sum_e = 0.0
        cnt = 0
        for t in range(n_opp):
            o = opp[t]
            if not post_on[o]:
                continue
            for k in range(6):
                e = _easiness(post_pos, post_on, CUE, o, k, pockets, R)
                if e > best_e:
                    best_e = e
                sum_e += e
                cnt += 1
        r[4] = 1.0 - best_e
        r[6] = 1.0 - sum_e / cnt
    # scratch or cleared opponent: no safety value in this layout

    # r13 potting priority
    if own_remaining_pre > 0:
        r[12] = potted_own / own_remaining_pre

    # r6 two-way: offense and defense at once
    r[5] = np.sqrt(r[12] * r[4])

    # r8 own balls ready for natural progression
    k8 = 0
    if post_on[CUE]:
        for t in range(n_own):
            i = own[t]
            if not post_on[i]:
                continue
            reachable = _blockers(post_pos, post_on,
                                  post_pos[CUE, 0], post_pos[CUE, 1],
                                  post_pos[i, 0], post_pos[i, 1],
                                  CUE, i, R) == 0
            if not reachable:
                continue
            for k in range(6):
                if _blockers(post_pos, post_on, post_pos[i, 0], post_pos[i, 1],
                             pockets[k, 0], pockets[k, 1], i, CUE, R) == 0:
                    k8 += 1
                    break
    r[7] = k8 / 3.0

    # r9 staying off the opponent's balls
    r[8] = np.exp(-0.7 * opp_contacts)

    # r10 combination alignments onto own balls
    k10 = 0
    for t in range(n_own):
        o = own[t]
        if not post_on[o]:
            continue
        for c in range(7):
            if c == o or c == CUE or not post_on[c]:
                continue
            for k in range(6):
                ix = post_pos[o, 0] - post_pos[c, 0]
                iy = post_pos[o, 1] - post_pos[c, 1]
                dx = pockets[k, 0] - post_pos[o, 0]
                dy = pockets[k, 1] - post_pos[o, 1]
                if _cut_angle_deg(ix, iy, dx, dy) < _COMBO_ANGLE:
                    k10 += 1
    r[9] = 1.0 - np.exp(-0.7 * k10)

    # r11 own balls near rails
    k11 = 0
    for t in range(n_own):
        i = own[t]
        if not post_on[i]:
            continue
        if _rail_gap(post_pos[i, 0], post_pos[i, 1], R, width, length) < 2.0 * R:
            k11 += 1
    r[10] = 1.0 - np.exp(-0.7 * k11)

    # r12 scratch exposure of the layout (cue path machinery)
    r[11] = scratch

    return r


@dataclass
class RuleContext:
    """Everything a rule evaluator may look at for one (state, shot) pair."""

    pre: TableState
    shot: ShotParams
    post: TableState
    trace: list[Event]
    shooter_targets: frozenset[str]
    opponent_targets: frozenset[str]
    spec: TableSpec = DEFAULT_SPEC


def _pack_trace(trace: list[Event]):
    n = len(trace)
    kinds = np.zeros(n, dtype=np.int64)
    eas = np.zeros(n, dtype=np.int64)
    ebs = np.zeros(n, dtype=np.int64)
    exs = np.zeros(n)
    eys = np.zeros(n)
    from ..physics.types import POCKET_INDEX
    for q, ev in enumerate(trace):
        kinds[q] = ev.kind
        eas[q] = BALL_INDEX[ev.ball1]
        if ev.kind == EV_BALL:
            ebs[q] = BALL_INDEX[ev.ball2]
        elif ev.kind == EV_POCKET:
            ebs[q] = POCKET_INDEX[ev.pocket]
        else:
            ebs[q] = -1
        exs[q] = ev.pos[0]
        eys[q] = ev.pos[1]
    return n, kinds, eas, ebs, exs, eys


def evaluate_rules_arrays(pre_pos, pre_on, post_pos, post_on, shot_arr,
                          trace_packed, own_idx, opp_idx,
                          spec: TableSpec = DEFAULT_SPEC) -> np.ndarray:
    """Fast path: all inputs already packed (used by the annealer)."""
    n, kinds, eas, ebs, exs, eys = trace_packed
    return evaluate_rules_kernel(
        pre_pos, pre_on, post_pos, post_on,
        shot_arr[0], shot_arr[1], shot_arr[2], shot_arr[3], shot_arr[4],
        n, kinds, eas, ebs, exs, eys,
        own_idx, opp_idx,
        spec.ball_radius, spec.pocket_radius, spec.width, spec.length,
        POCKET_ARRAY)


def evaluate_rules(ctx: RuleContext) -> np.ndarray:
    """RuleVector: component i-1 holds r_i(ctx), each in [0, 1]."""
    pre_pos = ctx.pre.positions()
    pre_on = ctx.pre.on_mask()
    post_pos = ctx.post.positions()
    post_on = ctx.post.on_mask()
    own_idx = np.array(sorted(BALL_INDEX[b] for b in ctx.shooter_targets),
                       dtype=np.int64)
    opp_idx = np.array(sorted(BALL_INDEX[b] for b in ctx.opponent_targets),
                       dtype=np.int64)
    shot_arr = np.array([ctx.shot.v, ctx.shot.alpha, ctx.shot.beta,
                         ctx.shot.a, ctx.shot.b])
    return evaluate_rules_arrays(pre_pos, pre_on, post_pos, post_on,
                                 shot_arr, _pack_trace(ctx.trace),
                                 own_idx, opp_idx, ctx.spec)


def rule_catalog() -> list[dict]:
    """JSON-ready catalog: id, verbatim text, category, strategy flags."""
    out = []
    for i in range(1, N_RULES + 1):
        out.append({
            "id": i,
            "text": RULE_TEXTS[i],
            "category": rule_category(i),
            "offensive": bool(W_OFFENSIVE[i - 1]),
            "defensive": bool(W_DEFENSIVE[i - 1]),
        })
    return out
