import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cuecoach.game import PLAYER_TARGETS, random_table_state
from cuecoach.physics import (
    BALL_IDS,
    DEFAULT_SPEC,
    POCKET_XY,
    BallState,
    ShotParams,
    TableState,
    ball_ball_event,
    cushion_event,
    pocket_event,
    strike_and_trace,
)
from cuecoach.rules import (
    LIKERT_KEYS,
    N_RULES,
    RULE_TEXTS,
    RuleContext,
    W_DEFENSIVE,
    W_OFFENSIVE,
    evaluate_rules,
    parse_likert_key,
    quantize_likert,
    rule_catalog,
    split_value_difficulty,
    strategy_value,
    strategy_vectors,
)

R = DEFAULT_SPEC.ball_radius
P1 = PLAYER_TARGETS[1]
P2 = PLAYER_TARGETS[2]


def make_state(**positions) -> TableState:
    balls = {}
    for bid in BALL_IDS:
        if bid in positions:
            x, y = positions[bid]
            balls[bid] = BallState(x, y, True)
        else:
            balls[bid] = BallState(0.0, 0.0, False)
    return TableState(balls=balls)


def ctx_from_sim(state, shot, shooter=1):
    res = strike_and_trace(state, shot)
    return RuleContext(pre=state, shot=shot, post=res.post, trace=res.trace,
                       shooter_targets=PLAYER_TARGETS[shooter],
                       opponent_targets=PLAYER_TARGETS[3 - shooter])


def synth_ctx(pre, trace, post=None, shot=None, shooter=1):
    return RuleContext(pre=pre, shot=shot or ShotParams(2, 0, 0, 0, 0),
                       post=post or pre, trace=trace,
                       shooter_targets=PLAYER_TARGETS[shooter],
                       opponent_targets=PLAYER_TARGETS[3 - shooter])


# ------------------------------------------------------------- examples

def test_r13_fraction_of_targets_potted():
    # one of three targets potted by a real shot
    obj = (0.5, 1.5)
    d = np.array(obj) - np.array(POCKET_XY["lt"])
    ghost = np.array(obj) + 2 * R * d / np.linalg.norm(d)
    aim = ghost - np.array([0.5, 0.5])
    alpha = math.degrees(math.atan2(aim[1], aim[0])) % 360.0
    state = make_state(cue=(0.5, 0.5), red=obj, blue=(0.8, 0.4),
                       yellow=(0.8, 0.6), green=(0.2, 0.3),
                       black=(0.15, 0.45), pink=(0.2, 0.6))
    ctx = ctx_from_sim(state, ShotParams(4.0, alpha, 0, 0, 0))
    assert not ctx.post.balls["red"].on_table
    r = evaluate_rules(ctx)
    assert r[12] == pytest.approx(1.0 / 3.0)


def test_r28_zero_for_single_collision_pot():
    pre = make_state(cue=(0.5, 0.5), red=(0.5, 1.5))
    trace = [ball_ball_event("cue", "red", (0.5, 1.0), 0.1),
             pocket_event("red", "lt", (0.02, 1.97), 0.5)]
    r = evaluate_rules(synth_ctx(pre, trace))
    assert r[27] == 0.0


def test_r28_grows_with_collisions():
    pre = make_state(cue=(0.5, 0.5), red=(0.5, 1.5), blue=(0.4, 1.2))
    base = [ball_ball_event("cue", "blue", (0.45, 1.1), 0.1)]
    mid = base + [ball_ball_event("blue", "red", (0.45, 1.3), 0.2)]
    pot = [pocket_event("red", "lt", (0.02, 1.97), 0.5)]
    r2 = evaluate_rules(synth_ctx(pre, mid + pot))
    r3 = evaluate_rules(synth_ctx(
        pre, mid + [ball_ball_event("red", "yellow", (0.5, 1.5), 0.3)] + pot))
    assert r2[27] == pytest.approx(0.5)
    assert r3[27] == pytest.approx(0.75)


def test_r29_cushion_count_of_potted_ball():
    pre = make_state(cue=(0.5, 0.5), red=(0.5, 1.5))
    contact = [ball_ball_event("cue", "red", (0.5, 1.0), 0.1)]
    pot = [pocket_event("red", "lt", (0.02, 1.97), 0.9)]
    cushions = [cushion_event("red", (1.0 - R, 1.6), 0.3),
                cushion_event("red", (0.4, 2.0 - R), 0.6)]
    r0 = evaluate_rules(synth_ctx(pre, contact + pot))
    r2 = evaluate_rules(synth_ctx(pre, contact + cushions + pot))
    assert r0[28] == 0.0
    assert r2[28] == pytest.approx(0.75)
    # no pot: rule inactive regardless of cushions
    rn = evaluate_rules(synth_ctx(pre, contact + cushions))
    assert rn[28] == 0.0


def test_r17_rail_first_shot():
    pre = make_state(cue=(0.5, 0.5), red=(0.5, 1.5))
    direct = [ball_ball_event("cue", "red", (0.5, 1.0), 0.1)]
    banked = [cushion_event("cue", (1.0 - R, 0.8), 0.05)] + direct
    double = [cushion_event("cue", (1.0 - R, 0.8), 0.04),
              cushion_event("cue", (R, 1.2), 0.08)] + direct
    assert evaluate_rules(synth_ctx(pre, direct))[16] == 0.0
    assert evaluate_rules(synth_ctx(pre, banked))[16] == pytest.approx(0.5)
    assert evaluate_rules(synth_ctx(pre, double))[16] == pytest.approx(0.75)


def test_shot_parameter_rules():
    pre = make_state(cue=(0.5, 0.5), red=(0.5, 1.5))
    shot = ShotParams(5.0, 90.0, 45.0, -0.4, 0.25)
    r = evaluate_rules(synth_ctx(pre, [], shot=shot))
    assert r[17] == pytest.approx(0.8)    # |a| / 0.5
    assert r[18] == pytest.approx(1.0)    # |5 - 2.5| / 2.5
    assert r[19] == pytest.approx(0.5)    # |b| / 0.5
    assert r[22] == pytest.approx(0.8)    # max(r18, beta/90)
    assert r[26] == pytest.approx(0.8)    # r18 * max(v/5, beta/90)


def test_r9_penalizes_touching_opponent_balls():
    pre = make_state(cue=(0.5, 0.5), red=(0.5, 1.5), black=(0.6, 1.0))
    clean = [ball_ball_event("cue", "red", (0.5, 1.0), 0.1)]
    dirty = [ball_ball_event("cue", "black", (0.55, 0.9), 0.05)] + clean
    assert evaluate_rules(synth_ctx(pre, clean))[8] == pytest.approx(1.0)
    assert evaluate_rules(synth_ctx(pre, dirty))[8] == pytest.approx(
        math.exp(-0.7))


# --------------------------------------------------------- monotonicity

def test_r14_monotone_in_path_length():
    vals = []
    for oy in (0.7, 1.0, 1.3):
        pre = make_state(cue=(0.5, 0.2), red=(0.5, oy))
        trace = [ball_ball_event("cue", "red", (0.5, oy - R), 0.1)]
        vals.append(evaluate_rules(synth_ctx(pre, trace))[13])
    assert vals[0] <= vals[1] <= vals[2]
    assert vals[0] < vals[2]


def test_r15_monotone_in_cut_angle():
    # departure direction rotates away from the incoming line
    obj = np.array([0.5, 1.0])
    vals = []
    for dep_deg in (90.0, 55.0, 15.0):  # 0 = straight follow-through at 90
        dep = np.array([math.cos(math.radians(dep_deg)),
                        math.sin(math.radians(dep_deg))])
        contact = tuple(obj - R * dep)
        pre = make_state(cue=(0.5, 0.5), red=tuple(obj))
        trace = [ball_ball_event("cue", "red", contact, 0.1)]
        vals.append(evaluate_rules(synth_ctx(pre, trace))[14])
    assert vals[0] == pytest.approx(0.0, abs=1e-6)
    assert vals[0] <= vals[1] <= vals[2]
    assert vals[2] > 0.5


def test_r21_object_on_rail():
    on_rail = make_state(cue=(0.5, 0.5), red=(R, 1.0))
    free = make_state(cue=(0.5, 0.5), red=(0.5, 1.0))
    tr = lambda s: [ball_ball_event("cue", "red",
                                    (s.balls["red"].x, s.balls["red"].y - R),
                                    0.1)]
    assert evaluate_rules(synth_ctx(on_rail, tr(on_rail)))[20] == pytest.approx(1.0)
    assert evaluate_rules(synth_ctx(free, tr(free)))[20] == 0.0


def test_r24_frozen_pair_detected():
    frozen = make_state(cue=(0.5, 0.5), red=(0.5, 1.0),
                        blue=(0.5, 1.0 + 2 * R + 5e-5))
    apart = make_state(cue=(0.5, 0.5), red=(0.5, 1.0), blue=(0.5, 1.3))
    assert evaluate_rules(synth_ctx(frozen, []))[23] > 0.0
    assert evaluate_rules(synth_ctx(apart, []))[23] == 0.0


def test_r5_safety_higher_when_opponent_blocked():
    # opponent's only ball wide open vs fully boxed in
    open_post = make_state(cue=(0.5, 0.5), black=(0.5, 1.5))
    boxed_post = make_state(cue=(0.5, 0.5), black=(0.5, 1.5),
                            blue=(0.5, 1.5 - 2.5 * R),
                            red=(0.5 - 2.5 * R, 1.5),
                            yellow=(0.5 + 2.5 * R, 1.5),
                            green=(0.5, 1.5 + 2.5 * R))
    pre = make_state(cue=(0.4, 0.4), black=(0.5, 1.5))
    r_open = evaluate_rules(synth_ctx(pre, [], post=open_post))
    r_boxed = evaluate_rules(synth_ctx(pre, [], post=boxed_post))
    assert r_boxed[4] > r_open[4]


def test_r5_zero_after_scratch():
    pre = make_state(cue=(0.5, 0.5), black=(0.5, 1.5))
    post = make_state(black=(0.5, 1.5))
    r = evaluate_rules(synth_ctx(pre, [pocket_event("cue", "lb", (0.02, 0.02), 0.4)],
                                 post=post))
    assert r[4] == 0.0 and r[6] == 0.0


def test_r1_groupings_counts_close_own_pairs():
    grouped = make_state(cue=(0.5, 0.5), red=(0.3, 1.0), blue=(0.3, 1.2),
                         yellow=(0.35, 1.1))
    spread = make_state(cue=(0.5, 0.5), red=(0.2, 0.9), blue=(0.8, 1.4),
                        yellow=(0.5, 1.8))
    rg = evaluate_rules(synth_ctx(grouped, [], post=grouped))
    rs = evaluate_rules(synth_ctx(spread, [], post=spread))
    assert rg[0] > rs[0]
    assert rs[0] == 0.0


def test_r16_obstacle_in_corridor():
    clear = make_state(cue=(0.5, 0.3), red=(0.5, 1.5))
    blocked = make_state(cue=(0.5, 0.3), red=(0.5, 1.5), black=(0.5, 0.9))
    tr = lambda: [ball_ball_event("cue", "red", (0.5, 1.5 - R), 0.1)]
    assert evaluate_rules(synth_ctx(clear, tr()))[15] == 0.0
    assert evaluate_rules(synth_ctx(blocked, tr()))[15] > 0.0


def test_r22_scratch_path_near_pocket():
    # cue runs straight through the middle-left pocket mouth
    pre = make_state(cue=(0.3, 1.0), red=(0.9, 1.0))
    toward_pocket = [cushion_event("cue", (R, 1.0), 0.2)]
    away = [ball_ball_event("cue", "red", (0.9 - 2 * R, 1.0), 0.1)]
    r_risky = evaluate_rules(synth_ctx(pre, toward_pocket))
    r_safe = evaluate_rules(synth_ctx(pre, away))
    assert r_risky[21] > r_safe[21]
    assert r_risky[11] == r_risky[21]  # value twin uses the same machinery


# ------------------------------------------------------------- strategy

def test_strategy_vectors_layout():
    w_o, w_d = strategy_vectors()
    assert w_o.shape == (29,) and w_d.shape == (29,)
    assert all(w_o[i - 1] == 1 for i in (1, 2, 3, 4, 6, 8, 10, 11, 13))
    assert all(w_d[i - 1] == 1 for i in (5, 6, 7, 9, 12))
    assert w_o[13:].sum() == 0 and w_d[13:].sum() == 0
    assert w_o[5] == 1 and w_d[5] == 1  # two-way rule in both


def test_strategy_value_fixture():
    r = np.zeros(29)
    r[4] = 1.0   # rule 5
    r[12] = 1.0  # rule 13
    assert strategy_value(r, "defensive") == pytest.approx(0.0)
    r[4] = 0.0
    assert strategy_value(r, "offensive") == pytest.approx(1.0)
    assert strategy_value(r, "none") == 0.0
    with pytest.raises(ValueError):
        strategy_value(r, "aggressive")


def test_split_value_difficulty_round_trip():
    r = np.linspace(0, 1, 29)
    r_v, r_d = split_value_difficulty(r)
    assert r_v.shape == (13,) and r_d.shape == (16,)
    assert np.concatenate([r_v, r_d]) == pytest.approx(r)
    one_hot = np.zeros(29)
    one_hot[13] = 1.0
    r_v, r_d = split_value_difficulty(one_hot)
    assert r_v.sum() == 0 and r_d[0] == 1.0


# --------------------------------------------------------------- likert

def test_likert_examples():
    assert quantize_likert(0.10) == (0, "very low")
    assert quantize_likert(0.50) == (3, "moderate")
    assert quantize_likert(1.00) == (6, "very high")


def test_likert_boundaries_and_surjectivity():
    bounds = (0.0, 0.125, 0.25, 0.375, 0.625, 0.75, 0.875)
    for i, b in enumerate(bounds):
        assert quantize_likert(b)[0] == i
    seen = {quantize_likert(x)[0] for x in np.linspace(0, 1, 1001)}
    assert seen == set(range(7))


def test_likert_parse_aliases():
    assert parse_likert_key("moderately low") == 2
    assert parse_likert_key("mod high") == 4
    assert parse_likert_key("Very High") == 6
    assert parse_likert_key("whatever") is None
    for i, k in enumerate(LIKERT_KEYS):
        assert parse_likert_key(k) == i


# -------------------------------------------------------------- catalog

def test_catalog_shape():
    cat = rule_catalog()
    assert [e["id"] for e in cat] == list(range(1, 30))
    assert all(e["category"] == ("value" if e["id"] <= 13 else "difficulty")
               for e in cat)
    by_id = {e["id"]: e for e in cat}
    assert by_id[5]["defensive"] and not by_id[5]["offensive"]
    assert by_id[13]["offensive"] and not by_id[13]["defensive"]
    assert by_id[6]["offensive"] and by_id[6]["defensive"]
    assert not by_id[20]["offensive"] and not by_id[20]["defensive"]
    assert by_id[13]["text"] == ("Above all, prioritise shots that pot the "
                                 "most target balls.")
    assert all(e["text"] == RULE_TEXTS[e["id"]] for e in cat)


# ------------------------------------------------------- bounds & purity

@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**9), v=st.floats(0.2, 5.0),
       alpha=st.floats(0.0, 360.0), a=st.floats(-0.5, 0.5),
       b=st.floats(-0.5, 0.5), shooter=st.sampled_from([1, 2]))
def test_rules_bounded_and_finite(seed, v, alpha, a, b, shooter):
    state = random_table_state(np.random.default_rng(seed))
    ctx = ctx_from_sim(state, ShotParams(v, alpha, 0.0, a, b), shooter)
    r = evaluate_rules(ctx)
    assert r.shape == (29,)
    assert np.all(np.isfinite(r))
    assert np.all(r >= 0.0) and np.all(r <= 1.0)


def test_rules_deterministic():
    state = random_table_state(np.random.default_rng(123))
    ctx = ctx_from_sim(state, ShotParams(3.0, 45.0, 10.0, 0.1, -0.2))
    r1 = evaluate_rules(ctx)
    r2 = evaluate_rules(ctx)
    assert np.array_equal(r1, r2)


def test_rules_with_short_target_arrays():
    # target index arrays shorter than 3 must not read past their end
    from cuecoach.rules.evaluators import evaluate_rules_arrays, _pack_trace

    state = random_table_state(np.random.default_rng(7))
    shot = ShotParams(3.0, 120.0, 0.0, 0.0, 0.0)
    res = strike_and_trace(state, shot)
    packed = _pack_trace(res.trace)
    shot_arr = np.array([shot.v, shot.alpha, shot.beta, shot.a, shot.b])
    pre_pos, pre_on = state.positions(), state.on_mask()
    post_pos, post_on = res.post.positions(), res.post.on_mask()
    for own, opp in (([1], [4, 5, 6]), ([1, 2], [4]), ([3], [6])):
        r = evaluate_rules_arrays(
            pre_pos, pre_on, post_pos, post_on, shot_arr, packed,
            np.array(own, dtype=np.int64), np.array(opp, dtype=np.int64))
        assert r.shape == (29,)
        assert np.all(np.isfinite(r))
        assert np.all(r >= 0.0) and np.all(r <= 1.0)
