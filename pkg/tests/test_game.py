import math

import numpy as np
import pytest

from cuecoach.errors import AgentError
from cuecoach.game import (
    FOUL_CUE_POCKETED,
    FOUL_NO_CONTACT,
    FOUL_WRONG_FIRST_CONTACT,
    GameResult,
    NoiseModel,
    PLAYER_TARGETS,
    judge_shot,
    play_game,
    random_table_state,
    respot_cue,
)
from cuecoach.physics import (
    BALL_IDS,
    DEFAULT_SPEC,
    POCKET_ARRAY,
    BallState,
    ShotParams,
    TableState,
    ball_ball_event,
    pocket_event,
)

R = DEFAULT_SPEC.ball_radius


def full_state(off=()):
    rng = np.random.default_rng(42)
    st = random_table_state(rng)
    for bid in off:
        st.balls[bid] = BallState(0.0, 2.0, False)
    return st


def bb(b1, b2):
    return ball_ball_event(b1, b2, (0.5, 1.0), 0.1)


def pk(b, p="lc"):
    return pocket_event(b, p, (0.0, 1.0), 0.2)


def test_judge_legal_own_pot_continues():
    post = full_state(off=("red",))
    j = judge_shot(1, [bb("cue", "red"), pk("red")], post)
    assert j.foul is None
    assert j.first_contact == "red"
    assert j.potted_own == ["red"]
    assert j.shooter_continues
    assert j.winner is None


def test_judge_wrong_first_contact():
    post = full_state()
    j = judge_shot(1, [bb("cue", "black")], post)
    assert j.foul == FOUL_WRONG_FIRST_CONTACT
    assert not j.shooter_continues


def test_judge_no_contact():
    post = full_state()
    j = judge_shot(1, [], post)
    assert j.foul == FOUL_NO_CONTACT
    assert not j.shooter_continues


def test_judge_cue_pocketed_beats_own_pot():
    post = full_state(off=("red", "cue"))
    j = judge_shot(1, [bb("cue", "red"), pk("red"), pk("cue")], post)
    assert j.foul == FOUL_CUE_POCKETED
    assert j.cue_potted
    assert not j.shooter_continues


def test_judge_opponent_pot_does_not_keep_table():
    post = full_state(off=("black",))
    j = judge_shot(1, [bb("cue", "red"), pk("black")], post)
    assert j.foul is None
    assert j.potted_opp == ["black"]
    assert not j.shooter_continues


def test_judge_winner_shooter_set():
    post = full_state(off=("blue", "red", "yellow"))
    j = judge_shot(1, [bb("cue", "yellow"), pk("yellow")], post)
    assert j.winner == 1


def test_judge_winner_opponent_set_cleared_by_shooter():
    post = full_state(off=("green", "black", "pink"))
    j = judge_shot(1, [bb("cue", "red"), pk("pink")], post)
    assert j.winner == 2


def test_judge_simultaneous_clearance_favours_shooter():
    post = full_state(off=("blue", "red", "yellow", "green", "black", "pink"))
    j = judge_shot(2, [bb("cue", "pink"), pk("pink"), pk("red")], post)
    assert j.winner == 2


def test_respot_center_when_free():
    st = full_state(off=("cue",))
    # park the other balls far from the respot anchor
    for i, bid in enumerate(b for b in BALL_IDS if b != "cue"):
        st.balls[bid] = BallState(0.1 + 0.13 * i, 1.8, True)
    new = respot_cue(st)
    assert new.balls["cue"].on_table
    assert (new.balls["cue"].x, new.balls["cue"].y) == (0.5, 0.5)
    new.validate()


def test_respot_dodges_occupied_center():
    st = full_state(off=("cue",))
    for i, bid in enumerate(b for b in BALL_IDS if b != "cue"):
        st.balls[bid] = BallState(0.1 + 0.13 * i, 1.8, True)
    st.balls["blue"] = BallState(0.5, 0.5, True)
    new = respot_cue(st)
    assert new.balls["cue"].on_table
    d = math.hypot(new.balls["cue"].x - 0.5, new.balls["cue"].y - 0.5)
    assert d >= 2.2 * R - 1e-9
    assert d < 0.2  # lands near the anchor, not across the table
    new.validate()
    # deterministic
    again = respot_cue(st)
    assert (again.balls["cue"].x, again.balls["cue"].y) == (
        new.balls["cue"].x, new.balls["cue"].y)


def test_random_table_state_valid_and_seeded():
    a = random_table_state(np.random.default_rng(11))
    b = random_table_state(np.random.default_rng(11))
    c = random_table_state(np.random.default_rng(12))
    a.validate()
    assert a.to_dict() == b.to_dict()
    assert a.to_dict() != c.to_dict()
    for bid in BALL_IDS:
        ball = a.balls[bid]
        for px, py in POCKET_ARRAY:
            assert math.hypot(ball.x - px, ball.y - py) >= \
                DEFAULT_SPEC.pocket_radius + R


def test_noise_model_seeded():
    nm = NoiseModel()
    shot = ShotParams(2.5, 180.0, 10.0, 0.1, -0.1)
    s1 = nm.apply(shot, np.random.default_rng(5))
    s2 = nm.apply(shot, np.random.default_rng(5))
    assert s1 == s2
    assert s1.v != shot.v


class NullAgent:
    name = "null"

    def select_shot(self, state, targets, seed):
        return ShotParams(0.0, 0.0, 0.0, 0.0, 0.0)


class CrashAgent:
    name = "crash"

    def select_shot(self, state, targets, seed):
        raise RuntimeError("boom")


def test_play_game_cap_and_tiebreak():
    st = random_table_state(np.random.default_rng(0))
    res = play_game(NullAgent(), NullAgent(), st, seed=9, turn_cap=4)
    assert res.capped
    assert res.turns == 4
    assert res.winner in (1, 2)
    res2 = play_game(NullAgent(), NullAgent(), st, seed=9, turn_cap=4)
    assert res2.winner == res.winner


def test_play_game_wraps_agent_errors():
    st = random_table_state(np.random.default_rng(0))
    with pytest.raises(AgentError):
        play_game(CrashAgent(), NullAgent(), st, seed=1, turn_cap=2)


def test_play_game_records():
    st = random_table_state(np.random.default_rng(3))
    res = play_game(NullAgent(), NullAgent(), st, seed=2, turn_cap=3,
                    record=True)
    assert len(res.records) == 3
    rec = res.records[0]
    assert rec.player == 1
    assert rec.executed != rec.intended  # noise was applied
    d = rec.to_dict()
    assert set(d) >= {"turn", "player", "intended", "executed",
                      "pre_state", "post_state", "trace", "judgement"}
