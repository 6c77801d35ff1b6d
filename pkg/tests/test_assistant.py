import math
from pathlib import Path

import numpy as np
import pytest

from cuecoach.annealing import SAConfig
from cuecoach.assistant.core import AssistConfig, assist, templated_explanation
from cuecoach.assistant.explain import (
    build_explainer_context,
    explain,
    rule_report,
)
from cuecoach.assistant.lcs import encode_events, lcs_match, lcs_match_packed
from cuecoach.assistant.lm import FixtureLM, ScriptedLM, request_hash
from cuecoach.assistant.prompts import (
    EXPLAINER_SYSTEM,
    EXPLAINER_TASK,
    RECOMMENDER_SYSTEM,
    RECOMMENDER_TASK,
    RELEVANCE_WITHOUT_R_TASK,
    RELEVANCE_WITH_R_TASK,
)
from cuecoach.assistant.recommend import (
    CandidatePlan,
    RecommendDiagnostics,
    build_recommender_user,
    parse_recommendation,
    recommend,
)
from cuecoach.assistant.tuner import (
    fit_shot_to_events,
    tune,
    tune_shot_candidates,
)
from cuecoach.errors import ModelMissing, ParseFailure
from cuecoach.physics import (
    ball_ball_event,
    cushion_event,
    pocket_event,
)
from cuecoach.rules import W_DEFENSIVE, W_OFFENSIVE, strategy_value

GOLDEN = Path(__file__).parent / "golden"

# The two sample responses embedded in the recommender task description.
SAMPLE_A = (
    "STRATEGY: offensive\nDIFFICULTY: easy\nSHOTS:\n"
    "1. BALL-BALL-cue-blue, BALL-CUSHION-blue, BALL-POCKET-blue-rc\n"
    "2. BALL-CUSHION-cue, BALL-BALL-cue-red, BALL-POCKET-red-rt\n"
    "3. BALL-CUSHION-cue, BALL-CUSHION-cue, BALL-BALL-cue-red, BALL-POCKET-red-rt"
)
SAMPLE_B = (
    "STRATEGY: none\nDIFFICULTY: medium\nSHOTS:\n"
    "1. BALL-BALL-cue-red, BALL-CUSHION-red, BALL-BALL-red-blue, BALL-POCKET-red-rt\n"
    "2. BALL-BALL-cue-blue, BALL-CUSHION-blue, BALL-POCKET-blue-rb\n"
    "3. BALL-CUSHION-cue, BALL-BALL-cue-yellow, BALL-POCKET-yellow-lt"
)


class StubModel:
    """Fixed prediction; enough duck-typing for the tuner."""

    n = 10
    anchors = (0.2, 0.9, 1.6)
    h_max = float(np.log(10))

    def __init__(self, p=None):
        self.p = np.full(10, 0.1) if p is None else np.asarray(p, float)

    def predict(self, r):
        return self.p


# ------------------------------------------------------------------- LCS

def test_lcs_identity():
    seq = [ball_ball_event("cue", "red"), cushion_event("red"),
           pocket_event("red", "rt")]
    assert lcs_match(seq, seq) == 3


def test_lcs_skips_middle():
    e1, e2, e3 = (cushion_event("cue"), ball_ball_event("cue", "blue"),
                  pocket_event("blue", "lt"))
    assert lcs_match([e1, e3], [e1, e2, e3]) == 2


def test_lcs_anchored_zero():
    e1, e2 = cushion_event("cue"), ball_ball_event("cue", "blue")
    # the target's first event never occurs in the trace
    assert lcs_match([e1, e2], [e2]) == 0


def test_lcs_ball_pair_unordered():
    a = [ball_ball_event("cue", "red")]
    b = [ball_ball_event("red", "cue")]
    assert lcs_match(a, b) == 1


def test_lcs_bounds_property():
    rng = np.random.default_rng(5)
    pool = [cushion_event("cue"), ball_ball_event("cue", "red"),
            pocket_event("red", "rb"), cushion_event("red")]
    for _ in range(200):
        a = [pool[i] for i in rng.integers(0, 4, rng.integers(1, 6))]
        b = [pool[i] for i in rng.integers(0, 4, rng.integers(1, 6))]
        v = lcs_match(a, b)
        assert 0 <= v <= min(len(a), len(b))
        assert lcs_match(a, a) == len(a)


def test_encode_events_cushion_anonymous():
    enc = encode_events([cushion_event("pink")])
    assert enc[0, 2] == -1


def test_lcs_empty_sequences():
    assert lcs_match([], [cushion_event("cue")]) == 0
    assert lcs_match([cushion_event("cue")], []) == 0
    assert int(lcs_match_packed(np.empty((0, 3), np.int64),
                                np.empty((0, 3), np.int64))) == 0


# ------------------------------------------------------------- goldens

def test_recommender_task_golden():
    assert RECOMMENDER_TASK == (GOLDEN / "recommender_task.txt").read_text()


def test_explainer_task_golden():
    assert EXPLAINER_TASK == (GOLDEN / "explainer_task.txt").read_text()


def test_relevance_tasks_golden():
    assert RELEVANCE_WITH_R_TASK == \
        (GOLDEN / "relevance_with_r_task.txt").read_text()
    assert RELEVANCE_WITHOUT_R_TASK == \
        (GOLDEN / "relevance_without_r_task.txt").read_text()


def test_system_prompts_embed_tasks():
    assert RECOMMENDER_TASK in RECOMMENDER_SYSTEM
    assert EXPLAINER_TASK in EXPLAINER_SYSTEM
    assert "You are tasked with explaining the pros and cons" in EXPLAINER_SYSTEM


# ------------------------------------------------------------- parsing

def test_parse_two_event_line():
    s, d, seqs = parse_recommendation("1. BALL-BALL-cue-red, BALL-POCKET-red-rt")
    assert (s, d) == ("none", "none")
    assert len(seqs) == 1 and len(seqs[0]) == 2
    assert seqs[0][0].text == "BALL-BALL-cue-red"
    assert seqs[0][1].text == "BALL-POCKET-red-rt"


def test_parse_four_event_line():
    _, _, seqs = parse_recommendation(
        "1. BALL-CUSHION-cue, BALL-CUSHION-cue, BALL-BALL-cue-yellow, "
        "BALL-POCKET-yellow-lt")
    assert [e.text for e in seqs[0]] == [
        "BALL-CUSHION-cue", "BALL-CUSHION-cue", "BALL-BALL-cue-yellow",
        "BALL-POCKET-yellow-lt"]


def test_parse_rejects_bad_pocket_line_only():
    text = "1. BALL-POCKET-cue-xx\n2. BALL-BALL-cue-red"
    _, _, seqs = parse_recommendation(text)
    assert len(seqs) == 1
    assert seqs[0][0].text == "BALL-BALL-cue-red"


def test_parse_no_valid_lines_raises():
    with pytest.raises(ParseFailure):
        parse_recommendation("no shots here\njust prose")


def test_parse_listing_samples_round_trip():
    for sample, want_s, want_d in ((SAMPLE_A, "offensive", "easy"),
                                   (SAMPLE_B, "none", "medium")):
        s, d, seqs = parse_recommendation(sample)
        assert (s, d) == (want_s, want_d)
        assert len(seqs) == 3
        rebuilt = "\n".join(
            f"{i}. " + ", ".join(e.text for e in seq)
            for i, seq in enumerate(seqs, 1))
        original_shots = "\n".join(sample.splitlines()[3:])
        assert rebuilt == original_shots


def test_build_recommender_user_contents(mid_state, targets1):
    user = build_recommender_user(mid_state, targets1, "pot the blue", 4)
    assert "cue: (0.5000, 0.6000)" in user
    assert "must pot: blue, red, yellow" in user
    assert "must avoid: black, green, pink" in user
    assert "pot the blue" in user
    assert "[[ ## n_shots ## ]]\n4" in user


# ------------------------------------------------------------- recommend

def test_recommend_majority_vote(mid_state, targets1):
    votes = [
        "STRATEGY: defensive\nDIFFICULTY: easy\n1. BALL-BALL-cue-blue",
        "STRATEGY: offensive\nDIFFICULTY: easy\n1. BALL-BALL-cue-red",
        "STRATEGY: defensive\nDIFFICULTY: hard\n1. BALL-BALL-cue-yellow",
    ]
    diag = RecommendDiagnostics()
    plans = recommend(mid_state, "q", targets1, ScriptedLM(votes), 5,
                      diagnostics=diag)
    # majority (s, d) pair; events come from the first parseable sample
    assert plans and plans[0].strategy == "defensive"
    assert plans[0].difficulty == "easy"
    assert plans[0].target_events[0].text == "BALL-BALL-cue-blue"
    assert diag.attempts == 1


def test_recommend_dedups_and_truncates(mid_state, targets1):
    text = ("STRATEGY: none\nDIFFICULTY: none\n"
            "1. BALL-BALL-cue-blue\n"
            "2. BALL-BALL-cue-blue\n"
            "3. BALL-BALL-blue-cue\n"
            "4. BALL-BALL-cue-red\n"
            "5. BALL-BALL-cue-yellow\n")
    plans = recommend(mid_state, "q", targets1,
                      ScriptedLM([text] * 3), 2)
    # unordered pair dedup: lines 1-3 collapse to one plan, then truncate
    assert len(plans) == 2
    keys = [tuple(e.key() for e in p.target_events) for p in plans]
    assert len(keys) == len(set(keys))
    assert plans[0].target_events[0].text == "BALL-BALL-cue-blue"
    assert plans[1].target_events[0].text == "BALL-BALL-cue-red"


def test_recommend_retry_then_empty(mid_state, targets1):
    diag = RecommendDiagnostics()
    plans = recommend(mid_state, "q", targets1,
                      ScriptedLM(["nonsense"] * 9), 3,
                      diagnostics=diag)
    assert plans == []
    assert diag.attempts == 3  # 1 + k_retry
    assert diag.parse_errors


# ------------------------------------------------------------- LM mocks

def test_scripted_lm_sequence_and_exhaustion():
    lm = ScriptedLM(["a", "b"])
    assert lm.complete("s", "u") == "a"
    assert lm.complete("s", "u") == "b"
    with pytest.raises(Exception):
        lm.complete("s", "u")


def test_fixture_lm_roundtrip(tmp_path):
    lm = FixtureLM(tmp_path)
    lm.store("sys", "user", "stored response")
    assert lm.complete("sys", "user") == "stored response"
    assert request_hash("sys", "user") == request_hash("sys", "user")
    assert request_hash("sys", "user") != request_hash("sys", "other")


# ------------------------------------------------------------- fit / tune

def test_fit_steps_zero_returns_seeded_initial(cue_only_state):
    plan = CandidatePlan((cushion_event("cue"),))
    sa = SAConfig(steps=0, seed=3)
    shot, lcs = fit_shot_to_events(cue_only_state, plan, sa)
    from cuecoach.annealing import random_shot
    assert shot.to_dict() == random_shot(np.random.default_rng(3)).to_dict()
    assert lcs in (0, 1)


def test_fit_single_cushion_smoke(cue_only_state):
    plan = CandidatePlan((cushion_event("cue"),))
    shot, lcs = fit_shot_to_events(cue_only_state, plan,
                                   SAConfig(steps=60, seed=1))
    assert lcs >= 1


def test_tune_requires_model(mid_state):
    with pytest.raises(ModelMissing):
        tune(mid_state, [(None, None)], None, SAConfig())
    with pytest.raises(ModelMissing):
        tune_shot_candidates(mid_state, ("blue",), None)


def test_tune_argmax_consistency(mid_state, targets1):
    tuned = tune_shot_candidates(mid_state, targets1, StubModel(),
                                 k=3, steps=30, seed=8)
    assert max(tuned.candidate_scores) == pytest.approx(
        tuned.expected_value + tuned.v_s + tuned.v_d)
    assert tuned.post is not None
    assert math.isfinite(tuned.expected_value)


def test_tune_strategy_fixture_vectors(mid_state, targets1):
    # r5 defensive-only, r13 offensive-only: hand values of the spec example
    r = np.zeros(29); r[4] = 1.0; r[12] = 1.0
    assert strategy_value(r, "defensive") == pytest.approx(0.0)
    assert strategy_value(r, "offensive") == pytest.approx(0.0)
    r2 = np.zeros(29); r2[12] = 1.0
    assert strategy_value(r2, "offensive") == pytest.approx(1.0)
    assert strategy_value(r2, "defensive") == pytest.approx(-1.0)
    assert strategy_value(r2, "none") == 0.0
    # masks only cover value rules
    assert W_OFFENSIVE[13:].sum() == 0 and W_DEFENSIVE[13:].sum() == 0


def test_tuned_scores_beat_initials(mid_state, targets1):
    model = StubModel(np.linspace(0.01, 0.19, 10) / np.linspace(0.01, 0.19, 10).sum())
    tuned = tune_shot_candidates(mid_state, targets1, model,
                                 k=2, steps=25, seed=4)
    assert len(tuned.candidate_scores) == 2
    assert max(tuned.candidate_scores) >= min(tuned.candidate_scores)


# ------------------------------------------------------------- explain

def _tuned(mid_state, targets1, model):
    return tune_shot_candidates(mid_state, targets1, model,
                                k=2, steps=20, seed=2)


def test_explainer_context_stable_and_complete(mid_state, targets1):
    tuned = _tuned(mid_state, targets1, StubModel())
    c1 = build_explainer_context(mid_state, tuned)
    c2 = build_explainer_context(mid_state, tuned)
    assert c1 == c2
    assert "V0" in c1 and "theta" in c1 and "phi" in c1
    assert "(0.5000, 0.6000)" in c1  # cue coordinates, 4 decimals
    assert "%" in c1


def test_explain_returns_lm_text(mid_state, targets1):
    tuned = _tuned(mid_state, targets1, StubModel())
    ctx = build_explainer_context(mid_state, tuned)
    out = explain(ScriptedLM(["because physics"]), ctx)
    assert out == "because physics"


def test_rule_report_shape_and_polarity(mid_state, targets1):
    tuned = _tuned(mid_state, targets1, StubModel())
    report = rule_report(tuned)
    assert len(report) == 29
    ids = [row["id"] for row in report]
    assert ids == list(range(1, 30))
    for row in report:
        assert row["polarity"] in ("positive", "negative", "neutral")
        assert 0.0 <= row["value"] <= 1.0
        assert row["likert"]
    # difficulty rules above the moderate bin must read negative
    for row in report[13:]:
        if row["value"] >= 0.625:
            assert row["polarity"] == "negative"


def test_templated_explanation_mentions_rules(mid_state, targets1):
    tuned = _tuned(mid_state, targets1, StubModel())
    text = templated_explanation(tuned, rule_report(tuned))
    assert text
    assert "%.2f" % tuned.shot.v in text or "shot" in text.lower()


# ------------------------------------------------------------- assist

def test_assist_degraded_no_lm(mid_state, small_model):
    cfg = AssistConfig(steps=40, seed=6, want_frames=False)
    res = assist(mid_state, "best shot?", None, small_model, cfg)
    assert res.degraded is True
    assert len(res.rule_report) == 29
    assert res.explanation
    mid_state.validate()  # input untouched
    # the chosen shot must be playable from the given state
    from cuecoach.physics import strike_and_trace
    strike_and_trace(mid_state, res.shot.shot)


def test_assist_requires_model(mid_state):
    with pytest.raises(ModelMissing):
        assist(mid_state, "q", None, None)


def test_assist_with_scripted_lm_deterministic(mid_state, small_model):
    cfg = AssistConfig(steps=30, seed=9, want_frames=False)
    plan_text = "STRATEGY: offensive\nDIFFICULTY: easy\n1. BALL-BALL-cue-blue"
    lm1 = ScriptedLM([plan_text] * 3 + ["fine shot"])
    lm2 = ScriptedLM([plan_text] * 3 + ["fine shot"])
    r1 = assist(mid_state, "pot blue", lm1, small_model, cfg)
    r2 = assist(mid_state, "pot blue", lm2, small_model, cfg)
    assert r1.degraded is False
    assert r1.shot.shot.to_dict() == r2.shot.shot.to_dict()
    assert r1.explanation == "fine shot" == r2.explanation
    assert r1.shot.strategy == "offensive"


def test_assist_unparseable_plans_degrade_but_lm_explains(mid_state, small_model):
    cfg = AssistConfig(steps=30, seed=9, want_frames=False)
    lm = ScriptedLM(["garbage"] * 9 + ["still explained"])
    res = assist(mid_state, "anything", lm, small_model, cfg)
    assert res.degraded is True
    assert res.explanation == "still explained"
