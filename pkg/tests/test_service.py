import json

import pytest
from fastapi.testclient import TestClient

from cuecoach.assistant.lm import ScriptedLM
from cuecoach.rules import RULE_SHORT_NAMES, RULE_TEXTS
from cuecoach.service.app import ServiceConfig, create_app

VALID_STATE = {
    "balls": {
        "cue": {"x": 0.5, "y": 0.6},
        "blue": {"x": 0.35, "y": 1.3},
        "red": {"x": 0.72, "y": 1.62},
        "green": {"x": 0.2, "y": 0.35},
        "yellow": {"x": 0.0, "y": 0.0, "on_table": False},
        "black": {"x": 0.0, "y": 0.0, "on_table": False},
        "pink": {"x": 0.0, "y": 0.0, "on_table": False},
    }
}
VALID_SHOT = {"v": 1.2, "alpha": 80.0}


@pytest.fixture(scope="module")
def client(small_model):
    app = create_app(ServiceConfig(), model=small_model, lm=None)
    return TestClient(app, raise_server_exceptions=False)


@pytest.fixture(scope="module")
def bare_client():
    app = create_app(ServiceConfig(), model=None, lm=None)
    return TestClient(app, raise_server_exceptions=False)


def test_healthz(client):
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_rules_catalog(client):
    resp = client.get("/api/v1/rules")
    assert resp.status_code == 200
    rows = resp.json()
    assert len(rows) == 29
    assert [row["id"] for row in rows] == list(range(1, 30))
    first = rows[0]
    assert first["text"] == RULE_TEXTS[1]
    assert first["name"] == RULE_SHORT_NAMES[1]
    assert first["category"] in ("value", "difficulty")
    assert isinstance(first["offensive"], bool)
    assert rows[13]["category"] == "difficulty"


def test_simulate_ok(client):
    resp = client.post("/api/v1/simulate",
                       json={"state": VALID_STATE, "shot": VALID_SHOT})
    assert resp.status_code == 200
    body = resp.json()
    assert body["sim_time"] > 0
    assert body["frames"] and not body["frames_truncated"]
    assert set(body["post_state"]["balls"]) == set(VALID_STATE["balls"])
    # playback must land exactly on the post state
    last = body["frames"][-1]["balls"]
    for bid, ball in body["post_state"]["balls"].items():
        assert last[bid]["x"] == pytest.approx(ball["x"], abs=1e-9)
        assert last[bid]["y"] == pytest.approx(ball["y"], abs=1e-9)
        assert last[bid]["on_table"] == ball["on_table"]
    for ev in body["trace"]:
        assert set(ev) == {"event", "x", "y", "t"}


def test_simulate_rejects_out_of_range_shot(client):
    resp = client.post("/api/v1/simulate",
                       json={"state": VALID_STATE,
                             "shot": {"v": 99.0, "alpha": 0.0}})
    assert resp.status_code == 400
    assert resp.json()["code"] == "invalid_shot"


def test_simulate_clamp_accepts(client):
    resp = client.post("/api/v1/simulate",
                       json={"state": VALID_STATE,
                             "shot": {"v": 99.0, "alpha": 0.0},
                             "clamp": True})
    assert resp.status_code == 200


def test_simulate_invalid_state(client):
    bad = {"balls": {"cue": {"x": 0.5, "y": 0.5},
                     "zeppelin": {"x": 0.1, "y": 0.1}}}
    resp = client.post("/api/v1/simulate",
                       json={"state": bad, "shot": VALID_SHOT})
    assert resp.status_code == 400
    assert resp.json()["code"] == "invalid_state"


def test_simulate_malformed_body(client):
    resp = client.post("/api/v1/simulate", json={"state": VALID_STATE})
    assert resp.status_code == 400
    body = resp.json()
    assert body["code"] == "invalid_request"
    assert body["stage"] == "validation"


def test_agent_shot_greedy(client):
    resp = client.post("/api/v1/agent-shot",
                       json={"state": VALID_STATE, "agent": "greedy"})
    assert resp.status_code == 200
    shot = resp.json()["shot"]
    assert set(shot) == {"v", "alpha", "beta", "a", "b"}


def test_agent_shot_surrogate_uses_model(client):
    resp = client.post("/api/v1/agent-shot",
                       json={"state": VALID_STATE, "agent": "surrogate",
                             "seed": 1})
    assert resp.status_code == 200


def test_agent_shot_unknown(client):
    resp = client.post("/api/v1/agent-shot",
                       json={"state": VALID_STATE, "agent": "zippy"})
    assert resp.status_code == 404
    assert resp.json()["code"] == "unknown_agent"


def test_agent_shot_surrogate_without_model(bare_client):
    resp = bare_client.post("/api/v1/agent-shot",
                            json={"state": VALID_STATE, "agent": "surrogate"})
    assert resp.status_code == 409
    assert resp.json()["code"] == "model_missing"


def test_assist_degraded(client):
    resp = client.post("/api/v1/assist",
                       json={"state": VALID_STATE, "query": "best shot?",
                             "steps": 25, "seed": 4})
    assert resp.status_code == 200
    body = resp.json()
    assert body["degraded"] is True
    assert len(body["rule_report"]) == 29
    assert body["explanation"]
    assert body["frames"]
    assert 0.0 <= body["expected_value"] <= 1.0
    assert set(body["shot"]) == {"v", "alpha", "beta", "a", "b"}
    assert body["strategy"] == "none" and body["difficulty"] == "none"


def test_assist_no_model(bare_client):
    resp = bare_client.post("/api/v1/assist",
                            json={"state": VALID_STATE, "query": "hi"})
    assert resp.status_code == 409
    assert resp.json()["code"] == "model_missing"


def test_assist_degraded_disabled(small_model):
    app = create_app(ServiceConfig(degraded_enabled=False),
                     model=small_model, lm=None)
    resp = TestClient(app, raise_server_exceptions=False).post(
        "/api/v1/assist", json={"state": VALID_STATE, "query": "hi"})
    assert resp.status_code == 503
    assert resp.json()["code"] == "lm_unavailable"


def test_assist_with_lm(small_model):
    plan = "STRATEGY: offensive\nDIFFICULTY: easy\n1. BALL-BALL-cue-blue"
    lm = ScriptedLM([plan] * 3 + ["clean explanation"])
    app = create_app(ServiceConfig(), model=small_model, lm=lm)
    resp = TestClient(app, raise_server_exceptions=False).post(
        "/api/v1/assist",
        json={"state": VALID_STATE, "query": "pot blue", "steps": 25})
    assert resp.status_code == 200
    body = resp.json()
    assert body["degraded"] is False
    assert body["explanation"] == "clean explanation"
    assert body["strategy"] == "offensive"


def test_assist_validation_bounds(client):
    resp = client.post("/api/v1/assist",
                       json={"state": VALID_STATE, "query": "q",
                             "n_candidates": 0})
    assert resp.status_code == 400
    assert resp.json()["code"] == "invalid_request"


def test_frames_cap(small_model):
    app = create_app(ServiceConfig(frames_cap=3), model=small_model, lm=None)
    resp = TestClient(app, raise_server_exceptions=False).post(
        "/api/v1/simulate", json={"state": VALID_STATE, "shot": VALID_SHOT})
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["frames"]) == 3
    assert body["frames_truncated"] is True


def test_service_config_load(tmp_path, monkeypatch):
    cfg_file = tmp_path / "svc.json"
    cfg_file.write_text(json.dumps(
        {"degraded_enabled": False, "frames_cap": 42}))
    cfg = ServiceConfig.load(str(cfg_file), env={})
    assert cfg.degraded_enabled is False
    assert cfg.frames_cap == 42
    assert cfg.model_path is None
    cfg2 = ServiceConfig.load(str(cfg_file), env={"MODEL_PATH": "/m.json"})
    assert cfg2.model_path == "/m.json"
