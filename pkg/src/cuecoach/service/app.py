"""FastAPI facade over the simulator, the agents, and the assistant."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import List, Optional, Tuple

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..agents import AGENT_NAMES, create_agent
from ..assistant.core import AssistConfig, assist
from ..assistant.lm import lm_from_env
from ..errors import CueCoachError, InvalidShot, LMUnavailable, ModelMissing
from ..game import PLAYER_TARGETS
from ..physics.engine import strike_and_trace
from ..physics.types import Frame
from ..rules.evaluators import rule_catalog
from ..rules.texts import RULE_SHORT_NAMES
from ..surrogate.mlp import load_model
from .models import (
    AgentShotRequest,
    AgentShotResponse,
    AssistRequest,
    AssistResponse,
    BallModel,
    ErrorBody,
    EventModel,
    FrameModel,
    ShotModel,
    SimulateRequest,
    SimulateResponse,
    StateModel,
)

log = logging.getLogger(__name__)

FRAMES_CAP = 900  # 30 s at 30 fps

# HTTP status per error code; anything else is a 500 with its stage tag
_STATUS = {
    "invalid_state": 400,
    "invalid_shot": 400,
    "empty_input": 400,
    "unknown_agent": 404,
    "model_missing": 409,
    "lm_unavailable": 503,
}


@dataclass
class ServiceConfig:
    model_path: Optional[str] = None
    cors_origins: List[str] = dc_field(default_factory=lambda: ["*"])
    degraded_enabled: bool = True
    frames_cap: int = FRAMES_CAP
    jobs: int = 1  # worker cap for heavy endpoints (desk scale: inline)

    @classmethod
    def load(cls, path: Optional[str] = None, env=None) -> "ServiceConfig":
        """JSON config file plus environment overrides."""
        src = os.environ if env is None else env
        data = {}
        if path:
            data = json.loads(Path(path).read_text())
        cfg = cls(**data)
        if src.get("MODEL_PATH"):
            cfg.model_path = src["MODEL_PATH"]
        return cfg


def _error_response(status: int, code: str, stage: str, message: str) -> JSONResponse:
    body = ErrorBody(code=code, stage=stage, message=message)
    return JSONResponse(status_code=status, content=body.model_dump())


def _frames_payload(frames: Optional[List[Frame]], cap: int) -> Tuple[List[FrameModel], bool]:
    if not frames:
        return [], False
    truncated = len(frames) > cap
    out = [
        FrameModel(t=f.t, balls={
            bid: BallModel(x=b.x, y=b.y, on_table=b.on_table)
            for bid, b in sorted(f.state.balls.items())
        })
        for f in frames[:cap]
    ]
    return out, truncated


def create_app(
    config: Optional[ServiceConfig] = None,
    model=None,
    lm=None,
) -> FastAPI:
    """Build the service; model and lm default from config/environment."""
    cfg = config or ServiceConfig()
    if model is None and cfg.model_path:
        model = load_model(cfg.model_path)
    if lm is None:
        lm = lm_from_env()

    app = FastAPI(title="cuecoach", version="0.1.0")
    app.state.model = model
    app.state.lm = lm
    app.state.config = cfg

    app.add_middleware(
        CORSMiddleware,
        allow_origins=cfg.cors_origins,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(CueCoachError)
    async def _domain_error(request: Request, exc: CueCoachError):
        status = _STATUS.get(exc.code, 500)
        return _error_response(status, exc.code, exc.stage, exc.message)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return _error_response(
            400, "invalid_request", "validation", str(exc.errors()[:3]))

    @app.exception_handler(Exception)
    async def _unexpected_error(request: Request, exc: Exception):
        log.exception("unhandled service error")
        return _error_response(500, "internal", "internal", str(exc))

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/api/v1/rules")
    def rules():
        out = rule_catalog()
        for row in out:
            row["name"] = RULE_SHORT_NAMES[row["id"]]
        return out

    @app.post("/api/v1/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest):
        state = req.state.to_state()
        shot = req.shot.to_shot()
        if shot.clamped and not req.clamp:
            raise InvalidShot(
                "shot parameters out of bounds (pass clamp=true to accept "
                f"the clamped shot {shot.to_dict()})")
        sim = strike_and_trace(state, shot, want_frames=True)
        frames, truncated = _frames_payload(sim.frames, cfg.frames_cap)
        return SimulateResponse(
            post_state=StateModel.from_state(sim.post),
            trace=[EventModel(**ev.to_dict()) for ev in sim.trace],
            frames=frames,
            frames_truncated=truncated,
            sim_time=sim.sim_time,
        )

    @app.post("/api/v1/agent-shot", response_model=AgentShotResponse)
    def agent_shot(req: AgentShotRequest):
        state = req.state.to_state()
        state.validate()
        if req.agent not in AGENT_NAMES:
            raise _unknown_agent(req.agent)
        agent = create_agent(req.agent, model=app.state.model)
        shot = agent.select_shot(state, PLAYER_TARGETS[1], req.seed)
        return AgentShotResponse(shot=ShotModel.from_shot(shot))

    @app.post("/api/v1/assist", response_model=AssistResponse)
    def assist_endpoint(req: AssistRequest):
        state = req.state.to_state()
        if app.state.lm is None and not cfg.degraded_enabled:
            raise LMUnavailable(
                "no language model configured and degraded mode is disabled")
        if app.state.model is None:
            raise ModelMissing(
                "no surrogate model loaded (set MODEL_PATH or pass model)")
        result = assist(
            state,
            req.query,
            app.state.lm,
            app.state.model,
            AssistConfig(
                n_candidates=req.n_candidates,
                steps=req.steps,
                seed=req.seed,
            ),
        )
        frames, truncated = _frames_payload(result.frames, cfg.frames_cap)
        tuned = result.shot
        return AssistResponse(
            shot=ShotModel.from_shot(tuned.shot),
            explanation=result.explanation,
            degraded=result.degraded,
            rule_report=result.rule_report,
            trace=[EventModel(**ev.to_dict()) for ev in tuned.trace],
            frames=frames,
            frames_truncated=truncated,
            expected_value=tuned.expected_value,
            strategy=tuned.strategy,
            difficulty=tuned.difficulty,
            post_state=StateModel.from_state(tuned.post),
        )

    return app


class _UnknownAgent(CueCoachError):
    code = "unknown_agent"
    stage = "agent"


def _unknown_agent(name: str) -> CueCoachError:
    return _UnknownAgent(
        f"unknown agent: {name!r} (known: {', '.join(AGENT_NAMES)})")
