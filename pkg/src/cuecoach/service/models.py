"""Wire models for the HTTP service (pydantic v2)."""

from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from ..physics.types import ShotParams, TableState


class BallModel(BaseModel):
    x: float
    y: float
    on_table: bool = True


class StateModel(BaseModel):
    balls: Dict[str, BallModel]

    def to_state(self) -> TableState:
        return TableState.from_dict(
            {"balls": {k: v.model_dump() for k, v in self.balls.items()}})

    @classmethod
    def from_state(cls, state: TableState) -> "StateModel":
        return cls(balls={
            bid: BallModel(x=b.x, y=b.y, on_table=b.on_table)
            for bid, b in sorted(state.balls.items())
        })


class ShotModel(BaseModel):
    v: float
    alpha: float
    beta: float = 0.0
    a: float = 0.0
    b: float = 0.0

    def to_shot(self) -> ShotParams:
        return ShotParams(v=self.v, alpha=self.alpha, beta=self.beta,
                          a=self.a, b=self.b)

    @classmethod
    def from_shot(cls, shot: ShotParams) -> "ShotModel":
        return cls(v=shot.v, alpha=shot.alpha, beta=shot.beta,
                   a=shot.a, b=shot.b)


class EventModel(BaseModel):
    event: str
    x: float
    y: float
    t: float


class FrameModel(BaseModel):
    t: float
    balls: Dict[str, BallModel]


class SimulateRequest(BaseModel):
    state: StateModel
    shot: ShotModel
    seed: int = 0
    clamp: bool = False  # accept out-of-range parameters by clamping


class SimulateResponse(BaseModel):
    post_state: StateModel
    trace: List[EventModel]
    frames: List[FrameModel]
    frames_truncated: bool = False
    sim_time: float


class AssistRequest(BaseModel):
    state: StateModel
    query: str
    n_candidates: int = Field(default=5, ge=1, le=16)
    steps: int = Field(default=300, ge=0, le=5000)
    seed: int = 0


class RuleReportRow(BaseModel):
    id: int
    name: str
    value: float
    likert: str
    polarity: str


class AssistResponse(BaseModel):
    shot: ShotModel
    explanation: str
    degraded: bool
    rule_report: List[RuleReportRow]
    trace: List[EventModel]
    frames: List[FrameModel]
    frames_truncated: bool = False
    expected_value: float
    strategy: str
    difficulty: str
    post_state: StateModel


class AgentShotRequest(BaseModel):
    state: StateModel
    agent: str
    seed: int = 0


class AgentShotResponse(BaseModel):
    shot: ShotModel


class ErrorBody(BaseModel):
    code: str
    stage: str
    message: str


class RuleCatalogEntry(BaseModel):
    id: int
    text: str
    category: str
    offensive: bool
    defensive: bool
    name: Optional[str] = None
