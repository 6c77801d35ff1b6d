"""Interactive assistant: LM recommender, event fitting, tuning, explanation."""

from .core import AssistConfig, AssistResult, assist, templated_explanation
from .explain import build_explainer_context, explain, rule_report
from .lcs import encode_events, lcs_match, lcs_match_packed
from .lm import FixtureLM, HttpChatLM, LMClient, ScriptedLM, lm_from_env, request_hash
from .prompts import (
    EXPLAINER_SYSTEM,
    EXPLAINER_TASK,
    RECOMMENDER_SYSTEM,
    RECOMMENDER_TASK,
    RELEVANCE_WITH_R_TASK,
    RELEVANCE_WITHOUT_R_TASK,
    render_system,
    render_user,
)
from .recommend import (
    CandidatePlan,
    build_recommender_user,
    parse_recommendation,
    recommend,
)
from .tuner import TunedShot, fit_shot_to_events, tune, tune_shot_candidates

__all__ = [
    "AssistConfig",
    "AssistResult",
    "CandidatePlan",
    "EXPLAINER_SYSTEM",
    "EXPLAINER_TASK",
    "FixtureLM",
    "HttpChatLM",
    "LMClient",
    "RECOMMENDER_SYSTEM",
    "RECOMMENDER_TASK",
    "RELEVANCE_WITHOUT_R_TASK",
    "RELEVANCE_WITH_R_TASK",
    "ScriptedLM",
    "TunedShot",
    "assist",
    "build_explainer_context",
    "build_recommender_user",
    "encode_events",
    "explain",
    "fit_shot_to_events",
    "lcs_match",
    "lcs_match_packed",
    "lm_from_env",
    "parse_recommendation",
    "recommend",
    "render_system",
    "render_user",
    "request_hash",
    "rule_report",
    "templated_explanation",
    "tune",
    "tune_shot_candidates",
]
