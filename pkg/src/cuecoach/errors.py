"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` and the pipeline
``stage`` it surfaced in, so the HTTP layer can map them onto the
{code, stage, message} wire format without inspecting types.
"""


class CueCoachError(Exception):
    code = "internal"
    stage = "internal"

    def __init__(self, message: str, *, stage: str | None = None):
        super().__init__(message)
        self.message = message
        if stage is not None:
            self.stage = stage

    def __str__(self) -> str:
        # message is mutable (callers prepend context); keep str() in sync
        return self.message


class InvalidState(CueCoachError):
    code = "invalid_state"
    stage = "validation"


class InvalidShot(CueCoachError):
    code = "invalid_shot"
    stage = "validation"


class PlacementFailed(CueCoachError):
    code = "placement_failed"
    stage = "game"


class AgentError(CueCoachError):
    code = "agent_error"
    stage = "agent"

    def __init__(self, message: str, *, turn: int | None = None):
        super().__init__(message)
        self.turn = turn


class ModelMissing(CueCoachError):
    code = "model_missing"
    stage = "surrogate"


class EmptyInput(CueCoachError):
    code = "empty_input"
    stage = "surrogate"


class EmptyDataset(CueCoachError):
    code = "empty_dataset"
    stage = "surrogate"


class NonFiniteLoss(CueCoachError):
    code = "non_finite_loss"
    stage = "training"


class DatasetTooSmall(CueCoachError):
    code = "dataset_too_small"
    stage = "harness"


class LMUnavailable(CueCoachError):
    code = "lm_unavailable"
    stage = "lm"


class ParseFailure(CueCoachError):
    code = "parse_failure"
    stage = "recommender"
