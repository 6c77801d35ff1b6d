from ..game import NoiseModel
from .metrics import (
    DIFFICULTY_LABELS,
    difficulty_anchors,
    difficulty_score,
    entropy,
    expected_value,
    max_entropy,
)
from .mlp import (
    DEFAULT_BINS,
    DEFAULT_HYPER,
    SurrogateModel,
    backward,
    cross_entropy,
    forward,
    init_params,
    load_model,
    predict,
    predict_batch,
    save_model,
    train,
)
from .sampling import (
    TrainingSample,
    gen_dataset,
    gen_sample,
    histogram,
    load_dataset,
    save_dataset,
)

__all__ = [
    "DEFAULT_BINS",
    "DEFAULT_HYPER",
    "DIFFICULTY_LABELS",
    "NoiseModel",
    "SurrogateModel",
    "TrainingSample",
    "backward",
    "cross_entropy",
    "difficulty_anchors",
    "difficulty_score",
    "entropy",
    "expected_value",
    "forward",
    "gen_dataset",
    "gen_sample",
    "histogram",
    "init_params",
    "load_dataset",
    "load_model",
    "max_entropy",
    "predict",
    "predict_batch",
    "save_dataset",
    "save_model",
    "train",
]
