"""cuecoach: 3Pool simulation, rule-based shot evaluation, and an
explainable shot assistant."""

__version__ = "0.1.0"

from .physics import (  # noqa: F401
    DEFAULT_SPEC,
    Event,
    ShotParams,
    SimResult,
    TableSpec,
    TableState,
    strike_and_trace,
)
