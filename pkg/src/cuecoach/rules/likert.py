"""Seven-level Likert quantization of rule applicability scores."""
from __future__ import annotations

LIKERT_KEYS = ("very low", "low", "mod low", "moderate",
               "mod high", "high", "very high")

# All bins 0.125 wide except "moderate", which spans [0.375, 0.625).
LIKERT_BOUNDARIES = (0.0, 0.125, 0.25, 0.375, 0.625, 0.75, 0.875, 1.0)

_ALIASES = {
    "mod low": 2, "moderately low": 2,
    "mod high": 4, "moderately high": 4,
}


def quantize_likert(x: float) -> tuple[int, str]:
    """Bin a score in [0, 1]; the top bin is closed at 1."""
    x = min(max(float(x), 0.0), 1.0)
    for i in range(7):
        if x < LIKERT_BOUNDARIES[i + 1]:
            return i, LIKERT_KEYS[i]
    return 6, LIKERT_KEYS[6]


def likert_key(bin_index: int) -> str:
    return LIKERT_KEYS[bin_index]


def parse_likert_key(text: str) -> int | None:
    """Bin for a level name; accepts long forms of the 'mod' keys."""
    t = " ".join(text.strip().lower().split())
    if t in _ALIASES:
        return _ALIASES[t]
    for i, k in enumerate(LIKERT_KEYS):
        if t == k:
            return i
    return None
