"""Distribution metrics for the value surrogate: expected value, entropy,
and the entropy-based difficulty anchors."""
from __future__ import annotations

import numpy as np

from ..errors import EmptyInput

DIFFICULTY_LABELS = ("easy", "medium", "hard", "none")


def expected_value(p) -> float:
    """Mean win rate implied by a bin histogram, using bin centers."""
    p = np.asarray(p, dtype=np.float64)
    n = p.size
    centers = (np.arange(n) + 0.5) / n
    return float(p @ centers)


def entropy(p) -> float:
    """Shannon entropy in nats with the 0*log0 = 0 convention."""
    p = np.asarray(p, dtype=np.float64)
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum())


def max_entropy(n: int) -> float:
    return float(np.log(n))


def difficulty_anchors(entropies, mode: str = "quantile",
                       h_max: float | None = None):
    """(h_low, h_med, h_high): mean entropy of the low/medium/high sections
    of the entropy distribution.

    mode="quantile" splits the sorted values at the 0.4 and 0.8 quantile
    fractions; mode="absolute" instead thresholds each value's fraction of
    h_max at 0.4 and 0.8. An empty section inherits the global mean.
    """
    vals = np.sort(np.asarray(list(entropies), dtype=np.float64))
    m = vals.size
    if m == 0:
        raise EmptyInput("difficulty_anchors needs at least one entropy")
    if mode == "quantile":
        i0 = int(np.floor(0.4 * m))
        i1 = int(np.floor(0.8 * m))
        sections = (vals[:i0], vals[i0:i1], vals[i1:])
    elif mode == "absolute":
        if h_max is None or h_max <= 0.0:
            raise ValueError("absolute mode needs a positive h_max")
        frac = vals / h_max
        sections = (vals[frac < 0.4],
                    vals[(frac >= 0.4) & (frac < 0.8)],
                    vals[frac >= 0.8])
    else:
        raise ValueError(f"unknown anchor mode: {mode!r}")
    overall = float(vals.mean())
    return tuple(float(s.mean()) if s.size else overall for s in sections)


def difficulty_score(h_t: float, d: str, anchors, h_max: float) -> float:
    """v_d = h_max - |h_t - h_d| for the anchor matching label d; 0 when
    no difficulty was requested."""
    if d == "none":
        return 0.0
    try:
        h_d = anchors[("easy", "medium", "hard").index(d)]
    except ValueError:
        raise ValueError(f"unknown difficulty label: {d!r}") from None
    return float(h_max - abs(h_t - h_d))
