"""Seeded simulated annealing over shot parameters.

One Metropolis chain with geometric cooling and per-parameter Gaussian
proposals; the azimuth wraps while everything else clamps through the
ShotParams constructor. Used both to fit shots to target event sequences
and to tune them against the value surrogate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .physics import SHOT_BOUNDS, ShotParams


@dataclass(frozen=True)
class SAConfig:
    steps: int = 300
    t0: float = 1.0
    t_end: float = 0.01
    sigma_v: float = 0.4
    sigma_alpha: float = 15.0
    sigma_beta: float = 5.0
    sigma_a: float = 0.08
    sigma_b: float = 0.08
    lam: float = 0.1          # event-fit penalty weight
    p_jump: float = 0.15      # chance of a fresh uniform draw per proposal
    seed: int = 0

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if not (self.t0 > self.t_end > 0.0):
            raise ValueError("need t0 > t_end > 0")


def random_shot(rng: np.random.Generator) -> ShotParams:
    """A uniform draw over the playable box (v kept off the dead zone)."""
    return ShotParams(
        v=float(rng.uniform(0.5, SHOT_BOUNDS["v"][1])),
        alpha=float(rng.uniform(0.0, 360.0)),
        beta=float(rng.uniform(0.0, SHOT_BOUNDS["beta"][1])),
        a=float(rng.uniform(*SHOT_BOUNDS["a"])),
        b=float(rng.uniform(*SHOT_BOUNDS["b"])),
    )


def propose(shot: ShotParams, cfg: SAConfig, rng: np.random.Generator) -> ShotParams:
    # Heavy-tailed mixture: mostly local Gaussian moves, occasionally a
    # fresh uniform draw. Pot windows are often under a degree wide, so a
    # chain stuck in a flat region needs global jumps to find them at all.
    if cfg.p_jump > 0.0 and rng.random() < cfg.p_jump:
        return random_shot(rng)
    return ShotParams(
        v=shot.v + cfg.sigma_v * rng.standard_normal(),
        alpha=(shot.alpha + cfg.sigma_alpha * rng.standard_normal()) % 360.0,
        beta=shot.beta + cfg.sigma_beta * rng.standard_normal(),
        a=shot.a + cfg.sigma_a * rng.standard_normal(),
        b=shot.b + cfg.sigma_b * rng.standard_normal(),
    )


def anneal(energy, initial: ShotParams, cfg: SAConfig,
           rng: np.random.Generator | None = None):
    """Minimize `energy(shot)`.

    Returns (best_shot, best_energy, best_curve) where best_curve[k] is the
    best energy seen up to and including step k (so it is nonincreasing).
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    current = initial
    e_cur = float(energy(current))
    best = current
    e_best = e_cur
    curve = [e_best]
    if cfg.steps == 0:
        return best, e_best, curve
    # geometric schedule from t0 to t_end across the chain
    ratio = cfg.t_end / cfg.t0
    denom = max(cfg.steps - 1, 1)
    for k in range(cfg.steps):
        temp = cfg.t0 * ratio ** (k / denom)
        cand = propose(current, cfg, rng)
        e_cand = float(energy(cand))
        de = e_cand - e_cur
        if de <= 0.0 or rng.random() < math.exp(-de / temp):
            current = cand
            e_cur = e_cand
        if e_cur < e_best:
            best = current
            e_best = e_cur
        curve.append(e_best)
    return best, e_best, curve
