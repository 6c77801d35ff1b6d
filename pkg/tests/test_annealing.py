import numpy as np
import pytest

from cuecoach.annealing import SAConfig, anneal, propose, random_shot
from cuecoach.physics import SHOT_BOUNDS, ShotParams


def quad_energy(shot: ShotParams) -> float:
    return (shot.v - 2.0) ** 2 + (shot.a - 0.1) ** 2


def test_config_validation():
    with pytest.raises(ValueError):
        SAConfig(steps=-1)
    with pytest.raises(ValueError):
        SAConfig(t0=0.01, t_end=0.01)
    with pytest.raises(ValueError):
        SAConfig(t0=1.0, t_end=-1.0)


def test_zero_steps_returns_initial():
    init = ShotParams(v=1.0, alpha=10.0, beta=0.0, a=0.0, b=0.0)
    best, e, curve = anneal(quad_energy, init, SAConfig(steps=0, seed=1))
    assert best is init
    assert e == pytest.approx(quad_energy(init))
    assert curve == [e]


def test_best_curve_nonincreasing():
    init = random_shot(np.random.default_rng(3))
    _, _, curve = anneal(quad_energy, init, SAConfig(steps=200, seed=2))
    assert len(curve) == 201
    assert all(a >= b for a, b in zip(curve, curve[1:]))


def test_anneal_improves_quadratic():
    init = ShotParams(v=0.5, alpha=0.0, beta=0.0, a=-0.2, b=0.0)
    best, e, _ = anneal(quad_energy, init, SAConfig(steps=400, seed=5))
    assert e < quad_energy(init)
    assert abs(best.v - 2.0) < 0.5


def test_anneal_deterministic():
    init = random_shot(np.random.default_rng(7))
    cfg = SAConfig(steps=150, seed=9)
    a = anneal(quad_energy, init, cfg)
    b = anneal(quad_energy, init, cfg)
    assert a[0].to_dict() == b[0].to_dict()
    assert a[1] == b[1]
    assert a[2] == b[2]


def test_random_shot_in_bounds():
    rng = np.random.default_rng(11)
    for _ in range(200):
        s = random_shot(rng)
        assert SHOT_BOUNDS["v"][0] <= s.v <= SHOT_BOUNDS["v"][1]
        assert 0.0 <= s.alpha < 360.0
        assert SHOT_BOUNDS["beta"][0] <= s.beta <= SHOT_BOUNDS["beta"][1]
        assert SHOT_BOUNDS["a"][0] <= s.a <= SHOT_BOUNDS["a"][1]
        assert SHOT_BOUNDS["b"][0] <= s.b <= SHOT_BOUNDS["b"][1]


def test_propose_clamps_to_bounds():
    rng = np.random.default_rng(13)
    cfg = SAConfig(sigma_v=5.0, sigma_a=1.0, sigma_b=1.0, p_jump=0.0)
    shot = ShotParams(v=SHOT_BOUNDS["v"][1], alpha=350.0, beta=0.0, a=0.0, b=0.0)
    for _ in range(100):
        cand = propose(shot, cfg, rng)
        assert SHOT_BOUNDS["v"][0] <= cand.v <= SHOT_BOUNDS["v"][1]
        assert 0.0 <= cand.alpha < 360.0
        assert SHOT_BOUNDS["a"][0] <= cand.a <= SHOT_BOUNDS["a"][1]


def test_propose_jump_mixture():
    rng = np.random.default_rng(17)
    base = ShotParams(v=1.0, alpha=0.0, beta=0.0, a=0.0, b=0.0)
    always = SAConfig(p_jump=1.0)
    never = SAConfig(p_jump=0.0, sigma_v=1e-9, sigma_alpha=1e-9,
                     sigma_beta=1e-9, sigma_a=1e-9, sigma_b=1e-9)
    jumped = propose(base, always, rng)
    assert abs(jumped.alpha - base.alpha) > 1e-6 or abs(jumped.v - base.v) > 1e-6
    local = propose(base, never, rng)
    assert abs(local.v - base.v) < 1e-6
