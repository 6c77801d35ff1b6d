import numpy as np
import pytest

from cuecoach.agents import GreedyAgent
from cuecoach.game import PLAYER_TARGETS, random_table_state
from cuecoach.physics import BALL_IDS, BallState, TableState
from cuecoach.surrogate.mlp import train
from cuecoach.surrogate.sampling import gen_dataset


def state_from(**positions) -> TableState:
    balls = {}
    for bid in BALL_IDS:
        if bid in positions:
            x, y = positions[bid]
            balls[bid] = BallState(x, y, True)
        else:
            balls[bid] = BallState(0.0, 0.0, False)
    return TableState(balls=balls)


@pytest.fixture(scope="session")
def small_dataset():
    """80 quick greedy samples; shared by training and assistant tests."""
    return gen_dataset(GreedyAgent(), 80, M=2, N=1, seed=9)


@pytest.fixture(scope="session")
def small_model(small_dataset):
    return train(small_dataset,
                 hyper={"batch": 16, "lr": 0.02, "dropout": 0.0, "epochs": 8},
                 seed=1)


@pytest.fixture(scope="session")
def mid_state():
    """A fixed mid-game state: three balls left, nothing frozen."""
    return state_from(cue=(0.5, 0.6), blue=(0.35, 1.3), red=(0.72, 1.62),
                      green=(0.2, 0.35))


@pytest.fixture(scope="session")
def rack_state():
    return random_table_state(np.random.default_rng(1234))


@pytest.fixture(scope="session")
def cue_only_state():
    """Empty table except the cue ball (single-cushion fit scenario)."""
    return state_from(cue=(0.5, 1.0))


@pytest.fixture(scope="session")
def targets1():
    return PLAYER_TARGETS[1]
