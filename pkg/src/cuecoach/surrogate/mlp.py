"""The value surrogate: a dense rectifier network from rule vectors to
win-rate histograms, trained by seeded mini-batch gradient descent on
cross-entropy against soft histogram targets.

The forward/backward passes are plain numpy functions over weight lists so
the gradient test can diff them against finite differences directly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyDataset, NonFiniteLoss
from .metrics import difficulty_anchors, entropy, max_entropy

N_INPUTS = 29
HIDDEN_WIDTH = 256
N_HIDDEN = 6
DEFAULT_BINS = 10
DEFAULT_HYPER = {"batch": 128, "lr": 0.005, "dropout": 0.25, "epochs": 25}
_LOG_EPS = 1e-12


def init_params(dims, rng):
    """He-scaled gaussian weights, zero biases."""
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        weights.append(rng.normal(0.0, np.sqrt(2.0 / fan_in),
                                  size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def forward(weights, biases, X, dropout: float = 0.0, rng=None):
    """Probabilities plus the cache needed for backprop.

    dropout > 0 applies inverted dropout to hidden activations (training
    mode); inference passes dropout=0.
    """
    n_layers = len(weights)
    inputs = [X]
    relus = []
    masks = []
    h = X
    for layer in range(n_layers - 1):
        z = h @ weights[layer] + biases[layer]
        act = np.maximum(z, 0.0)
        relus.append(act)
        if dropout > 0.0:
            mask = (rng.random(act.shape) >= dropout) / (1.0 - dropout)
            h = act * mask
        else:
            mask = None
            h = act
        masks.append(mask)
        inputs.append(h)
    logits = h @ weights[-1] + biases[-1]
    shifted = logits - logits.max(axis=1, keepdims=True)
    expd = np.exp(shifted)
    probs = expd / expd.sum(axis=1, keepdims=True)
    return probs, (inputs, relus, masks)


def cross_entropy(probs, targets) -> float:
    return float(-(targets * np.log(probs + _LOG_EPS)).sum(axis=1).mean())


def backward(weights, probs, targets, cache):
    """Gradients of the mean cross-entropy w.r.t. every weight and bias."""
    inputs, relus, masks = cache
    batch = probs.shape[0]
    n_layers = len(weights)
    grads_w = [None] * n_layers
    grads_b = [None] * n_layers
    delta = (probs - targets) / batch  # dL/dlogits for softmax + CE
    for layer in range(n_layers - 1, -1, -1):
        grads_w[layer] = inputs[layer].T @ delta
        grads_b[layer] = delta.sum(axis=0)
        if layer > 0:
            dh = delta @ weights[layer].T
            if masks[layer - 1] is not None:
                dh = dh * masks[layer - 1]
            delta = dh * (relus[layer - 1] > 0.0)
    return grads_w, grads_b


@dataclass
class SurrogateModel:
    dims: list[int]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    n: int
    anchors: tuple[float, float, float]
    h_max: float
    hyper: dict = field(default_factory=dict)
    train_loss_curve: list[float] = field(default_factory=list)

    def predict(self, r) -> np.ndarray:
        return predict(self, r)


def predict(model: SurrogateModel, r) -> np.ndarray:
    """Normalized n-bin distribution for one rule vector (dropout off)."""
    x = np.asarray(r, dtype=np.float64).reshape(1, -1)
    probs, _ = forward(model.weights, model.biases, x)
    return probs[0]


def predict_batch(model: SurrogateModel, R) -> np.ndarray:
    probs, _ = forward(model.weights, model.biases,
                       np.asarray(R, dtype=np.float64))
    return probs


def _as_arrays(dataset):
    if isinstance(dataset, tuple) and len(dataset) == 2:
        R, P = dataset
        return np.asarray(R, dtype=np.float64), np.asarray(P, dtype=np.float64)
    R = np.array([np.asarray(s.r, dtype=np.float64) for s in dataset])
    P = np.array([np.asarray(s.p, dtype=np.float64) for s in dataset])
    return R, P


def train(dataset, hyper: dict | None = None, seed: int = 0,
          dims: list[int] | None = None,
          anchor_mode: str = "quantile") -> SurrogateModel:
    """Seeded training run; returns the model with its per-epoch loss curve
    (entry 0 is the loss before any update) and difficulty anchors computed
    from the trained network's entropies over the training inputs."""
    if hasattr(dataset, "__len__") and len(dataset) == 0:
        raise EmptyDataset("cannot train on an empty dataset")
    R, P = _as_arrays(dataset)
    if R.shape[0] == 0:
        raise EmptyDataset("cannot train on an empty dataset")
    hp = dict(DEFAULT_HYPER)
    hp.update(hyper or {})
    n = P.shape[1]
    if dims is None:
        dims = [R.shape[1]] + [HIDDEN_WIDTH] * N_HIDDEN + [n]
    if dims[0] != R.shape[1] or dims[-1] != n:
        raise ValueError("dims do not match the dataset shapes")

    rng = np.random.default_rng(seed)
    weights, biases = init_params(dims, rng)
    batch = int(hp["batch"])
    lr = float(hp["lr"])
    dropout = float(hp["dropout"])
    epochs = int(hp["epochs"])
    m = R.shape[0]

    def full_loss():
        probs, _ = forward(weights, biases, R)
        return cross_entropy(probs, P)

    curve = [full_loss()]
    for epoch in range(epochs):
        order = rng.permutation(m)
        for start in range(0, m, batch):
            idx = order[start:start + batch]
            probs, cache = forward(weights, biases, R[idx],
                                   dropout=dropout, rng=rng)
            grads_w, grads_b = backward(weights, probs, P[idx], cache)
            for layer in range(len(weights)):
                weights[layer] -= lr * grads_w[layer]
                biases[layer] -= lr * grads_b[layer]
        loss = full_loss()
        if not np.isfinite(loss):
            raise NonFiniteLoss(
                f"loss became non-finite at epoch {epoch + 1} "
                f"(lr={lr}, batch={batch}); last finite loss {curve[-1]:.6f}")
        curve.append(loss)

    probs = forward(weights, biases, R)[0]
    entropies = [entropy(p) for p in probs]
    h_max = max_entropy(n)
    anchors = difficulty_anchors(
        entropies, mode=anchor_mode,
        h_max=h_max if anchor_mode == "absolute" else None)
    return SurrogateModel(dims=list(dims), weights=weights, biases=biases,
                          n=n, anchors=anchors, h_max=h_max, hyper=hp,
                          train_loss_curve=curve)


def save_model(model: SurrogateModel, path) -> None:
    doc = {
        "dims": list(model.dims),
        "n": model.n,
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
        "anchors": list(model.anchors),
        "H_max": model.h_max,
        "hyper": model.hyper,
        "train_loss_curve": list(model.train_loss_curve),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_model(path) -> SurrogateModel:
    with open(path) as fh:
        doc = json.load(fh)
    return SurrogateModel(
        dims=list(doc["dims"]),
        weights=[np.asarray(w, dtype=np.float64) for w in doc["weights"]],
        biases=[np.asarray(b, dtype=np.float64) for b in doc["biases"]],
        n=int(doc["n"]),
        anchors=tuple(doc["anchors"]),
        h_max=float(doc["H_max"]),
        hyper=dict(doc["hyper"]),
        train_loss_curve=list(doc["train_loss_curve"]),
    )
