"""Feedforward network for the handoff decision: 5 inputs (4 encoded levels
plus a constant bias), 20 tanh hidden units, one linear output unit.

Trained online by backpropagation on squared error L = (y - target)^2 / 2
with targets +1 (handoff) and -1 (no handoff). The tanh derivative is taken
from the unit output: d tanh(v)/dv = 1 - tanh(v)^2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

N_INPUTS = 5
N_HIDDEN = 20
ACTIVATION = "tanh"


class TrainingDidNotConverge(RuntimeError):
    def __init__(self, epochs, final_max_error):
        super().__init__(
            f"max per-sample error {final_max_error:.4f} after "
            f"{epochs} epochs")
        self.epochs = epochs
        self.final_max_error = final_max_error


@dataclass(frozen=True)
class NetworkWeights:
    w_hidden: np.ndarray  # (N_HIDDEN, N_INPUTS)
    w_output: np.ndarray  # (N_HIDDEN,)

    def __post_init__(self):
        w_h = np.asarray(self.w_hidden, dtype=np.float64)
        w_o = np.asarray(self.w_output, dtype=np.float64)
        if w_h.shape != (N_HIDDEN, N_INPUTS):
            raise ValueError(
                f"w_hidden must be {(N_HIDDEN, N_INPUTS)}, got {w_h.shape}")
        if w_o.shape != (N_HIDDEN,):
            raise ValueError(f"w_output must be ({N_HIDDEN},), got {w_o.shape}")
        if not (np.all(np.isfinite(w_h)) and np.all(np.isfinite(w_o))):
            raise ValueError("weights must be finite")
        object.__setattr__(self, "w_hidden", w_h)
        object.__setattr__(self, "w_output", w_o)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    max_epochs: int = 10000
    stop_tolerance: float = 0.2
    init_range: float = 0.5
    shuffle_seed: int = 42

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if not 0 < self.stop_tolerance < 2:
            raise ValueError("stop_tolerance must lie in (0, 2)")
        if int(self.max_epochs) != self.max_epochs or self.max_epochs < 0:
            raise ValueError("max_epochs must be a non-negative integer")
        if self.init_range < 0:
            raise ValueError("init_range must be >= 0")


@dataclass(frozen=True)
class TrainingSample:
    x: np.ndarray  # (N_INPUTS,), last slot is the +1 bias
    target: float  # +1 handoff, -1 no handoff

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        if x.shape != (N_INPUTS,):
            raise ValueError(f"x must be ({N_INPUTS},), got {x.shape}")
        if x[-1] != 1.0:
            raise ValueError("bias slot x[4] must be +1")
        if self.target not in (-1.0, 1.0):
            raise ValueError("target must be +1 or -1")
        object.__setattr__(self, "x", x)


class TrainResult(NamedTuple):
    weights: NetworkWeights
    epochs_used: int
    final_max_error: float
    loss_history: list | None


def _init_from_rng(rng: np.random.Generator, init_range: float) -> NetworkWeights:
    return NetworkWeights(
        w_hidden=rng.uniform(-init_range, init_range, (N_HIDDEN, N_INPUTS)),
        w_output=rng.uniform(-init_range, init_range, N_HIDDEN),
    )


def init(seed, init_range: float = 0.5) -> NetworkWeights:
    """Uniform weight initialisation on [-init_range, +init_range]."""
    return _init_from_rng(np.random.default_rng(seed), init_range)


def forward(net: NetworkWeights, x):
    """Returns (y, hidden): hidden = tanh(W_h x), y = w_o . hidden."""
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("input must be finite")
    hidden = np.tanh(net.w_hidden @ x)
    y = float(net.w_output @ hidden)
    return y, hidden


def gradient(net: NetworkWeights, sample: TrainingSample):
    """Analytic gradients of L = (y - target)^2 / 2 for both weight layers."""
    y, hidden = forward(net, sample.x)
    err = y - sample.target
    g_output = err * hidden
    back = err * net.w_output * (1.0 - hidden * hidden)
    g_hidden = np.outer(back, sample.x)
    return g_hidden, g_output


def classify(net: NetworkWeights, x) -> int:
    """Sign of the output; exactly zero maps to -1 (no handoff)."""
    y, _ = forward(net, x)
    return 1 if y > 0 else -1


def _max_abs_error(w_hidden, w_output, xs, targets):
    y = np.tanh(xs @ w_hidden.T) @ w_output
    return float(np.max(np.abs(y - targets)))


def train(dataset, config: TrainConfig, initial: NetworkWeights | None = None,
          record_loss: bool = False) -> TrainResult:
    """Online gradient descent with per-epoch shuffling.

    Stops once the max per-sample |y - target| over the dataset drops below
    config.stop_tolerance; raises TrainingDidNotConverge at max_epochs.
    """
    if len(dataset) == 0:
        raise ValueError("dataset must not be empty")
    rng = np.random.default_rng(config.shuffle_seed)
    if initial is None:
        initial = _init_from_rng(rng, config.init_range)
    w_hidden = initial.w_hidden.copy()
    w_output = initial.w_output.copy()
    xs = np.stack([s.x for s in dataset])
    targets = np.array([s.target for s in dataset])
    lr = config.learning_rate
    n = len(dataset)
    history = [] if record_loss else None
    max_err = _max_abs_error(w_hidden, w_output, xs, targets)
    for epoch in range(1, config.max_epochs + 1):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for idx in order:
            x = xs[idx]
            hidden = np.tanh(w_hidden @ x)
            y = w_output @ hidden
            err = y - targets[idx]
            epoch_loss += 0.5 * err * err
            back = err * w_output * (1.0 - hidden * hidden)
            w_output -= lr * err * hidden
            w_hidden -= lr * np.outer(back, x)
        if record_loss:
            history.append(epoch_loss / n)
        max_err = _max_abs_error(w_hidden, w_output, xs, targets)
        if max_err < config.stop_tolerance:
            return TrainResult(NetworkWeights(w_hidden, w_output), epoch,
                               max_err, history)
    raise TrainingDidNotConverge(config.max_epochs, max_err)


def save_weights(net: NetworkWeights, path):
    doc = {
        "hidden": net.w_hidden.tolist(),
        "output": net.w_output.tolist(),
        "activation": ACTIVATION,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_weights(path) -> NetworkWeights:
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "hidden" not in doc or "output" not in doc:
        raise ValueError("weights file must contain 'hidden' and 'output'")
    if doc.get("activation", ACTIVATION) != ACTIVATION:
        raise ValueError(f"unsupported activation {doc.get('activation')!r}")
    return NetworkWeights(w_hidden=np.asarray(doc["hidden"], dtype=np.float64),
                          w_output=np.asarray(doc["output"], dtype=np.float64))
