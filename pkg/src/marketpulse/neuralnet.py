"""From-scratch feedforward networks with backpropagation training.

Layer sizes are free (e.g. 5-3-1, or 2-1 with no hidden layer); hidden
units use a logistic or tanh activation, the single output is linear.
Training is full-batch gradient descent with momentum, deterministic for a
fixed seed, data and config.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DivergenceError, ModelFormatError
from .dataset import MinMaxScaler

logger = logging.getLogger(__name__)

HIDDEN_ACTIVATIONS = ("logistic", "tanh")

MODEL_FORMAT_TAG = "marketpulse-mlp v1"


@dataclass(frozen=True)
class NetworkSpec:
    layer_sizes: tuple[int, ...]
    hidden_activation: str = "logistic"
    seed: int = 0

    def __post_init__(self) -> None:
        if len(self.layer_sizes) < 2:
            raise ValueError("need at least input and output layers")
        if any(size < 1 for size in self.layer_sizes):
            raise ValueError("all layer sizes must be >= 1")
        if self.layer_sizes[-1] != 1:
            raise ValueError("output layer must have size 1")
        if self.hidden_activation not in HIDDEN_ACTIVATIONS:
            raise ValueError(f"hidden_activation must be one of {HIDDEN_ACTIVATIONS}")


@dataclass
class Mlp:
    """Parameter container; weights[i] has shape (out, in) for layer i."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    hidden_activation: str = "logistic"

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[1], *(w.shape[0] for w in self.weights))

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[1]

    def copy(self) -> "Mlp":
        return Mlp(
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            hidden_activation=self.hidden_activation,
        )


@dataclass(frozen=True)
class TrainConfig:
    max_epochs: int = 5000
    learning_rate: float = 0.05
    momentum: float = 0.9
    target_mse: float = 1e-4
    log_every: int = 0

    def __post_init__(self) -> None:
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must be in [0, 1)")


TrainHistory = list[float]


def _logistic(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    positive = z >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-z[positive]))
    ez = np.exp(z[~positive])
    out[~positive] = ez / (1.0 + ez)
    return out


def _activate(z: np.ndarray, kind: str) -> np.ndarray:
    return _logistic(z) if kind == "logistic" else np.tanh(z)


def _activation_slope(activated: np.ndarray, kind: str) -> np.ndarray:
    # Both activations have derivatives expressible from their outputs.
    if kind == "logistic":
        return activated * (1.0 - activated)
    return 1.0 - activated**2


def init_network(spec: NetworkSpec) -> Mlp:
    """Seeded init: symmetric uniform weights scaled by 1/sqrt(fan_in)."""
    rng = np.random.default_rng(spec.seed)
    weights: list[np.ndarray] = []
    biases: list[np.ndarray] = []
    for fan_in, fan_out in zip(spec.layer_sizes, spec.layer_sizes[1:]):
        limit = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return Mlp(weights=weights, biases=biases, hidden_activation=spec.hidden_activation)


def _forward_batch(mlp: Mlp, X: np.ndarray) -> list[np.ndarray]:
    """Activations per layer, input first, (B, 1) linear output last."""
    activations = [X]
    current = X
    last = len(mlp.weights) - 1
    for i, (W, b) in enumerate(zip(mlp.weights, mlp.biases)):
        z = current @ W.T + b
        current = z if i == last else _activate(z, mlp.hidden_activation)
        activations.append(current)
    return activations


def forward(mlp: Mlp, x: np.ndarray) -> tuple[float, list[np.ndarray]]:
    """Single-vector forward pass; the cache feeds backpropagation."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != mlp.input_dim:
        raise DimensionError(f"expected input of length {mlp.input_dim}, got shape {x.shape}")
    activations = _forward_batch(mlp, x[None, :])
    return float(activations[-1][0, 0]), activations


def gradient(
    mlp: Mlp, X: np.ndarray, targets: np.ndarray
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Exact analytic gradient of mean squared error over the batch."""
    X = np.asarray(X, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != mlp.input_dim:
        raise DimensionError(f"expected (batch, {mlp.input_dim}) inputs, got {X.shape}")
    if len(X) == 0:
        raise ValueError("batch must be non-empty")
    activations = _forward_batch(mlp, X)
    batch = len(X)
    # d(mean squared error)/d(output)
    delta = 2.0 * (activations[-1] - targets.reshape(-1, 1)) / batch
    weight_grads: list[np.ndarray] = [None] * len(mlp.weights)  # type: ignore[list-item]
    bias_grads: list[np.ndarray] = [None] * len(mlp.biases)  # type: ignore[list-item]
    for layer in range(len(mlp.weights) - 1, -1, -1):
        weight_grads[layer] = delta.T @ activations[layer]
        bias_grads[layer] = delta.sum(axis=0)
        if layer > 0:
            upstream = delta @ mlp.weights[layer]
            delta = upstream * _activation_slope(activations[layer], mlp.hidden_activation)
    return weight_grads, bias_grads


def mse(mlp: Mlp, X: np.ndarray, targets: np.ndarray) -> float:
    predictions = _forward_batch(mlp, np.asarray(X, dtype=np.float64))[-1][:, 0]
    # Overflow to inf is the divergence signal, not a warning condition.
    with np.errstate(over="ignore"):
        return float(np.mean((predictions - np.asarray(targets, dtype=np.float64)) ** 2))


def train(
    mlp: Mlp,
    X: np.ndarray,
    targets: np.ndarray,
    config: TrainConfig = TrainConfig(),
) -> tuple[Mlp, TrainHistory]:
    """Full-batch gradient descent with momentum on normalized data.

    Stops at ``max_epochs`` or once training MSE falls to ``target_mse``;
    raises :class:`DivergenceError` naming the epoch if the loss stops
    being finite.
    """
    model = mlp.copy()
    weight_velocity = [np.zeros_like(w) for w in model.weights]
    bias_velocity = [np.zeros_like(b) for b in model.biases]
    history: TrainHistory = []
    for epoch in range(1, config.max_epochs + 1):
        weight_grads, bias_grads = gradient(model, X, targets)
        for i in range(len(model.weights)):
            weight_velocity[i] = (
                config.momentum * weight_velocity[i] - config.learning_rate * weight_grads[i]
            )
            bias_velocity[i] = (
                config.momentum * bias_velocity[i] - config.learning_rate * bias_grads[i]
            )
            model.weights[i] += weight_velocity[i]
            model.biases[i] += bias_velocity[i]
        loss = mse(model, X, targets)
        if not np.isfinite(loss):
            raise DivergenceError(f"training diverged at epoch {epoch}")
        history.append(loss)
        if config.log_every and epoch % config.log_every == 0:
            logger.info("epoch %d: training mse %.6g", epoch, loss)
        if loss <= config.target_mse:
            break
    return model, history


def predict(mlp: Mlp, scaler: MinMaxScaler, features: np.ndarray) -> np.ndarray:
    """Forward pass on scaled features, inverse-scaled to price units."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != mlp.input_dim:
        raise DimensionError(
            f"expected (rows, {mlp.input_dim}) features, got {features.shape}"
        )
    scaled_outputs = _forward_batch(mlp, features)[-1][:, 0]
    return scaler.inverse_targets(scaled_outputs)


def save_model(mlp: Mlp) -> str:
    """Serialize to a versioned text format with exact float round-trip."""
    lines = [MODEL_FORMAT_TAG]
    lines.append("layers " + " ".join(str(s) for s in mlp.layer_sizes))
    lines.append(f"activation {mlp.hidden_activation}")
    for index, (W, b) in enumerate(zip(mlp.weights, mlp.biases), start=1):
        lines.append(f"W{index} {W.shape[0]} {W.shape[1]}")
        lines += [" ".join(repr(value) for value in row) for row in W.tolist()]
        lines.append(f"b{index} {b.shape[0]}")
        lines.append(" ".join(repr(value) for value in b.tolist()))
    return "\n".join(lines) + "\n"


def load_model(text: str) -> Mlp:
    """Parse :func:`save_model` output back into an identical network."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0] != MODEL_FORMAT_TAG:
        raise ModelFormatError(f"model file must start with {MODEL_FORMAT_TAG!r}")
    try:
        layer_sizes = tuple(int(s) for s in lines[1].split()[1:])
        activation = lines[2].split()[1]
        weights: list[np.ndarray] = []
        biases: list[np.ndarray] = []
        cursor = 3
        for index, (fan_in, fan_out) in enumerate(zip(layer_sizes, layer_sizes[1:]), start=1):
            header = lines[cursor].split()
            if header[0] != f"W{index}" or (int(header[1]), int(header[2])) != (fan_out, fan_in):
                raise ModelFormatError(f"unexpected weight header {lines[cursor]!r}")
            cursor += 1
            rows = [
                [float(v) for v in lines[cursor + r].split()] for r in range(fan_out)
            ]
            cursor += fan_out
            weights.append(np.array(rows, dtype=np.float64).reshape(fan_out, fan_in))
            if lines[cursor].split()[0] != f"b{index}":
                raise ModelFormatError(f"unexpected bias header {lines[cursor]!r}")
            cursor += 1
            biases.append(np.array([float(v) for v in lines[cursor].split()], dtype=np.float64))
            cursor += 1
    except ModelFormatError:
        raise
    except (IndexError, ValueError) as exc:
        raise ModelFormatError(f"malformed model file: {exc}") from None
    if activation not in HIDDEN_ACTIVATIONS:
        raise ModelFormatError(f"unknown activation {activation!r}")
    return Mlp(weights=weights, biases=biases, hidden_activation=activation)
