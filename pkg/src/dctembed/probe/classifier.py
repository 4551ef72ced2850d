"""Softmax classifier with an optional tanh hidden layer, trained by SGD.

``hidden_size == 0`` gives multinomial logistic regression. Inputs are
standardized with statistics from the training set, which are stored on
the model and reapplied at prediction time.
"""

from dataclasses import dataclass

import numpy as np

HIDDEN_SIZES = (0, 50, 100, 200, 512)
DROPOUTS = (0.0, 0.1, 0.2)


@dataclass(frozen=True)
class ClassifierConfig:
    hidden_size: int = 0
    dropout: float = 0.0
    learning_rate: float = 0.1
    epochs: int = 100
    seed: int = 0
    batch_size: int = 32

    def __post_init__(self):
        if self.hidden_size < 0:
            raise ValueError("hidden_size must be >= 0")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")


def paper_grid(**overrides):
    """Every (hidden_size, dropout) pair of the SentEval-style search."""
    return [ClassifierConfig(hidden_size=h, dropout=p, **overrides)
            for h in HIDDEN_SIZES for p in DROPOUTS]


def _glorot(rng, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, (fan_in, fan_out))


class ClassifierModel:
    """Weights start at zero except the input->hidden layer, so an untrained
    model scores every label equally."""

    def __init__(self, input_dim, label_count, hidden_size=0, seed=0):
        if input_dim < 1 or label_count < 1:
            raise ValueError("input_dim and label_count must be >= 1")
        self.input_dim = input_dim
        self.label_count = label_count
        self.hidden_size = hidden_size
        rng = np.random.default_rng(seed)
        if hidden_size:
            self.params = {
                "W1": _glorot(rng, input_dim, hidden_size),
                "b1": np.zeros(hidden_size),
                "W2": np.zeros((hidden_size, label_count)),
                "b2": np.zeros(label_count),
            }
        else:
            self.params = {
                "W": np.zeros((input_dim, label_count)),
                "b": np.zeros(label_count),
            }
        self.mean = np.zeros(input_dim)
        self.scale = np.ones(input_dim)
        self.trained = False

    def fit_scaler(self, X):
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale = np.where(std > 1e-12, std, 1.0)

    def standardize(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.input_dim:
            raise ValueError(f"expected features of shape (n, {self.input_dim}), got {X.shape}")
        return (X - self.mean) / self.scale

    def logits(self, Z, mask=None):
        """Scores for already-standardized inputs; ``mask`` scales hidden units."""
        p = self.params
        if not self.hidden_size:
            return Z @ p["W"] + p["b"], None
        H = np.tanh(Z @ p["W1"] + p["b1"])
        Hd = H if mask is None else H * mask
        return Hd @ p["W2"] + p["b2"], (H, Hd)

    def loss_and_grads(self, Z, y, mask=None):
        """Mean cross-entropy over the batch and its parameter gradients."""
        scores, cache = self.logits(Z, mask)
        scores = scores - scores.max(axis=1, keepdims=True)
        logp = scores - np.log(np.exp(scores).sum(axis=1, keepdims=True))
        n = Z.shape[0]
        loss = -logp[np.arange(n), y].mean()
        dscores = np.exp(logp)
        dscores[np.arange(n), y] -= 1.0
        dscores /= n
        p = self.params
        if not self.hidden_size:
            return loss, {"W": Z.T @ dscores, "b": dscores.sum(axis=0)}
        H, Hd = cache
        dHd = dscores @ p["W2"].T
        dH = dHd if mask is None else dHd * mask
        dpre = dH * (1.0 - H * H)
        grads = {
            "W1": Z.T @ dpre,
            "b1": dpre.sum(axis=0),
            "W2": Hd.T @ dscores,
            "b2": dscores.sum(axis=0),
        }
        return loss, grads

    def loss(self, X, y):
        return self.loss_and_grads(self.standardize(X), np.asarray(y))[0]

    def predict(self, X):
        # argmax returns the first maximum, i.e. ties go to the lowest label
        return self.logits(self.standardize(X))[0].argmax(axis=1)


def _check_labels(labels, n, label_count=None):
    y = np.asarray(labels)
    if y.shape != (n,):
        raise ValueError(f"expected {n} labels, got shape {y.shape}")
    if not np.issubdtype(y.dtype, np.integer):
        raise ValueError("labels must be integers")
    if y.size and y.min() < 0:
        raise ValueError("labels must be non-negative")
    if label_count is not None and y.size and y.max() >= label_count:
        raise ValueError(f"labels must be < {label_count}")
    return y.astype(np.int64)


def train(config, features, labels, label_count=None):
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("features must be a 2-D array (one row per example)")
    if X.shape[0] == 0:
        raise ValueError("empty training set")
    if not np.all(np.isfinite(X)):
        raise ValueError("features contain NaN or infinite values")
    y = _check_labels(labels, X.shape[0], label_count)
    if label_count is None:
        label_count = int(y.max()) + 1
    model = ClassifierModel(X.shape[1], label_count, config.hidden_size, config.seed)
    model.fit_scaler(X)
    Z = model.standardize(X)
    rng = np.random.default_rng([config.seed, 1])
    keep = 1.0 - config.dropout
    for _ in range(config.epochs):
        order = rng.permutation(len(y))
        for start in range(0, len(y), config.batch_size):
            batch = order[start:start + config.batch_size]
            mask = None
            if config.hidden_size and config.dropout:
                mask = (rng.random((len(batch), config.hidden_size)) < keep) / keep
            _, grads = model.loss_and_grads(Z[batch], y[batch], mask)
            for name, g in grads.items():
                model.params[name] -= config.learning_rate * g
    if not all(np.all(np.isfinite(v)) for v in model.params.values()):
        raise FloatingPointError("training diverged; lower the learning rate")
    model.trained = True
    return model


def evaluate(model, features, labels):
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("evaluation needs a non-empty 2-D feature array")
    y = _check_labels(labels, X.shape[0])
    return float(np.mean(model.predict(X) == y))
