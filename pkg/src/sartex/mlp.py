"""Fully-connected binary classifier trained with full-batch Adam.

The default network is the 12-10-6-4-1 stack: ReLU hidden layers, a
sigmoid output unit, and binary cross-entropy loss. Weights start from a
seeded uniform(-r, r) draw with r = sqrt(6 / (fan_in + fan_out)); biases
start at zero, so an untrained network scores close to 0.5 everywhere.

The loss and its gradient are computed from the logits, never from the
saturated sigmoid output, which keeps both finite for large activations.
"""

from __future__ import annotations

import numpy as np

from .base import BaseEstimator, ClassifierMixin
from .errors import TrainingError
from .preprocessing import Standardizer
from .validation import check_array, check_is_fitted, check_n_features, check_X_y

Params = list[tuple[np.ndarray, np.ndarray]]


def sigmoid(z: np.ndarray) -> np.ndarray:
    # exp may overflow to inf for very negative logits; 1/(1+inf) is the
    # correct 0, so only the warning needs silencing
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-z))


def init_params(layer_sizes: tuple[int, ...], rng: np.random.Generator) -> Params:
    """Uniform Glorot weights, zero biases, one (W, b) pair per layer."""
    params = []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        r = np.sqrt(6.0 / (fan_in + fan_out))
        W = rng.uniform(-r, r, size=(fan_in, fan_out))
        params.append((W, np.zeros(fan_out)))
    return params


def forward_logits(params: Params, X: np.ndarray) -> np.ndarray:
    # overflow to inf is tolerated; the training loop checks the loss for it
    with np.errstate(over="ignore"):
        a = X
        for W, b in params[:-1]:
            a = np.maximum(a @ W + b, 0.0)
        W, b = params[-1]
        return (a @ W + b).ravel()


def bce_loss(params: Params, X: np.ndarray, y: np.ndarray) -> float:
    z = forward_logits(params, X)
    # log(1 + exp(-|z|)) + max(z, 0) - z*y is BCE written against the logit
    with np.errstate(invalid="ignore"):
        return float(np.mean(np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z)))))


def bce_gradients(params: Params, X: np.ndarray, y: np.ndarray) -> Params:
    """Backpropagated gradients of :func:`bce_loss` in parameter order."""
    activations = [X]
    a = X
    for W, b in params[:-1]:
        a = np.maximum(a @ W + b, 0.0)
        activations.append(a)
    W, b = params[-1]
    z = (a @ W + b).ravel()

    n = X.shape[0]
    delta = ((sigmoid(z) - y) / n)[:, None]
    reversed_grads = []
    for layer in range(len(params) - 1, -1, -1):
        a_prev = activations[layer]
        reversed_grads.append((a_prev.T @ delta, delta.sum(axis=0)))
        if layer > 0:
            delta = (delta @ params[layer][0].T) * (activations[layer] > 0)
    return reversed_grads[::-1]


class MlpClassifier(ClassifierMixin, BaseEstimator):
    """ReLU network with a sigmoid output, trained by full-batch Adam.

    Parameters
    ----------
    hidden_sizes : tuple of int
        Hidden layer widths; the input width comes from the data and the
        output is a single logit.
    epochs : int
        Full-batch gradient steps.
    learning_rate : float
        Adam step size.
    seed : int
        Seed for weight initialization.
    """

    def __init__(
        self,
        hidden_sizes: tuple[int, ...] = (10, 6, 4),
        epochs: int = 1000,
        learning_rate: float = 1e-3,
        seed: int = 0,
    ):
        self.hidden_sizes = hidden_sizes
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if np.unique(y).size < 2:
            raise TrainingError("training data contains a single class")
        if self.epochs < 0:
            raise TrainingError(f"epochs must be >= 0, got {self.epochs}")
        self.standardizer_ = Standardizer().fit(X)
        Xs = self.standardizer_.transform(X)
        yf = y.astype(np.float64)

        layer_sizes = (X.shape[1], *tuple(self.hidden_sizes), 1)
        rng = np.random.default_rng(self.seed)
        params = init_params(layer_sizes, rng)

        beta1, beta2, eps = 0.9, 0.999, 1e-8
        m = [(np.zeros_like(W), np.zeros_like(b)) for W, b in params]
        v = [(np.zeros_like(W), np.zeros_like(b)) for W, b in params]
        for epoch in range(1, self.epochs + 1):
            loss = bce_loss(params, Xs, yf)
            if not np.isfinite(loss):
                raise TrainingError(f"loss became non-finite at epoch {epoch}")
            grads = bce_gradients(params, Xs, yf)
            corr1 = 1.0 - beta1**epoch
            corr2 = 1.0 - beta2**epoch
            for layer, (gW, gb) in enumerate(grads):
                mW, mb = m[layer]
                vW, vb = v[layer]
                mW = beta1 * mW + (1 - beta1) * gW
                mb = beta1 * mb + (1 - beta1) * gb
                vW = beta2 * vW + (1 - beta2) * gW * gW
                vb = beta2 * vb + (1 - beta2) * gb * gb
                m[layer] = (mW, mb)
                v[layer] = (vW, vb)
                W, b = params[layer]
                W = W - self.learning_rate * (mW / corr1) / (np.sqrt(vW / corr2) + eps)
                b = b - self.learning_rate * (mb / corr1) / (np.sqrt(vb / corr2) + eps)
                params[layer] = (W, b)

        self.params_ = params
        self.layer_sizes_ = layer_sizes
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "params_")
        X = check_array(X)
        check_n_features(self, X)
        return forward_logits(self.params_, self.standardizer_.transform(X))

    def predict_proba(self, X) -> np.ndarray:
        p1 = sigmoid(self.decision_function(X))
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] > 0.5).astype(np.int64)
