"""Model evaluation, seed averaging, and classifier construction by kind."""

from __future__ import annotations

import numpy as np

from .errors import InputError, TrainingError
from .forest import RandomForestClassifier
from .mlp import MlpClassifier
from .svm import RbfSvmClassifier
from .validation import check_X_y

CLASSIFIER_KINDS = ("forest", "svm", "mlp")


def make_classifier(kind: str, seed: int = 0, **params):
    """Instantiate one of the three classifier kinds with its hyperparameters."""
    if kind == "forest":
        return RandomForestClassifier(seed=seed, **params)
    if kind == "svm":
        return RbfSvmClassifier(seed=seed, **params)
    if kind == "mlp":
        return MlpClassifier(seed=seed, **params)
    raise InputError(f"unknown classifier kind {kind!r}; choose from {CLASSIFIER_KINDS}")


def evaluate(model, X, y) -> float:
    """Fraction of correctly predicted labels on a non-empty test set."""
    X, y = check_X_y(X, y)
    return float((model.predict(X) == y).mean())


def evaluate_multiseed(
    X_train,
    y_train,
    X_test,
    y_test,
    kind: str,
    seeds,
    **params,
) -> tuple[float, list[float]]:
    """Train one model per seed on a fixed split; return mean and per-seed accuracy."""
    seeds = list(seeds)
    if not seeds:
        raise InputError("at least one seed is required")
    scores = []
    for seed in seeds:
        model = make_classifier(kind, seed=int(seed), **params)
        try:
            model.fit(X_train, y_train)
        except TrainingError as exc:
            raise TrainingError(f"seed {seed}: {exc}") from exc
        scores.append(evaluate(model, X_test, y_test))
    return float(np.mean(scores)), scores
