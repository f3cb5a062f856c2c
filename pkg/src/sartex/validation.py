"""Input validation helpers shared by the estimators."""

from __future__ import annotations

import numpy as np

from .errors import InputError, NotFittedError


def check_array(X, *, name: str = "X") -> np.ndarray:
    """Coerce ``X`` to a 2-D float64 array of finite values."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise InputError(f"{name} must be a 2-D sample matrix, got ndim={X.ndim}")
    if X.shape[0] == 0 or X.shape[1] == 0:
        raise InputError(f"{name} contains no samples")
    if not np.all(np.isfinite(X)):
        raise InputError(f"{name} contains NaN or infinite features")
    return X


def check_X_y(X, y) -> tuple[np.ndarray, np.ndarray]:
    """Validate a feature matrix with binary labels in {0, 1}."""
    X = check_array(X)
    y = np.asarray(y)
    if y.ndim != 1:
        raise InputError(f"y must be 1-D, got ndim={y.ndim}")
    if y.shape[0] != X.shape[0]:
        raise InputError(f"X has {X.shape[0]} samples but y has {y.shape[0]}")
    if not np.all(np.isin(y, (0, 1))):
        raise InputError("labels must be 0 (little/no activity) or 1 (activity)")
    return X, y.astype(np.int64)


def check_is_fitted(estimator, attribute: str) -> None:
    """Raise unless ``estimator`` carries the given fitted attribute."""
    if getattr(estimator, attribute, None) is None:
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted; call fit() first"
        )


def check_n_features(estimator, X: np.ndarray) -> None:
    """Raise if ``X`` disagrees with the feature count seen at fit time."""
    expected = getattr(estimator, "n_features_in_", None)
    if expected is not None and X.shape[1] != expected:
        raise InputError(
            f"{type(estimator).__name__} was fitted with {expected} features, "
            f"got {X.shape[1]}"
        )
