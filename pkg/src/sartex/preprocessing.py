"""Feature standardization fitted on training data."""

from __future__ import annotations

import numpy as np

from .base import BaseEstimator, TransformerMixin
from .validation import check_array, check_is_fitted, check_n_features


class Standardizer(TransformerMixin, BaseEstimator):
    """Center and scale each feature to zero mean, unit variance.

    A feature with zero spread in the training data keeps scale 1 so that
    constant columns pass through unchanged instead of dividing by zero.
    """

    def fit(self, X, y=None):
        X = check_array(X)
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale_ = np.where(std > 0, std, 1.0)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "mean_")
        X = check_array(X)
        check_n_features(self, X)
        return (X - self.mean_) / self.scale_
