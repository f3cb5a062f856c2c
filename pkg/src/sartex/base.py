"""Minimal estimator protocol compatible with the scikit-learn API.

Estimators here follow the usual conventions: hyperparameters are plain
constructor arguments stored verbatim, fitted state lives in attributes
with a trailing underscore, ``fit`` returns ``self``, and
``get_params``/``set_params`` make the classes usable inside scikit-learn
pipelines and ``clone`` without this package depending on scikit-learn.
"""

from __future__ import annotations

import inspect

from .validation import check_X_y


class BaseEstimator:
    """get_params/set_params over the constructor signature."""

    @classmethod
    def _param_names(cls) -> list[str]:
        sig = inspect.signature(cls.__init__)
        return [
            name
            for name, p in sig.parameters.items()
            if name != "self" and p.kind not in (p.VAR_POSITIONAL, p.VAR_KEYWORD)
        ]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(
                    f"invalid parameter {name!r} for {type(self).__name__}; "
                    f"valid parameters: {sorted(valid)}"
                )
            setattr(self, name, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


class ClassifierMixin:
    """Adds ``score`` (accuracy) to binary classifiers."""

    def score(self, X, y) -> float:
        X, y = check_X_y(X, y)
        return float((self.predict(X) == y).mean())


class TransformerMixin:
    """Adds ``fit_transform`` to transformers."""

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform(X)
