"""Soft-margin SVM with an RBF kernel, trained by sequential minimal optimization.

The dual problem is optimized two multipliers at a time following Platt's
SMO: the outer loop alternates full sweeps with sweeps over non-bound
multipliers, the partner multiplier is chosen to maximize the expected
step, and the bias is updated from whichever new multiplier lies strictly
inside the box. Convergence means every multiplier satisfies its
Karush-Kuhn-Tucker condition within ``tol``.

Inputs are standardized internally; labels are mapped to {-1, +1} for the
optimization and back to {0, 1} for prediction. The reported score is the
logistic of the decision value.
"""

from __future__ import annotations

import numpy as np

from .base import BaseEstimator, ClassifierMixin
from .errors import InputError, TrainingError
from .preprocessing import Standardizer
from .validation import check_array, check_is_fitted, check_n_features, check_X_y

_STEP_EPS = 1e-12


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """exp(-gamma * squared distance) for every row pair of A and B."""
    sq = (
        np.sum(A * A, axis=1)[:, None]
        + np.sum(B * B, axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    return np.exp(-gamma * np.maximum(sq, 0.0))


class RbfSvmClassifier(ClassifierMixin, BaseEstimator):
    """Binary RBF-kernel SVM trained with SMO.

    Parameters
    ----------
    c : float
        Soft-margin penalty; multipliers are boxed to [0, c].
    gamma : float or "auto"
        Kernel width. "auto" uses 1 / (n_features * mean feature variance)
        of the standardized training data.
    tol : float
        KKT tolerance for convergence.
    max_steps : int
        Cap on successful multiplier updates before giving up.
    seed : int
        Seed for the randomized sweep starting points.
    """

    def __init__(
        self,
        c: float = 10.0,
        gamma: float | str = "auto",
        tol: float = 1e-3,
        max_steps: int = 200_000,
        seed: int = 0,
    ):
        self.c = c
        self.gamma = gamma
        self.tol = tol
        self.max_steps = max_steps
        self.seed = seed

    def _resolve_gamma(self, X: np.ndarray) -> float:
        if self.gamma == "auto":
            mean_var = float(X.var(axis=0).mean())
            if mean_var <= 0:
                mean_var = 1.0
            return 1.0 / (X.shape[1] * mean_var)
        return float(self.gamma)

    def fit(self, X, y):
        X, y01 = check_X_y(X, y)
        if np.unique(y01).size < 2:
            raise TrainingError("training data contains a single class")
        self.standardizer_ = Standardizer().fit(X)
        Xs = self.standardizer_.transform(X)
        y = np.where(y01 == 1, 1.0, -1.0)
        n = Xs.shape[0]
        gamma = self._resolve_gamma(Xs)
        C = float(self.c)
        K = rbf_kernel(Xs, Xs, gamma)
        rng = np.random.default_rng(self.seed)

        alpha = np.zeros(n)
        b = 0.0
        errors = -y.copy()  # decision values start at 0
        steps = 0

        def refresh_errors():
            nonlocal errors
            errors = K @ (alpha * y) + b - y

        def take_step(i1: int, i2: int) -> bool:
            nonlocal b, steps
            if i1 == i2:
                return False
            a1, a2 = alpha[i1], alpha[i2]
            y1, y2 = y[i1], y[i2]
            e1, e2 = errors[i1], errors[i2]
            s = y1 * y2
            if y1 != y2:
                lo, hi = max(0.0, a2 - a1), min(C, C + a2 - a1)
            else:
                lo, hi = max(0.0, a1 + a2 - C), min(C, a1 + a2)
            if lo >= hi:
                return False
            k11, k12, k22 = K[i1, i1], K[i1, i2], K[i2, i2]
            eta = k11 + k22 - 2.0 * k12
            if eta > 0:
                a2_new = a2 + y2 * (e1 - e2) / eta
                a2_new = min(max(a2_new, lo), hi)
            else:
                # flat or concave direction: evaluate the objective at both ends
                f1 = y1 * (e1 - b) - a1 * k11 - s * a2 * k12
                f2 = y2 * (e2 - b) - s * a1 * k12 - a2 * k22
                l1 = a1 + s * (a2 - lo)
                h1 = a1 + s * (a2 - hi)
                obj_lo = (
                    l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 + s * lo * l1 * k12
                )
                obj_hi = (
                    h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 + s * hi * h1 * k12
                )
                if obj_lo < obj_hi - _STEP_EPS:
                    a2_new = lo
                elif obj_lo > obj_hi + _STEP_EPS:
                    a2_new = hi
                else:
                    return False
            if abs(a2_new - a2) < _STEP_EPS * (a2_new + a2 + _STEP_EPS):
                return False
            a1_new = a1 + s * (a2 - a2_new)
            a1_new = min(max(a1_new, 0.0), C)  # guard float drift out of the box
            b1 = b - e1 - y1 * (a1_new - a1) * k11 - y2 * (a2_new - a2) * k12
            b2 = b - e2 - y1 * (a1_new - a1) * k12 - y2 * (a2_new - a2) * k22
            if 0.0 < a1_new < C:
                b = b1
            elif 0.0 < a2_new < C:
                b = b2
            else:
                b = (b1 + b2) / 2.0
            alpha[i1] = a1_new
            alpha[i2] = a2_new
            refresh_errors()
            steps += 1
            return True

        def examine(i2: int) -> int:
            e2 = errors[i2]
            r2 = e2 * y[i2]
            if not ((r2 < -self.tol and alpha[i2] < C) or (r2 > self.tol and alpha[i2] > 0)):
                return 0
            non_bound = np.flatnonzero((alpha > 0) & (alpha < C))
            if non_bound.size > 1:
                i1 = int(non_bound[np.argmax(np.abs(errors[non_bound] - e2))])
                if take_step(i1, i2):
                    return 1
            if non_bound.size:
                start = int(rng.integers(non_bound.size))
                for k in range(non_bound.size):
                    if take_step(int(non_bound[(start + k) % non_bound.size]), i2):
                        return 1
            start = int(rng.integers(n))
            for k in range(n):
                if take_step((start + k) % n, i2):
                    return 1
            return 0

        num_changed = 0
        examine_all = True
        while num_changed > 0 or examine_all:
            num_changed = 0
            if examine_all:
                for i in range(n):
                    num_changed += examine(i)
            else:
                for i in np.flatnonzero((alpha > 0) & (alpha < C)):
                    num_changed += examine(int(i))
            if steps > self.max_steps:
                raise TrainingError(
                    f"SMO did not converge within {self.max_steps} multiplier "
                    f"updates (performed {steps})"
                )
            if examine_all:
                examine_all = False
            elif num_changed == 0:
                examine_all = True

        self.gamma_ = gamma
        self.bias_ = float(b)
        self.alphas_ = alpha
        sv = np.flatnonzero(alpha > 0)
        self.support_vectors_ = Xs[sv]
        self.dual_coef_ = alpha[sv] * y[sv]
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "support_vectors_")
        X = check_array(X)
        check_n_features(self, X)
        Xs = self.standardizer_.transform(X)
        K = rbf_kernel(Xs, self.support_vectors_, self.gamma_)
        return K @ self.dual_coef_ + self.bias_

    def predict_proba(self, X) -> np.ndarray:
        with np.errstate(over="ignore"):
            p1 = 1.0 / (1.0 + np.exp(-self.decision_function(X)))
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(np.int64)

    def kkt_violations(self, X, y) -> np.ndarray:
        """Per-sample KKT violation of the fitted multipliers on (X, y).

        Zero multipliers require margin >= 1, boxed ones require margin
        <= 1, interior ones require margin == 1; the violation is how far
        the margin strays on the wrong side.
        """
        check_is_fitted(self, "alphas_")
        X, y01 = check_X_y(X, y)
        if X.shape[0] != self.alphas_.shape[0]:
            raise InputError(
                f"kkt_violations expects the {self.alphas_.shape[0]}-sample "
                f"training set, got {X.shape[0]} samples"
            )
        y_pm = np.where(y01 == 1, 1.0, -1.0)
        margin = y_pm * self.decision_function(X)
        r = margin - 1.0
        v = np.empty_like(r)
        at_zero = self.alphas_ <= 0.0
        at_c = self.alphas_ >= self.c
        interior = ~(at_zero | at_c)
        v[at_zero] = np.maximum(0.0, -r[at_zero])
        v[at_c] = np.maximum(0.0, r[at_c])
        v[interior] = np.abs(r[interior])
        return v
