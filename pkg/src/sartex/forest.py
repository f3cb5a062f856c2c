"""Random forest of Gini-impurity decision trees, trained on bootstrap resamples.

Each tree draws a bootstrap sample of the training set and grows greedily:
at every node a random subset of sqrt(n_features) candidate features is
scanned for the axis-aligned threshold minimizing the weighted Gini
impurity of the children. Nodes stop splitting when pure, smaller than two
samples, or when no threshold separates the candidates. Leaves store the
class-1 fraction of their samples; the forest predicts the mean leaf
probability across trees against a 0.5 threshold.

Trees split on raw feature values. Split thresholds are midpoints between
consecutive sorted values, so predictions are invariant under monotone
affine rescaling of any feature column.

Training is deterministic: every tree's random stream is derived from
(seed, tree index), so a parallel implementation would reproduce the
sequential result exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import BaseEstimator, ClassifierMixin
from .errors import TrainingError
from .validation import check_array, check_is_fitted, check_n_features, check_X_y


@dataclass
class TreeNode:
    """One node of a decision tree; leaves have ``left is None``."""

    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    prob: float = 0.0


def _gini_of_counts(n1: float, n: float) -> float:
    p1 = n1 / n
    return 1.0 - (p1 * p1 + (1.0 - p1) * (1.0 - p1))


def _best_split(X: np.ndarray, y: np.ndarray, features: np.ndarray):
    """Lowest weighted child Gini over all thresholds of the candidate features.

    Returns ``(weighted_gini, feature, threshold)`` or None when no
    candidate feature separates the node.
    """
    n = y.shape[0]
    total1 = int(y.sum())
    best_gini = np.inf
    best = None
    sizes_l = np.arange(1, n, dtype=np.float64)
    sizes_r = n - sizes_l
    for f in features:
        v = X[:, f]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        valid = vs[1:] > vs[:-1]
        if not valid.any():
            continue
        left1 = np.cumsum(y[order])[:-1].astype(np.float64)
        right1 = total1 - left1
        gini_l = 1.0 - ((left1 / sizes_l) ** 2 + ((sizes_l - left1) / sizes_l) ** 2)
        gini_r = 1.0 - ((right1 / sizes_r) ** 2 + ((sizes_r - right1) / sizes_r) ** 2)
        weighted = (sizes_l * gini_l + sizes_r * gini_r) / n
        weighted[~valid] = np.inf
        k = int(np.argmin(weighted))
        if weighted[k] < best_gini:
            best_gini = float(weighted[k])
            best = (best_gini, int(f), float((vs[k] + vs[k + 1]) / 2.0))
    return best


def _grow(X, y, rng, max_features, importances, n_total) -> TreeNode:
    n = y.shape[0]
    n1 = int(y.sum())
    if n1 == 0 or n1 == n or n < 2:
        return TreeNode(prob=n1 / n)
    features = rng.choice(X.shape[1], size=max_features, replace=False)
    found = _best_split(X, y, features)
    if found is None:
        return TreeNode(prob=n1 / n)
    weighted_gini, feature, threshold = found
    mask = X[:, feature] <= threshold
    if not mask.any() or mask.all():
        # midpoint collapsed onto a sample value through rounding
        return TreeNode(prob=n1 / n)
    importances[feature] += (n / n_total) * (_gini_of_counts(n1, n) - weighted_gini)
    left = _grow(X[mask], y[mask], rng, max_features, importances, n_total)
    right = _grow(X[~mask], y[~mask], rng, max_features, importances, n_total)
    return TreeNode(feature, threshold, left, right)


def _tree_probs(node: TreeNode, X: np.ndarray, idx: np.ndarray, out: np.ndarray) -> None:
    if node.left is None:
        out[idx] = node.prob
        return
    mask = X[idx, node.feature] <= node.threshold
    _tree_probs(node.left, X, idx[mask], out)
    _tree_probs(node.right, X, idx[~mask], out)


class RandomForestClassifier(ClassifierMixin, BaseEstimator):
    """Bootstrap-aggregated decision trees with Gini feature importances.

    Parameters
    ----------
    n_trees : int
        Number of trees in the ensemble.
    max_features : int, optional
        Candidate features per split; defaults to sqrt(n_features).
    seed : int
        Seed of the deterministic training stream.
    """

    def __init__(self, n_trees: int = 1000, max_features: int | None = None, seed: int = 0):
        self.n_trees = n_trees
        self.max_features = max_features
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if self.n_trees < 1:
            raise TrainingError(f"n_trees must be >= 1, got {self.n_trees}")
        classes = np.unique(y)
        if classes.size < 2:
            raise TrainingError(
                f"training data contains a single class ({classes[0]}); "
                f"need both activity states"
            )
        n, d = X.shape
        max_features = self.max_features or max(1, int(np.sqrt(d)))
        max_features = min(max_features, d)
        self.trees_ = []
        importance_sum = np.zeros(d)
        for t in range(self.n_trees):
            rng = np.random.default_rng([self.seed, t])
            sample = rng.integers(0, n, size=n)
            tree_importance = np.zeros(d)
            root = _grow(X[sample], y[sample], rng, max_features, tree_importance, n)
            total = tree_importance.sum()
            if total > 0:
                importance_sum += tree_importance / total
            self.trees_.append(root)
        total = importance_sum.sum()
        if total > 0:
            self.feature_importances_ = importance_sum / total
        else:
            self.feature_importances_ = np.full(d, 1.0 / d)
        self.n_features_in_ = d
        return self

    def predict_proba(self, X) -> np.ndarray:
        check_is_fitted(self, "trees_")
        X = check_array(X)
        check_n_features(self, X)
        n = X.shape[0]
        acc = np.zeros(n)
        probs = np.empty(n)
        idx = np.arange(n)
        for tree in self.trees_:
            _tree_probs(tree, X, idx, probs)
            acc += probs
        p1 = acc / len(self.trees_)
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] > 0.5).astype(np.int64)
