import numpy as np
import pytest

from sartex import evaluate, evaluate_multiseed, make_classifier
from sartex.errors import InputError, TrainingError


def separable(n_per_class=15, seed=1):
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(-2, 0.5, (n_per_class, 12)), rng.normal(2, 0.5, (n_per_class, 12))])
    y = np.array([0] * n_per_class + [1] * n_per_class)
    return X, y


class TestEvaluate:
    def test_perfect_fit_scores_one(self):
        X, y = separable()
        model = make_classifier("forest", seed=0, n_trees=5, max_features=12).fit(X, y)
        assert evaluate(model, X, y) == 1.0

    def test_constant_predictor_on_balanced_set(self):
        X, y = separable()

        class Constant:
            def predict(self, X):
                return np.zeros(len(X), dtype=np.int64)

        assert evaluate(Constant(), X, y) == 0.5

    def test_empty_test_set_rejected(self):
        X, y = separable()
        model = make_classifier("forest", seed=0, n_trees=2).fit(X, y)
        with pytest.raises(InputError):
            evaluate(model, np.empty((0, 12)), np.empty(0, dtype=int))


class TestMultiseed:
    def test_identical_seeds_zero_spread(self):
        X, y = separable(seed=2)
        Xt, yt = separable(seed=3)
        mean, scores = evaluate_multiseed(X, y, Xt, yt, "forest", [5] * 10, n_trees=8)
        assert len(scores) == 10
        assert len(set(scores)) == 1
        assert mean == scores[0]

    def test_forest_on_separable_any_seeds(self):
        X, y = separable(seed=4)
        mean, scores = evaluate_multiseed(X, y, X, y, "forest", range(10), n_trees=10)
        assert mean == 1.0

    def test_no_seeds_rejected(self):
        X, y = separable()
        with pytest.raises(InputError):
            evaluate_multiseed(X, y, X, y, "forest", [])

    def test_training_error_annotated_with_seed(self):
        X, y = separable()
        single = np.zeros_like(y)
        with pytest.raises(TrainingError, match="seed 7"):
            evaluate_multiseed(X, single, X, y, "forest", [7], n_trees=2)


def test_make_classifier_unknown_kind():
    with pytest.raises(InputError):
        make_classifier("perceptron-forest")


def test_make_classifier_passes_hyperparameters():
    clf = make_classifier("svm", seed=3, c=2.5)
    assert clf.c == 2.5 and clf.seed == 3
    clf = make_classifier("mlp", epochs=7)
    assert clf.epochs == 7
    clf = make_classifier("forest", n_trees=4)
    assert clf.n_trees == 4
