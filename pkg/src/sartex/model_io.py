"""Versioned JSON persistence for the three classifier kinds.

The file carries an explicit ``kind`` tag and schema version. Floating
point values are serialized with full round-trip precision, so a loaded
model predicts bit-identically to the one that was saved.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import FormatError
from .forest import RandomForestClassifier, TreeNode
from .mlp import MlpClassifier
from .preprocessing import Standardizer
from .svm import RbfSvmClassifier
from .validation import check_is_fitted

SCHEMA_VERSION = 1
_FORMAT_TAG = "sartex-model"


def _node_to_obj(node: TreeNode):
    if node.left is None:
        return {"p": node.prob}
    return {
        "f": node.feature,
        "t": node.threshold,
        "l": _node_to_obj(node.left),
        "r": _node_to_obj(node.right),
    }


def _node_from_obj(obj) -> TreeNode:
    if not isinstance(obj, dict):
        raise FormatError(f"bad tree node: {obj!r}")
    if "p" in obj:
        return TreeNode(prob=float(obj["p"]))
    try:
        return TreeNode(
            feature=int(obj["f"]),
            threshold=float(obj["t"]),
            left=_node_from_obj(obj["l"]),
            right=_node_from_obj(obj["r"]),
        )
    except KeyError as exc:
        raise FormatError(f"tree node missing key {exc}") from exc


def _standardizer_to_obj(s: Standardizer) -> dict:
    return {"mean": s.mean_.tolist(), "scale": s.scale_.tolist()}


def _standardizer_from_obj(obj) -> Standardizer:
    s = Standardizer()
    s.mean_ = np.asarray(obj["mean"], dtype=np.float64)
    s.scale_ = np.asarray(obj["scale"], dtype=np.float64)
    s.n_features_in_ = s.mean_.shape[0]
    return s


def _dump_forest(model: RandomForestClassifier) -> dict:
    check_is_fitted(model, "trees_")
    return {
        "trees": [_node_to_obj(t) for t in model.trees_],
        "feature_importances": model.feature_importances_.tolist(),
        "n_features_in": model.n_features_in_,
    }


def _load_forest(params: dict, state: dict) -> RandomForestClassifier:
    model = RandomForestClassifier(**params)
    model.trees_ = [_node_from_obj(t) for t in state["trees"]]
    model.feature_importances_ = np.asarray(state["feature_importances"], dtype=np.float64)
    model.n_features_in_ = int(state["n_features_in"])
    return model


def _dump_svm(model: RbfSvmClassifier) -> dict:
    check_is_fitted(model, "support_vectors_")
    return {
        "standardizer": _standardizer_to_obj(model.standardizer_),
        "support_vectors": model.support_vectors_.tolist(),
        "dual_coef": model.dual_coef_.tolist(),
        "bias": model.bias_,
        "gamma": model.gamma_,
        "n_features_in": model.n_features_in_,
    }


def _load_svm(params: dict, state: dict) -> RbfSvmClassifier:
    model = RbfSvmClassifier(**params)
    model.standardizer_ = _standardizer_from_obj(state["standardizer"])
    model.support_vectors_ = np.asarray(state["support_vectors"], dtype=np.float64)
    model.dual_coef_ = np.asarray(state["dual_coef"], dtype=np.float64)
    model.bias_ = float(state["bias"])
    model.gamma_ = float(state["gamma"])
    model.n_features_in_ = int(state["n_features_in"])
    return model


def _dump_mlp(model: MlpClassifier) -> dict:
    check_is_fitted(model, "params_")
    return {
        "standardizer": _standardizer_to_obj(model.standardizer_),
        "layer_sizes": list(model.layer_sizes_),
        "weights": [[W.tolist(), b.tolist()] for W, b in model.params_],
        "n_features_in": model.n_features_in_,
    }


def _load_mlp(params: dict, state: dict) -> MlpClassifier:
    model = MlpClassifier(**params)
    model.standardizer_ = _standardizer_from_obj(state["standardizer"])
    model.layer_sizes_ = tuple(int(v) for v in state["layer_sizes"])
    model.params_ = [
        (np.asarray(W, dtype=np.float64), np.asarray(b, dtype=np.float64))
        for W, b in state["weights"]
    ]
    model.n_features_in_ = int(state["n_features_in"])
    return model


_KINDS = {
    "forest": (RandomForestClassifier, _dump_forest, _load_forest),
    "svm": (RbfSvmClassifier, _dump_svm, _load_svm),
    "mlp": (MlpClassifier, _dump_mlp, _load_mlp),
}


def kind_of(model) -> str:
    for kind, (cls, _, _) in _KINDS.items():
        if isinstance(model, cls):
            return kind
    raise FormatError(f"cannot persist a {type(model).__name__}")


def save_model(model, path: str | Path) -> None:
    """Serialize a fitted classifier to versioned JSON."""
    kind = kind_of(model)
    _, dump, _ = _KINDS[kind]
    params = model.get_params()
    if kind == "mlp":
        params = dict(params, hidden_sizes=list(params["hidden_sizes"]))
    doc = {
        "format": _FORMAT_TAG,
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "params": params,
        "state": dump(model),
    }
    Path(path).write_text(
        json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8"
    )


def load_model(path: str | Path):
    """Load a classifier saved by :func:`save_model`."""
    path = Path(path)
    if not path.exists():
        raise FormatError(f"no such model file: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: not a valid model file: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != _FORMAT_TAG:
        raise FormatError(f"{path}: missing {_FORMAT_TAG!r} format tag")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise FormatError(
            f"{path}: schema version {version!r} not supported (expected {SCHEMA_VERSION})"
        )
    kind = doc.get("kind")
    if kind not in _KINDS:
        raise FormatError(f"{path}: unknown model kind {kind!r}")
    _, _, load = _KINDS[kind]
    try:
        params = dict(doc["params"])
        if kind == "mlp":
            params["hidden_sizes"] = tuple(params["hidden_sizes"])
        return load(params, doc["state"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed model state: {exc}") from exc
