"""Labeled feature datasets and the CSV schemas shared by the CLI.

Feature CSV: canonical column order ``timestamp`` followed by the 12
feature names, plus an optional trailing ``label`` column. Readers match
columns by header name, so column order in files is not significant.
Labels CSV: two columns, ``timestamp,label``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, InputError
from .texture import FEATURE_NAMES
from .validation import check_array


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix, binary labels, and per-sample timestamps."""

    X: np.ndarray
    y: np.ndarray
    timestamps: tuple[str | None, ...]

    feature_names = FEATURE_NAMES

    def __post_init__(self):
        X = check_array(self.X)
        y = np.asarray(self.y)
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise InputError(
                f"labels shape {y.shape} does not match {X.shape[0]} samples"
            )
        if not np.all(np.isin(y, (0, 1))):
            raise InputError("labels must be 0 or 1")
        if len(self.timestamps) != X.shape[0]:
            raise InputError(
                f"{len(self.timestamps)} timestamps for {X.shape[0]} samples"
            )
        X = X.copy()
        X.flags.writeable = False
        yy = y.astype(np.int64)
        yy.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", yy)
        object.__setattr__(self, "timestamps", tuple(self.timestamps))

    def __len__(self) -> int:
        return self.X.shape[0]

    def split(self, train_fraction: float = 0.8) -> tuple["LabeledDataset", "LabeledDataset"]:
        """Deterministic stratified split preserving sample order.

        The first ``train_fraction`` of each class (in dataset order) goes
        to the training set, the remainder to the test set.
        """
        if not 0.0 < train_fraction < 1.0:
            raise InputError(f"train_fraction must be in (0, 1), got {train_fraction}")
        train_idx, test_idx = [], []
        for cls in (0, 1):
            members = np.flatnonzero(self.y == cls)
            cut = int(round(train_fraction * members.size))
            train_idx.extend(members[:cut])
            test_idx.extend(members[cut:])
        train_idx = np.sort(np.asarray(train_idx, dtype=np.int64))
        test_idx = np.sort(np.asarray(test_idx, dtype=np.int64))
        if train_idx.size == 0 or test_idx.size == 0:
            raise InputError("split produced an empty train or test set")
        return self._take(train_idx), self._take(test_idx)

    def _take(self, idx: np.ndarray) -> "LabeledDataset":
        return LabeledDataset(
            self.X[idx], self.y[idx], tuple(self.timestamps[i] for i in idx)
        )


def write_features_csv(
    path: str | Path,
    X: np.ndarray,
    timestamps,
    labels=None,
) -> None:
    """Write feature rows in the canonical column order."""
    X = check_array(X)
    if X.shape[1] != len(FEATURE_NAMES):
        raise InputError(f"expected {len(FEATURE_NAMES)} feature columns, got {X.shape[1]}")
    header = ["timestamp", *FEATURE_NAMES]
    if labels is not None:
        header.append("label")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(X.shape[0]):
            row = [timestamps[i] or ""] + [repr(float(v)) for v in X[i]]
            if labels is not None:
                row.append(str(int(labels[i])))
            writer.writerow(row)


def read_features_csv(path: str | Path):
    """Read a feature CSV; returns ``(X, timestamps, labels_or_None)``."""
    path = Path(path)
    if not path.exists():
        raise FormatError(f"no such feature file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        missing = [c for c in ("timestamp", *FEATURE_NAMES) if c not in header]
        if missing:
            raise FormatError(f"{path}: missing columns {missing}")
        col = {name: header.index(name) for name in header}
        has_label = "label" in col
        rows, timestamps, labels = [], [], []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(header):
                raise FormatError(
                    f"{path}:{lineno}: {len(rec)} cells, header has {len(header)}"
                )
            try:
                rows.append([float(rec[col[name]]) for name in FEATURE_NAMES])
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: non-numeric feature: {exc}") from exc
            timestamps.append(rec[col["timestamp"]] or None)
            if has_label:
                labels.append(_parse_label(rec[col["label"]], path, lineno))
    if not rows:
        raise FormatError(f"{path}: no data rows")
    X = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(X)):
        raise FormatError(f"{path}: non-finite feature values")
    y = np.array(labels, dtype=np.int64) if has_label else None
    return X, tuple(timestamps), y


def _parse_label(token: str, path, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError as exc:
        raise FormatError(f"{path}:{lineno}: bad label {token!r}") from exc
    if value not in (0, 1):
        raise FormatError(f"{path}:{lineno}: label must be 0 or 1, got {value}")
    return value


def write_labels_csv(path: str | Path, timestamps, labels) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["timestamp", "label"])
        for ts, label in zip(timestamps, labels):
            writer.writerow([ts or "", str(int(label))])


def read_labels_csv(path: str | Path) -> dict[str, int]:
    path = Path(path)
    if not path.exists():
        raise FormatError(f"no such labels file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        if "timestamp" not in header or "label" not in header:
            raise FormatError(f"{path}: expected timestamp,label columns, got {header}")
        ts_col, label_col = header.index("timestamp"), header.index("label")
        out: dict[str, int] = {}
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            ts = rec[ts_col]
            if ts in out:
                raise FormatError(f"{path}:{lineno}: duplicate timestamp {ts!r}")
            out[ts] = _parse_label(rec[label_col], path, lineno)
    if not out:
        raise FormatError(f"{path}: no data rows")
    return out


def join_labels(timestamps, label_map: dict[str, int]) -> np.ndarray:
    """Match per-sample timestamps against a labels file."""
    labels = []
    for ts in timestamps:
        if ts is None or ts not in label_map:
            raise InputError(f"no label found for sample at timestamp {ts!r}")
        labels.append(label_map[ts])
    return np.array(labels, dtype=np.int64)
