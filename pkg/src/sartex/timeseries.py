"""Per-date texture extraction over a chronological chip sequence.

Each date is classified independently; no temporal smoothing is applied.
The series CSV has the header ``timestamp,<12 feature names>,label,score``
with empty label/score cells when no model was supplied.
"""

from __future__ import annotations

import csv
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, InputError
from .raster import Channel, Raster, read_raster
from .texture import (
    DEFAULT_OFFSETS,
    DEFAULT_QUANT,
    FEATURE_NAMES,
    HaralickFeatures,
    OffsetSpec,
    QuantSpec,
    TextureVector,
    texture_vector,
)


@dataclass(frozen=True)
class SeriesPoint:
    """Texture vector of one date, optionally classified."""

    timestamp: str
    vector: TextureVector
    label: int | None = None
    score: float | None = None


def build_series(
    pairs: list[tuple[Raster, Raster]],
    model=None,
    quant: QuantSpec = DEFAULT_QUANT,
    offsets: OffsetSpec = DEFAULT_OFFSETS,
    jobs: int = 1,
) -> list[SeriesPoint]:
    """One :class:`SeriesPoint` per (VV, VH) pair, in chronological order.

    Pairs must arrive sorted by strictly increasing timestamp and share
    chip dimensions. Labels and scores are populated only when a fitted
    model is supplied.
    """
    if not pairs:
        return []
    stamps = []
    dims = (pairs[0][0].width, pairs[0][0].height)
    for vv, vh in pairs:
        if vv.timestamp is None:
            raise InputError("every chip in a series needs a timestamp")
        if (vv.width, vv.height) != dims:
            raise InputError(
                f"inconsistent chip dimensions: {vv.width}x{vv.height} vs "
                f"{dims[0]}x{dims[1]}"
            )
        stamps.append(vv.timestamp)
    for prev, cur in zip(stamps, stamps[1:]):
        if cur <= prev:
            raise InputError(
                f"timestamps must be strictly increasing, got {prev!r} then {cur!r}"
            )

    def extract(pair):
        vv, vh = pair
        return texture_vector(vv, vh, quant, offsets)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            vectors = list(pool.map(extract, pairs))
    else:
        vectors = [extract(p) for p in pairs]

    if model is None:
        return [SeriesPoint(ts, vec) for ts, vec in zip(stamps, vectors)]
    X = np.array([v.as_array() for v in vectors])
    labels = model.predict(X)
    scores = model.predict_proba(X)[:, 1]
    return [
        SeriesPoint(ts, vec, int(label), float(score))
        for ts, vec, label, score in zip(stamps, vectors, labels, scores)
    ]


def emit_series_csv(series: list[SeriesPoint], path: str | Path) -> None:
    """Write a series as plot-ready CSV."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["timestamp", *FEATURE_NAMES, "label", "score"])
        for point in series:
            row = [point.timestamp]
            row.extend(repr(float(v)) for v in point.vector.as_array())
            row.append("" if point.label is None else str(point.label))
            row.append("" if point.score is None else repr(point.score))
            writer.writerow(row)


def read_series_csv(path: str | Path) -> list[SeriesPoint]:
    """Parse a CSV written by :func:`emit_series_csv`."""
    path = Path(path)
    if not path.exists():
        raise FormatError(f"no such series file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        expected = ["timestamp", *FEATURE_NAMES, "label", "score"]
        if header != expected:
            raise FormatError(f"{path}: unexpected header {header}")
        points = []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(expected):
                raise FormatError(f"{path}:{lineno}: wrong cell count")
            try:
                values = [float(tok) for tok in rec[1:13]]
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: non-numeric feature: {exc}") from exc
            vector = TextureVector(
                vv=HaralickFeatures(*values[:6]),
                vh=HaralickFeatures(*values[6:]),
                timestamp=rec[0],
            )
            label = int(rec[13]) if rec[13] else None
            score = float(rec[14]) if rec[14] else None
            points.append(SeriesPoint(rec[0], vector, label, score))
    return points


_CHIP_NAME = re.compile(r"^(?P<date>.+)_(?P<channel>VV|VH)\.sarr$")


def load_chip_dir(directory: str | Path) -> list[tuple[Raster, Raster]]:
    """Load ``<date>_VV.sarr`` / ``<date>_VH.sarr`` pairs sorted by date."""
    directory = Path(directory)
    if not directory.is_dir():
        raise InputError(f"no such chip directory: {directory}")
    by_date: dict[str, dict[str, Path]] = {}
    for entry in directory.iterdir():
        m = _CHIP_NAME.match(entry.name)
        if m:
            by_date.setdefault(m.group("date"), {})[m.group("channel")] = entry
    if not by_date:
        raise InputError(f"{directory}: no <date>_VV.sarr / <date>_VH.sarr chips found")
    pairs = []
    for date in sorted(by_date):
        files = by_date[date]
        if "VV" not in files or "VH" not in files:
            missing = "VH" if "VH" not in files else "VV"
            raise InputError(f"{directory}: {date} is missing its {missing} chip")
        vv = read_raster(files["VV"])
        vh = read_raster(files["VH"])
        if vv.channel is not Channel.VV or vh.channel is not Channel.VH:
            raise InputError(f"{directory}: channel metadata disagrees with file names for {date}")
        pairs.append((vv, vh))
    return pairs
