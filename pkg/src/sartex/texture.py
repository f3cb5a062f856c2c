"""Grey-level quantization, co-occurrence matrices, and texture features.

The pipeline for one chip is ``quantize -> glcm -> haralick``. Doing this
for both polarization channels yields the 12-value texture vector that the
classifiers consume.

Quantization clips calibrated dB values to a fixed window and maps them
linearly onto ``levels`` integer grey tones. The window is global, not
per-chip: per-chip min-max scaling would normalize away exactly the
brightness changes that activity introduces.

The co-occurrence matrix counts, for every offset ``(dx, dy)``, how often
a pixel with grey tone ``i`` has a neighbour with grey tone ``j`` at that
offset. Counts are accumulated in both offset directions (symmetric
matrix) and over all requested angles before normalizing to probabilities,
which makes the features independent of scan direction and robust to
scene rotation. With the image y-axis pointing down, the four supported
angles map to offsets::

    0 deg -> (+s,  0)    45 deg -> (+s, -s)
   90 deg -> ( 0, -s)   135 deg -> (-s, -s)

Six scalar features summarize the matrix ``P``:

* contrast          sum of P[i, j] * (i - j)^2
* dissimilarity     sum of P[i, j] * |i - j|
* homogeneity       sum of P[i, j] / (1 + (i - j)^2)
* asm               sum of P[i, j]^2
* energy            sqrt(asm)
* correlation       sum of P[i, j] * (i - mu_i)(j - mu_j) / sqrt(var_i * var_j)

Correlation of a constant image is defined as 1 (a constant image is
perfectly self-correlated; the degenerate zero-variance case must not
leak NaN into the classifiers).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .base import BaseEstimator, TransformerMixin
from .errors import InputError
from .raster import Channel, Raster, Stage

SUPPORTED_ANGLES = (0, 45, 90, 135)

#: Fixed order of the 12 features in vectors, CSV files, and datasets.
FEATURE_NAMES = (
    "vv_contrast",
    "vv_dissimilarity",
    "vv_homogeneity",
    "vv_asm",
    "vv_energy",
    "vv_correlation",
    "vh_contrast",
    "vh_dissimilarity",
    "vh_homogeneity",
    "vh_asm",
    "vh_energy",
    "vh_correlation",
)


@dataclass(frozen=True)
class QuantSpec:
    """Grey-level count and dB clip window for quantization."""

    levels: int = 32
    lo: float = -30.0
    hi: float = 5.0

    def __post_init__(self):
        if not 2 <= self.levels <= 256:
            raise InputError(f"levels must lie in [2, 256], got {self.levels}")
        if not self.lo < self.hi:
            raise InputError(f"clip range is empty: lo={self.lo} >= hi={self.hi}")


@dataclass(frozen=True)
class OffsetSpec:
    """Pixel-pair distance and the set of offset angles in degrees."""

    distance: int = 1
    angles: tuple[int, ...] = SUPPORTED_ANGLES

    def __post_init__(self):
        if int(self.distance) != self.distance or self.distance < 1:
            raise InputError(f"distance must be a positive integer, got {self.distance}")
        angles = tuple(self.angles)
        if not angles:
            raise InputError("at least one offset angle is required")
        for a in angles:
            if a not in SUPPORTED_ANGLES:
                raise InputError(f"unsupported angle {a}; choose from {SUPPORTED_ANGLES}")
        if len(set(angles)) != len(angles):
            raise InputError(f"duplicate angles in {angles}")
        object.__setattr__(self, "angles", angles)

    def offsets(self) -> list[tuple[int, int]]:
        """(dx, dy) pixel offsets, image y-axis pointing down."""
        s = int(self.distance)
        table = {0: (s, 0), 45: (s, -s), 90: (0, -s), 135: (-s, -s)}
        return [table[a] for a in self.angles]


DEFAULT_QUANT = QuantSpec()
DEFAULT_OFFSETS = OffsetSpec()


@dataclass(frozen=True)
class Glcm:
    """Normalized symmetric co-occurrence probability matrix."""

    p: np.ndarray
    levels: int
    spec: OffsetSpec

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        if p.shape != (self.levels, self.levels):
            raise InputError(f"matrix shape {p.shape} does not match levels={self.levels}")
        if np.any(p < 0):
            raise InputError("co-occurrence probabilities must be non-negative")
        total = p.sum()
        if abs(total - 1.0) > 1e-12:
            raise InputError(f"co-occurrence probabilities sum to {total!r}, expected 1")
        if not np.array_equal(p, p.T):
            raise InputError("co-occurrence matrix must be symmetric")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "p", p)


class HaralickFeatures(NamedTuple):
    contrast: float
    dissimilarity: float
    homogeneity: float
    asm: float
    energy: float
    correlation: float


@dataclass(frozen=True)
class TextureVector:
    """The 12 texture features of one chip at one date (6 per channel)."""

    vv: HaralickFeatures
    vh: HaralickFeatures
    timestamp: str | None = None

    def as_array(self) -> np.ndarray:
        return np.array(tuple(self.vv) + tuple(self.vh), dtype=np.float64)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.as_array()))


def quantize(r: Raster, q: QuantSpec = DEFAULT_QUANT, *, allow_any_stage: bool = False) -> np.ndarray:
    """Map pixel values onto integer grey levels ``0 .. levels-1``.

    Values are clipped to ``[lo, hi]`` and scaled linearly; the midpoint
    rounding rule is ``floor(f * (levels - 1) + 0.5)`` so that ``hi`` maps
    to the top level. Expects calibrated gamma-nought input unless
    ``allow_any_stage`` is set.
    """
    if r.stage is not Stage.GAMMA0_DB and not allow_any_stage:
        raise InputError(
            f"quantize expects GAMMA0_DB input, got stage {r.stage.value} "
            f"(pass allow_any_stage=True to override)"
        )
    v = np.clip(r.pixels.astype(np.float64), q.lo, q.hi)
    f = (v - q.lo) / (q.hi - q.lo)
    return np.floor(f * (q.levels - 1) + 0.5).astype(np.int64)


def glcm(levels: np.ndarray, spec: OffsetSpec = DEFAULT_OFFSETS, n: int = DEFAULT_QUANT.levels) -> Glcm:
    """Build the normalized symmetric co-occurrence matrix of a level grid.

    Directed pair counts are accumulated for every requested angle, summed,
    symmetrized, and normalized to probabilities. Every requested angle
    must produce at least one pixel pair.
    """
    grid = np.asarray(levels)
    if grid.ndim != 2:
        raise InputError(f"level grid must be 2-D, got ndim={grid.ndim}")
    if not np.issubdtype(grid.dtype, np.integer):
        raise InputError(f"level grid must be integer, got dtype {grid.dtype}")
    if grid.size and (grid.min() < 0 or grid.max() >= n):
        raise InputError(
            f"grey levels must lie in [0, {n}), got range "
            f"[{grid.min()}, {grid.max()}]"
        )
    h, w = grid.shape
    counts = np.zeros((n, n), dtype=np.int64)
    for dx, dy in spec.offsets():
        y0, y1 = max(0, -dy), h - max(0, dy)
        x0, x1 = max(0, -dx), w - max(0, dx)
        if y1 <= y0 or x1 <= x0:
            raise InputError(
                f"no pixel pairs for offset ({dx}, {dy}) on a {w}x{h} grid; "
                f"distance {spec.distance} exceeds the grid"
            )
        src = grid[y0:y1, x0:x1].ravel()
        dst = grid[y0 + dy : y1 + dy, x0 + dx : x1 + dx].ravel()
        np.add.at(counts, (src, dst), 1)
    sym = counts + counts.T
    p = sym / float(sym.sum())
    return Glcm(p, n, spec)


def haralick(g: Glcm) -> HaralickFeatures:
    """The six scalar texture features of a co-occurrence matrix."""
    p = g.p
    idx = np.arange(g.levels, dtype=np.float64)
    diff = idx[:, None] - idx[None, :]
    contrast = float((p * diff**2).sum())
    dissimilarity = float((p * np.abs(diff)).sum())
    homogeneity = float((p / (1.0 + diff**2)).sum())
    asm = float((p * p).sum())
    energy = float(np.sqrt(asm))

    pi = p.sum(axis=1)
    pj = p.sum(axis=0)
    mu_i = float((idx * pi).sum())
    mu_j = float((idx * pj).sum())
    var_i = float(((idx - mu_i) ** 2 * pi).sum())
    var_j = float(((idx - mu_j) ** 2 * pj).sum())
    if var_i * var_j == 0.0:
        correlation = 1.0
    else:
        cov = float((p * np.outer(idx - mu_i, idx - mu_j)).sum())
        correlation = float(np.clip(cov / np.sqrt(var_i * var_j), -1.0, 1.0))
    return HaralickFeatures(contrast, dissimilarity, homogeneity, asm, energy, correlation)


def texture_vector(
    vv: Raster,
    vh: Raster,
    q: QuantSpec = DEFAULT_QUANT,
    spec: OffsetSpec = DEFAULT_OFFSETS,
    *,
    allow_any_stage: bool = False,
) -> TextureVector:
    """Extract the 12-feature dual-polarization texture vector of a chip."""
    if vv.channel is not Channel.VV or vh.channel is not Channel.VH:
        raise InputError(
            f"expected (VV, VH) raster pair, got ({vv.channel.value}, {vh.channel.value})"
        )
    if (vv.width, vv.height) != (vh.width, vh.height):
        raise InputError(
            f"channel dimensions differ: VV is {vv.width}x{vv.height}, "
            f"VH is {vh.width}x{vh.height}"
        )
    if vv.timestamp != vh.timestamp:
        raise InputError(
            f"channel timestamps differ: {vv.timestamp!r} vs {vh.timestamp!r}"
        )
    features = []
    for r in (vv, vh):
        grid = quantize(r, q, allow_any_stage=allow_any_stage)
        features.append(haralick(glcm(grid, spec, q.levels)))
    return TextureVector(vv=features[0], vh=features[1], timestamp=vv.timestamp)


class TextureFeatureExtractor(TransformerMixin, BaseEstimator):
    """Stateless transformer from (VV, VH) raster pairs to feature rows.

    ``transform`` accepts a sequence of ``(vv, vh)`` :class:`Raster` pairs
    and returns an ``(n, 12)`` array in :data:`FEATURE_NAMES` order, ready
    for the classifiers.
    """

    def __init__(
        self,
        levels: int = DEFAULT_QUANT.levels,
        lo: float = DEFAULT_QUANT.lo,
        hi: float = DEFAULT_QUANT.hi,
        distance: int = DEFAULT_OFFSETS.distance,
        angles: tuple[int, ...] = DEFAULT_OFFSETS.angles,
        allow_any_stage: bool = False,
    ):
        self.levels = levels
        self.lo = lo
        self.hi = hi
        self.distance = distance
        self.angles = angles
        self.allow_any_stage = allow_any_stage

    def fit(self, X: Sequence[tuple[Raster, Raster]], y=None):
        return self

    def transform(self, X: Sequence[tuple[Raster, Raster]]) -> np.ndarray:
        q = QuantSpec(self.levels, self.lo, self.hi)
        spec = OffsetSpec(self.distance, tuple(self.angles))
        rows = [
            texture_vector(vv, vh, q, spec, allow_any_stage=self.allow_any_stage).as_array()
            for vv, vh in X
        ]
        return np.array(rows, dtype=np.float64).reshape(len(rows), len(FEATURE_NAMES))
