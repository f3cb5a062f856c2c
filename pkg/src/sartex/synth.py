"""Synthetic SAR chip generator for labeled activity / no-activity scenes.

The background is single-look speckle: per-pixel linear power drawn from
an exponential distribution whose mean is the background backscatter, then
converted to dB. Activity is modeled as bright point scatterers (vehicles,
tanks, equipment) placed uniformly inside a disk around the chip center;
each adds a deterministic return of ``background + boost`` dB linear power
on top of the speckle in its cell, so the chip maximum is guaranteed to
reach ``background + boost`` dB.

Speckle is drawn before scatterers are placed, so two specs that differ
only in ``n_scatterers`` share the same background realization; paired
comparisons isolate the effect of the scatterers. The VV and VH streams
are decorrelated by mixing the channel into the random seed.

The cross-pol channel of a dataset sample is drawn with its clutter
background 6 dB below VV and its scatterer boost reduced by a further
6 dB: metallic hard targets return mostly co-polarized energy, so their
cross-pol signature sits well below the co-pol one.
"""

from __future__ import annotations

import datetime
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .dataset import LabeledDataset
from .errors import InputError
from .raster import Channel, Raster, Stage
from .texture import DEFAULT_OFFSETS, DEFAULT_QUANT, OffsetSpec, QuantSpec, texture_vector


@dataclass(frozen=True)
class SceneSpec:
    """Parameters of one synthetic chip."""

    size: int = 64
    background_mean_db: float = -15.0
    n_scatterers: int = 0
    scatterer_boost_db: float = 15.0
    cluster_radius: float = 20.0
    seed: int = 0

    def __post_init__(self):
        if self.size < 2:
            raise InputError(f"chip size must be >= 2, got {self.size}")
        if self.n_scatterers < 0:
            raise InputError(f"n_scatterers must be >= 0, got {self.n_scatterers}")
        if self.scatterer_boost_db < 0:
            raise InputError(f"scatterer boost must be >= 0 dB, got {self.scatterer_boost_db}")
        if self.cluster_radius < 0:
            raise InputError(f"cluster radius must be >= 0, got {self.cluster_radius}")
        if self.n_scatterers > 0 and self.cluster_radius > (self.size - 1) / 2:
            raise InputError(
                f"cluster radius {self.cluster_radius} does not fit a "
                f"{self.size}x{self.size} chip"
            )


IDLE_SPEC = SceneSpec(n_scatterers=0)
ACTIVE_SPEC = SceneSpec(n_scatterers=25, scatterer_boost_db=15.0, cluster_radius=20.0)

#: Cross-pol clutter sits this far below the co-pol background.
VH_BACKGROUND_OFFSET_DB = 6.0
#: Cross-pol target returns lose this much boost on top of the clutter offset.
VH_TARGET_DEFICIT_DB = 6.0

_CHANNEL_CODE = {Channel.VV: 0, Channel.VH: 1}


def generate_chip(spec: SceneSpec, channel: Channel, timestamp: str | None = None) -> Raster:
    """One gamma-nought chip of speckle plus optional scatterer cluster."""
    rng = np.random.default_rng([int(spec.seed), _CHANNEL_CODE[channel]])
    mean_linear = 10.0 ** (spec.background_mean_db / 10.0)
    linear = rng.exponential(mean_linear, size=(spec.size, spec.size))
    if spec.n_scatterers > 0:
        center = (spec.size - 1) / 2.0
        radius = spec.cluster_radius * np.sqrt(rng.uniform(size=spec.n_scatterers))
        theta = rng.uniform(0.0, 2.0 * np.pi, size=spec.n_scatterers)
        cols = np.rint(center + radius * np.cos(theta)).astype(np.int64)
        rows = np.rint(center - radius * np.sin(theta)).astype(np.int64)
        cols = np.clip(cols, 0, spec.size - 1)
        rows = np.clip(rows, 0, spec.size - 1)
        boost_linear = 10.0 ** ((spec.background_mean_db + spec.scatterer_boost_db) / 10.0)
        np.add.at(linear, (rows, cols), boost_linear)
    # an exponential draw of exactly zero would put -inf in the dB grid
    linear = np.maximum(linear, np.finfo(np.float64).tiny)
    db = 10.0 * np.log10(linear)
    return Raster(db, Stage.GAMMA0_DB, channel, timestamp)


def _sample_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1)[0])


def _timestamps(count: int, start: str, cadence_days: int) -> list[str]:
    first = datetime.date.fromisoformat(start)
    return [
        (first + datetime.timedelta(days=cadence_days * i)).isoformat()
        for i in range(count)
    ]


def generate_dataset(
    n_per_class: int,
    active_spec: SceneSpec = ACTIVE_SPEC,
    idle_spec: SceneSpec = IDLE_SPEC,
    seed: int = 0,
    quant: QuantSpec = DEFAULT_QUANT,
    offsets: OffsetSpec = DEFAULT_OFFSETS,
    start_date: str = "2020-01-01",
    cadence_days: int = 12,
    jobs: int = 1,
) -> tuple[LabeledDataset, list[tuple[Raster, Raster]]]:
    """Balanced labeled dataset of texture vectors with the chips behind them.

    Per sample, the VV chip follows the class template and the VH chip is
    drawn with independent speckle, its background 6 dB lower, and its
    scatterer boost reduced by the cross-pol deficit. Sample seeds derive
    from ``(seed, index)``, so the dataset is reproducible and indifferent
    to ``jobs``.
    """
    if n_per_class < 1:
        raise InputError(f"n_per_class must be >= 1, got {n_per_class}")
    if active_spec.n_scatterers <= idle_spec.n_scatterers:
        raise InputError(
            "active spec must place more scatterers than the idle spec "
            f"({active_spec.n_scatterers} vs {idle_spec.n_scatterers})"
        )
    total = 2 * n_per_class
    labels = np.array([0] * n_per_class + [1] * n_per_class, dtype=np.int64)
    stamps = _timestamps(total, start_date, cadence_days)

    def build(index: int):
        template = active_spec if labels[index] == 1 else idle_spec
        sample_seed = _sample_seed(seed, index)
        vv_spec = replace(template, seed=sample_seed)
        vh_spec = replace(
            template,
            seed=sample_seed,
            background_mean_db=template.background_mean_db - VH_BACKGROUND_OFFSET_DB,
            scatterer_boost_db=max(0.0, template.scatterer_boost_db - VH_TARGET_DEFICIT_DB),
        )
        vv = generate_chip(vv_spec, Channel.VV, stamps[index])
        vh = generate_chip(vh_spec, Channel.VH, stamps[index])
        vec = texture_vector(vv, vh, quant, offsets)
        return vec.as_array(), (vv, vh)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            built = list(pool.map(build, range(total)))
    else:
        built = [build(i) for i in range(total)]
    X = np.array([row for row, _ in built], dtype=np.float64)
    chips = [pair for _, pair in built]
    return LabeledDataset(X, labels, tuple(stamps)), chips
