"""Command-line interface: calibrate, features, synth, train, predict, timeseries.

Exit codes: 0 success, 1 usage error, 2 data/format error. All data errors
go to stderr with the originating module in the prefix.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .calib import calibrate
from .dataset import (
    join_labels,
    read_features_csv,
    read_labels_csv,
    write_features_csv,
    write_labels_csv,
)
from .errors import SartexError
from .evaluate import CLASSIFIER_KINDS, evaluate, make_classifier
from .model_io import load_model, save_model
from .raster import read_raster, write_raster
from .synth import ACTIVE_SPEC, IDLE_SPEC, SceneSpec, generate_dataset
from .texture import (
    DEFAULT_OFFSETS,
    DEFAULT_QUANT,
    FEATURE_NAMES,
    OffsetSpec,
    QuantSpec,
    SUPPORTED_ANGLES,
    texture_vector,
)
from .timeseries import build_series, emit_series_csv, load_chip_dir

log = logging.getLogger("sartex.cli")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected LO:HI (for example -30:5), got {text!r}"
        ) from None


def _parse_angles(text: str) -> tuple[int, ...]:
    if text == "all":
        return SUPPORTED_ANGLES
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'all' or comma-separated degrees, got {text!r}"
        ) from None


def _parse_gamma(text: str):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a number, got {text!r}") from None


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="log progress to stderr")
    common.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="worker threads for per-chip work (results are identical for any N)")

    parser = _Parser(prog="sartex", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sartex {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("calibrate", parents=[common],
                       help="calibrate a DN raster to incidence-corrected backscatter")
    p.add_argument("--k", type=float, required=True, help="calibration constant in dB")
    p.add_argument("--incidence", type=float, required=True, help="incidence angle in degrees")
    p.add_argument("input", help="DN raster file")
    p.add_argument("output", help="destination raster file")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("features", parents=[common],
                       help="extract the 12 texture features of one chip pair")
    p.add_argument("--vv", required=True, help="VV chip file")
    p.add_argument("--vh", required=True, help="VH chip file")
    p.add_argument("--levels", type=int, default=DEFAULT_QUANT.levels, help="grey level count")
    p.add_argument("--range", type=_parse_range, default=(DEFAULT_QUANT.lo, DEFAULT_QUANT.hi),
                   metavar="LO:HI", help="dB clip window (write as --range=-30:5)")
    p.add_argument("--distance", type=int, default=DEFAULT_OFFSETS.distance, help="pair distance in pixels")
    p.add_argument("--angles", type=_parse_angles, default=SUPPORTED_ANGLES,
                   metavar="ANGLES", help="'all' or comma-separated degrees from 0,45,90,135")
    p.add_argument("--any-stage", action="store_true",
                   help="accept chips that are not gamma-nought calibrated")
    p.add_argument("--out", help="write the CSV here instead of stdout")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("synth", parents=[common],
                       help="generate a labeled synthetic chip dataset")
    p.add_argument("--n", type=int, required=True, help="samples per class")
    p.add_argument("--out-dir", required=True, help="directory for chips and CSVs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=ACTIVE_SPEC.size, help="chip side length in pixels")
    p.add_argument("--background", type=float, default=ACTIVE_SPEC.background_mean_db,
                   help="background backscatter in dB")
    p.add_argument("--scatterers", type=int, default=ACTIVE_SPEC.n_scatterers,
                   help="scatterer count of the active class")
    p.add_argument("--idle-scatterers", type=int, default=IDLE_SPEC.n_scatterers,
                   help="scatterer count of the idle class")
    p.add_argument("--boost", type=float, default=ACTIVE_SPEC.scatterer_boost_db,
                   help="scatterer brightness above background in dB")
    p.add_argument("--radius", type=float, default=ACTIVE_SPEC.cluster_radius,
                   help="cluster radius in pixels")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", parents=[common], help="train a classifier on a feature CSV")
    p.add_argument("--kind", choices=CLASSIFIER_KINDS, required=True)
    p.add_argument("--data", required=True, help="feature CSV")
    p.add_argument("--labels", help="labels CSV (timestamp,label); optional when "
                                    "the feature CSV has a label column")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="model JSON destination")
    p.add_argument("--trees", type=int, default=1000, help="forest: number of trees")
    p.add_argument("--max-features", type=int, default=None,
                   help="forest: candidate features per split (default sqrt)")
    p.add_argument("--c", type=float, default=10.0, help="svm: soft-margin penalty")
    p.add_argument("--gamma", type=_parse_gamma, default="auto", help="svm: RBF width or 'auto'")
    p.add_argument("--epochs", type=int, default=1000, help="mlp: training epochs")
    p.add_argument("--learning-rate", type=float, default=1e-3, help="mlp: Adam step size")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", parents=[common],
                       help="classify feature rows with a saved model")
    p.add_argument("--model", required=True, help="model JSON from 'train'")
    p.add_argument("--data", required=True, help="feature CSV")
    p.add_argument("--labels", help="labels CSV for accuracy reporting")
    p.add_argument("--out", help="write predictions here instead of stdout")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("timeseries", parents=[common],
                       help="build a per-date feature series from a chip directory")
    p.add_argument("--dir", required=True, help="directory of <date>_VV.sarr / <date>_VH.sarr chips")
    p.add_argument("--model", help="optional model JSON for labeling each date")
    p.add_argument("--out", required=True, help="series CSV destination")
    p.set_defaults(func=cmd_timeseries)

    return parser


def cmd_calibrate(ns) -> int:
    r = read_raster(ns.input)
    out = calibrate(r, k_db=ns.k, phi_deg=ns.incidence)
    write_raster(out, ns.output)
    log.info("calibrated %s -> %s (stage %s)", ns.input, ns.output, out.stage.value)
    return 0


def cmd_features(ns) -> int:
    lo, hi = ns.range
    quant = QuantSpec(ns.levels, lo, hi)
    offsets = OffsetSpec(ns.distance, ns.angles)
    vv = read_raster(ns.vv)
    vh = read_raster(ns.vh)
    vec = texture_vector(vv, vh, quant, offsets, allow_any_stage=ns.any_stage)
    header = ",".join(["timestamp", *FEATURE_NAMES])
    row = ",".join([vec.timestamp or ""] + [repr(float(v)) for v in vec.as_array()])
    text = header + "\n" + row + "\n"
    if ns.out:
        Path(ns.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_synth(ns) -> int:
    active = SceneSpec(
        size=ns.size,
        background_mean_db=ns.background,
        n_scatterers=ns.scatterers,
        scatterer_boost_db=ns.boost,
        cluster_radius=ns.radius,
    )
    idle = SceneSpec(
        size=ns.size,
        background_mean_db=ns.background,
        n_scatterers=ns.idle_scatterers,
        scatterer_boost_db=ns.boost,
        cluster_radius=ns.radius,
    )
    dataset, chips = generate_dataset(
        ns.n, active_spec=active, idle_spec=idle, seed=ns.seed, jobs=ns.jobs
    )
    out_dir = Path(ns.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for (vv, vh), ts in zip(chips, dataset.timestamps):
        write_raster(vv, out_dir / f"{ts}_VV.sarr")
        write_raster(vh, out_dir / f"{ts}_VH.sarr")
    write_features_csv(out_dir / "features.csv", dataset.X, dataset.timestamps, dataset.y)
    write_labels_csv(out_dir / "labels.csv", dataset.timestamps, dataset.y)
    log.info("wrote %d chips plus features.csv/labels.csv to %s", 2 * len(dataset), out_dir)
    return 0


def _load_dataset(ns):
    X, timestamps, labels = read_features_csv(ns.data)
    if ns.labels:
        labels = join_labels(timestamps, read_labels_csv(ns.labels))
    return X, timestamps, labels


def cmd_train(ns) -> int:
    X, _, y = _load_dataset(ns)
    if y is None:
        raise SartexError(
            "training needs labels: pass --labels or a feature CSV with a label column"
        )
    hyper = {
        "forest": {"n_trees": ns.trees, "max_features": ns.max_features},
        "svm": {"c": ns.c, "gamma": ns.gamma},
        "mlp": {"epochs": ns.epochs, "learning_rate": ns.learning_rate},
    }[ns.kind]
    model = make_classifier(ns.kind, seed=ns.seed, **hyper).fit(X, y)
    save_model(model, ns.out)
    log.info("trained %s on %d samples, training accuracy %.4f",
             ns.kind, X.shape[0], evaluate(model, X, y))
    return 0


def cmd_predict(ns) -> int:
    model = load_model(ns.model)
    X, timestamps, labels = _load_dataset(ns)
    predicted = model.predict(X)
    scores = model.predict_proba(X)[:, 1]
    lines = ["timestamp,label,score"]
    for ts, label, score in zip(timestamps, predicted, scores):
        lines.append(f"{ts or ''},{int(label)},{score!r}")
    text = "\n".join(lines) + "\n"
    if ns.out:
        Path(ns.out).write_text(text, encoding="utf-8")
        accuracy_stream = sys.stdout
    else:
        sys.stdout.write(text)
        accuracy_stream = sys.stderr
    if labels is not None:
        accuracy = float((predicted == np.asarray(labels)).mean())
        print(f"accuracy {accuracy!r}", file=accuracy_stream)
    return 0


def cmd_timeseries(ns) -> int:
    pairs = load_chip_dir(ns.dir)
    model = load_model(ns.model) if ns.model else None
    series = build_series(pairs, model=model, jobs=ns.jobs)
    emit_series_csv(series, ns.out)
    log.info("wrote %d series points to %s", len(series), ns.out)
    return 0


def _module_of(exc: BaseException) -> str:
    """Deepest package module in the traceback, for error prefixes."""
    module = "sartex"
    tb = exc.__traceback__
    while tb is not None:
        name = tb.tb_frame.f_globals.get("__name__", "")
        if name.startswith("sartex"):
            module = name
        tb = tb.tb_next
    return module.rsplit(".", 1)[-1]


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        print("run 'sartex --help' for usage", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if ns.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
    )
    try:
        return ns.func(ns)
    except SartexError as exc:
        print(f"{_module_of(exc)}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
