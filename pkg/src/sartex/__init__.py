"""Texture-based activity detection for low-resolution SAR image chips."""

__version__ = "0.1.0"

from .calib import CalibrationParams, calibrate, to_gamma0, to_sigma0
from .dataset import LabeledDataset, read_features_csv, read_labels_csv, write_features_csv, write_labels_csv
from .evaluate import CLASSIFIER_KINDS, evaluate, evaluate_multiseed, make_classifier
from .forest import RandomForestClassifier
from .mlp import MlpClassifier
from .model_io import load_model, save_model
from .preprocessing import Standardizer
from .raster import Channel, ChipBounds, Raster, Stage, extract_chip, read_raster, write_raster
from .svm import RbfSvmClassifier
from .synth import ACTIVE_SPEC, IDLE_SPEC, SceneSpec, generate_chip, generate_dataset
from .texture import (
    DEFAULT_OFFSETS,
    DEFAULT_QUANT,
    FEATURE_NAMES,
    Glcm,
    HaralickFeatures,
    OffsetSpec,
    QuantSpec,
    TextureFeatureExtractor,
    TextureVector,
    glcm,
    haralick,
    quantize,
    texture_vector,
)
from .timeseries import SeriesPoint, build_series, emit_series_csv, load_chip_dir, read_series_csv

__all__ = [
    "__version__",
    "CalibrationParams",
    "calibrate",
    "to_gamma0",
    "to_sigma0",
    "LabeledDataset",
    "read_features_csv",
    "read_labels_csv",
    "write_features_csv",
    "write_labels_csv",
    "CLASSIFIER_KINDS",
    "evaluate",
    "evaluate_multiseed",
    "make_classifier",
    "RandomForestClassifier",
    "MlpClassifier",
    "RbfSvmClassifier",
    "Standardizer",
    "load_model",
    "save_model",
    "Channel",
    "ChipBounds",
    "Raster",
    "Stage",
    "extract_chip",
    "read_raster",
    "write_raster",
    "ACTIVE_SPEC",
    "IDLE_SPEC",
    "SceneSpec",
    "generate_chip",
    "generate_dataset",
    "DEFAULT_OFFSETS",
    "DEFAULT_QUANT",
    "FEATURE_NAMES",
    "Glcm",
    "HaralickFeatures",
    "OffsetSpec",
    "QuantSpec",
    "TextureFeatureExtractor",
    "TextureVector",
    "glcm",
    "haralick",
    "quantize",
    "texture_vector",
    "SeriesPoint",
    "build_series",
    "emit_series_csv",
    "load_chip_dir",
    "read_series_csv",
]
