"""Raster data type, portable file formats, and chip extraction.

Two on-disk formats are supported:

* Binary (``.sarr``): magic bytes ``SARR``, a 4-byte little-endian unsigned
  header length, a UTF-8 JSON header ``{"width": W, "height": H,
  "stage": ..., "channel": ..., "timestamp": ...}``, then ``W*H``
  little-endian float32 pixel values in row-major order.
* CSV: a plain numeric grid, one raster row per line, with metadata in a
  ``<name>.meta.json`` sidecar next to the file.

Pixel origin is the top-left corner and storage is row-major; grey-level
co-occurrence offsets elsewhere in the package depend on this convention.
Rasters are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import enum
import json
import struct
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import BoundsError, FormatError, InputError, TruncationError

_MAGIC = b"SARR"


class Stage(enum.Enum):
    """Processing stage of the pixel values."""

    DN = "DN"
    SIGMA0_DB = "SIGMA0_DB"
    GAMMA0_DB = "GAMMA0_DB"


class Channel(enum.Enum):
    """Polarization channel."""

    VV = "VV"
    VH = "VH"


@dataclass(frozen=True)
class Raster:
    """A single-band 2-D grid of pixel values with acquisition metadata.

    Parameters
    ----------
    pixels : ndarray
        2-D array of shape ``(height, width)``. Stored as float32; the
        array is copied and frozen at construction.
    stage : Stage
        Whether values are raw digital numbers or calibrated backscatter
        in dB.
    channel : Channel
        Polarization channel.
    timestamp : str, optional
        ISO-8601 date of acquisition.
    """

    pixels: np.ndarray
    stage: Stage
    channel: Channel
    timestamp: str | None = None

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float32)
        if px.ndim != 2:
            raise InputError(f"pixels must be a 2-D grid, got ndim={px.ndim}")
        h, w = px.shape
        if w < 2 or h < 2:
            raise InputError(
                f"raster must be at least 2x2 (co-occurrence needs a pixel "
                f"pair), got {w}x{h}"
            )
        if not np.all(np.isfinite(px)):
            raise InputError("raster contains NaN or infinite pixels")
        if self.stage is Stage.DN and np.any(px < 0):
            raise InputError("DN raster contains negative pixel values")
        px = px.copy()
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def with_pixels(self, pixels: np.ndarray, stage: Stage) -> "Raster":
        """New raster with replaced pixel grid and stage, metadata kept."""
        return replace(self, pixels=pixels, stage=stage)


@dataclass(frozen=True)
class ChipBounds:
    """A rectangular pixel window: top-left offset ``(x0, y0)``, size ``(w, h)``."""

    x0: int
    y0: int
    w: int
    h: int

    def __post_init__(self):
        if self.x0 < 0 or self.y0 < 0:
            raise InputError(f"chip offset must be non-negative, got ({self.x0}, {self.y0})")
        if self.w < 2 or self.h < 2:
            raise InputError(f"chip must be at least 2x2, got {self.w}x{self.h}")


def extract_chip(r: Raster, b: ChipBounds) -> Raster:
    """Copy a window out of a raster; stage/channel/timestamp inherited."""
    if b.x0 + b.w > r.width or b.y0 + b.h > r.height:
        raise BoundsError(
            f"chip ({b.x0}, {b.y0}, {b.w}x{b.h}) exceeds raster extent "
            f"{r.width}x{r.height}"
        )
    window = r.pixels[b.y0 : b.y0 + b.h, b.x0 : b.x0 + b.w]
    return r.with_pixels(window, r.stage)


def _header_dict(r: Raster) -> dict:
    header = {
        "width": r.width,
        "height": r.height,
        "stage": r.stage.value,
        "channel": r.channel.value,
    }
    if r.timestamp is not None:
        header["timestamp"] = r.timestamp
    return header


def _parse_meta(meta: dict, where: str) -> tuple[Stage, Channel, str | None]:
    try:
        stage = Stage(meta["stage"])
        channel = Channel(meta["channel"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"{where}: bad or missing stage/channel: {exc}") from exc
    timestamp = meta.get("timestamp")
    if timestamp is not None and not isinstance(timestamp, str):
        raise FormatError(f"{where}: timestamp must be a string")
    return stage, channel, timestamp


def write_raster(r: Raster, path: str | Path) -> None:
    """Write a raster to ``path``.

    A ``.csv`` suffix selects the CSV grid format with its JSON sidecar;
    anything else is written in the binary format. Round-trips exactly
    through :func:`read_raster`.
    """
    path = Path(path)
    if path.suffix.lower() == ".csv":
        _write_csv(r, path)
    else:
        _write_binary(r, path)


def read_raster(path: str | Path) -> Raster:
    """Read a raster written by :func:`write_raster`.

    The format is detected from the file content (binary magic bytes),
    not the file name.
    """
    path = Path(path)
    if not path.exists():
        raise FormatError(f"no such raster file: {path}")
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == _MAGIC:
        return _read_binary(path)
    return _read_csv(path)


def _write_binary(r: Raster, path: Path) -> None:
    header = json.dumps(_header_dict(r), sort_keys=True).encode("utf-8")
    payload = np.ascontiguousarray(r.pixels, dtype="<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        fh.write(payload)


def _read_binary(path: Path) -> Raster:
    data = path.read_bytes()
    if data[:4] != _MAGIC:
        raise FormatError(f"{path}: missing SARR magic bytes")
    if len(data) < 8:
        raise TruncationError(f"{path}: file too short for header length")
    (hlen,) = struct.unpack("<I", data[4:8])
    if len(data) < 8 + hlen:
        raise TruncationError(f"{path}: header shorter than declared length")
    try:
        meta = json.loads(data[8 : 8 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: malformed JSON header: {exc}") from exc
    try:
        width, height = int(meta["width"]), int(meta["height"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: bad or missing width/height: {exc}") from exc
    stage, channel, timestamp = _parse_meta(meta, str(path))
    payload = data[8 + hlen :]
    expected = width * height * 4
    if len(payload) < expected:
        raise TruncationError(
            f"{path}: payload holds {len(payload) // 4} values, "
            f"header declares {width * height}"
        )
    if len(payload) > expected:
        raise FormatError(f"{path}: {len(payload) - expected} trailing bytes after payload")
    pixels = np.frombuffer(payload, dtype="<f4").reshape(height, width)
    return Raster(pixels, stage, channel, timestamp)


def _sidecar(path: Path) -> Path:
    return path.with_suffix("").with_suffix(".meta.json") if path.suffix else Path(str(path) + ".meta.json")


def _write_csv(r: Raster, path: Path) -> None:
    lines = []
    for row in r.pixels:
        lines.append(",".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    _sidecar(path).write_text(
        json.dumps(_header_dict(r), sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def _read_csv(path: Path) -> Raster:
    sidecar = _sidecar(path)
    if not sidecar.exists():
        raise FormatError(f"{path}: missing metadata sidecar {sidecar.name}")
    try:
        meta = json.loads(sidecar.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{sidecar}: malformed JSON: {exc}") from exc
    stage, channel, timestamp = _parse_meta(meta, str(sidecar))
    rows = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: non-numeric cell: {exc}") from exc
    if not rows:
        raise FormatError(f"{path}: empty grid")
    width = len(rows[0])
    for lineno, row in enumerate(rows, start=1):
        if len(row) != width:
            raise TruncationError(
                f"{path}:{lineno}: row has {len(row)} values, expected {width}"
            )
    declared_w = meta.get("width")
    declared_h = meta.get("height")
    if declared_w is not None and (declared_w != width or declared_h != len(rows)):
        raise TruncationError(
            f"{path}: grid is {width}x{len(rows)}, sidecar declares "
            f"{declared_w}x{declared_h}"
        )
    pixels = np.array(rows, dtype=np.float32)
    if not np.all(np.isfinite(pixels)):
        raise FormatError(f"{path}: grid contains NaN or infinite values")
    return Raster(pixels, stage, channel, timestamp)
