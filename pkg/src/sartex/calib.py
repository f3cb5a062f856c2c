"""Radiometric calibration of digital numbers to sigma-nought and gamma-nought.

``to_sigma0`` converts raw digital numbers to calibrated backscatter in dB:
``10 * log10(DN^2) + K`` with ``K`` the satellite calibration constant.
``to_gamma0`` then corrects for the incidence angle. The angle correction
divides by ``cos(phi)`` in the *linear power* domain, i.e. subtracts
``10 * log10(cos(phi))`` dB; dividing a dB value directly by ``cos(phi)``
would be non-physical. The correction is a constant per-raster dB offset,
so pixel differences are preserved exactly.

Both operations are pure; ``K`` and ``phi`` are single scalars per raster
(per-pixel calibration tables are out of scope).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError
from .raster import Raster, Stage


@dataclass(frozen=True)
class CalibrationParams:
    """Calibration constant ``k_db`` and incidence angle in degrees."""

    k_db: float
    incidence_angle_deg: float

    def __post_init__(self):
        _check_angle(self.incidence_angle_deg)


def _check_angle(phi: float) -> None:
    if not 0.0 <= phi < 90.0:
        raise DomainError(
            f"incidence angle must lie in [0, 90) degrees (cos must be "
            f"positive), got {phi}"
        )


def to_sigma0(r: Raster, k_db: float) -> Raster:
    """Calibrate a DN raster to sigma-nought in dB.

    Every pixel becomes ``10 * log10(DN^2) + k_db``. All digital numbers
    must be strictly positive.
    """
    if r.stage is not Stage.DN:
        raise InputError(f"to_sigma0 expects a DN raster, got stage {r.stage.value}")
    dn = r.pixels.astype(np.float64)
    bad = np.argwhere(dn <= 0)
    if bad.size:
        row, col = bad[0]
        raise DomainError(
            f"DN must be > 0 for log calibration; pixel (row {row}, col {col}) "
            f"is {dn[row, col]}"
        )
    out = 10.0 * np.log10(dn * dn) + k_db
    return r.with_pixels(out, Stage.SIGMA0_DB)


def to_gamma0(r: Raster, phi_deg: float) -> Raster:
    """Apply the incidence-angle correction to a sigma-nought raster.

    Adds the constant ``-10 * log10(cos(phi))`` dB offset. ``phi_deg = 0``
    leaves pixel values bit-identical.
    """
    if r.stage is not Stage.SIGMA0_DB:
        raise InputError(f"to_gamma0 expects a SIGMA0_DB raster, got stage {r.stage.value}")
    _check_angle(phi_deg)
    offset = -10.0 * math.log10(math.cos(math.radians(phi_deg)))
    out = r.pixels.astype(np.float64) + offset
    return r.with_pixels(out, Stage.GAMMA0_DB)


def calibrate(r: Raster, k_db: float, phi_deg: float) -> Raster:
    """Full DN -> sigma-nought -> gamma-nought chain."""
    return to_gamma0(to_sigma0(r, k_db), phi_deg)
