"""RGB <-> l-alpha-beta conversion, a decorrelated log-LMS color space.

RGB is mapped to LMS cone responses, taken to base-10 logs, then rotated
onto scaled orthogonal axes.  Stored pixel values are used directly: no gamma
linearization is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .imgcore import ImageRGB, ValidationError

#: RGB -> LMS.
RGB_TO_LMS = np.array(
    [
        [0.3811, 0.5783, 0.0402],
        [0.1967, 0.7244, 0.0782],
        [0.0241, 0.1288, 0.8444],
    ]
)

# Exact rational inverse of RGB_TO_LMS, rounded once to double precision.
LMS_TO_RGB = np.array(
    [
        [4.468669863496255, -3.5886759034721263, 0.11960436657860116],
        [-1.2197166276177633, 2.3830879129554567, -0.16263011175140057],
        [0.0585084769385459, -0.26107843902769373, 1.205665908525623],
    ]
)

#: Floor applied to L, M, S before the logarithm.
LMS_EPS = 1e-5

_INV_SQRT3 = 1.0 / math.sqrt(3.0)
_INV_SQRT6 = 1.0 / math.sqrt(6.0)
_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_SQRT3_3 = math.sqrt(3.0) / 3.0
_SQRT6_6 = math.sqrt(6.0) / 6.0
_SQRT2_2 = math.sqrt(2.0) / 2.0


@dataclass(frozen=True, eq=False)
class LabImage:
    """Pixels in l-alpha-beta space, shape ``(H, W, 3)``."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, copy=True, order="C")
        if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError(f"expected a non-empty (H, W, 3) array, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("lab components must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple:
        return self.data.shape[:2]


def rgb_to_lms(rgb: np.ndarray) -> np.ndarray:
    """Apply the cone-response matrix to ``(..., 3)`` RGB values (no clamp)."""
    rgb = np.asarray(rgb, dtype=np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    # explicit per-row sums so a pure red input reproduces the matrix column exactly
    out = np.empty(rgb.shape, dtype=np.float64)
    for row in range(3):
        m0, m1, m2 = RGB_TO_LMS[row]
        out[..., row] = m0 * r + m1 * g + m2 * b
    return out


def _log_lms_to_lab(log_lms: np.ndarray) -> np.ndarray:
    ll, lm, ls = log_lms[..., 0], log_lms[..., 1], log_lms[..., 2]
    out = np.empty(log_lms.shape, dtype=np.float64)
    # integer rotation first, then scale: equal components cancel exactly
    out[..., 0] = (ll + lm + ls) * _INV_SQRT3
    out[..., 1] = (ll + lm - 2.0 * ls) * _INV_SQRT6
    out[..., 2] = (ll - lm) * _INV_SQRT2
    return out


def lab_to_log_lms(lab: np.ndarray) -> np.ndarray:
    lab = np.asarray(lab, dtype=np.float64)
    a = lab[..., 0] * _SQRT3_3
    b = lab[..., 1] * _SQRT6_6
    c = lab[..., 2] * _SQRT2_2
    out = np.empty(lab.shape, dtype=np.float64)
    out[..., 0] = a + b + c
    out[..., 1] = a + b - c
    out[..., 2] = a - 2.0 * b
    return out


def rgb_array_to_lab(rgb: np.ndarray) -> np.ndarray:
    """Array form of :func:`rgb_to_lab` for ``(..., 3)`` inputs."""
    lms = np.maximum(rgb_to_lms(rgb), LMS_EPS)
    return _log_lms_to_lab(np.log10(lms))


def lab_array_to_rgb(lab: np.ndarray) -> np.ndarray:
    """Array form of :func:`lab_to_rgb`; output is clamped to [0, 1]."""
    lms = np.power(10.0, lab_to_log_lms(lab))
    rgb = lms @ LMS_TO_RGB.T
    return np.clip(rgb, 0.0, 1.0)


def rgb_to_lab(img: ImageRGB) -> LabImage:
    return LabImage(rgb_array_to_lab(img.data))


def lab_to_rgb(img: LabImage) -> ImageRGB:
    """Invert :func:`rgb_to_lab`.  Out-of-gamut results are clamped, not rejected."""
    return ImageRGB(lab_array_to_rgb(img.data))
