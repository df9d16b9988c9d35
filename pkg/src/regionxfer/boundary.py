"""Mask boundary optimization.

Canny edges are extracted from the content image.  The segmentation mask is
then peeled inward from its periphery: a mask pixel is removed when its
nearest edge pixel lies inside the mask, and peeling stops at edge pixels.
Finally the refined mask is feathered with an exact Euclidean distance ramp.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from . import _kernels
from .imgcore import (
    REC601,
    AlphaMask,
    BinaryMask,
    ImageRGB,
    PipelineConfig,
    ValidationError,
    check_same_shape,
)

# relative noise floor for gradient comparisons in non-maximum suppression
NMS_TOL = 1e-9
# gradient magnitudes below this are treated as a flat image
FLAT_GRADIENT = 1e-12


@dataclass(frozen=True, eq=False)
class EdgeMap:
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=bool, copy=True)
        if arr.ndim != 2:
            raise ValidationError(f"edge map must be 2-D, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def shape(self) -> tuple:
        return self.data.shape

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    def is_empty(self) -> bool:
        return not self.data.any()


@dataclass(frozen=True, eq=False)
class NearestEdgeField:
    """Row and column of each pixel's nearest edge pixel; -1 when there is none."""

    rows: np.ndarray
    cols: np.ndarray

    @property
    def shape(self) -> tuple:
        return self.rows.shape

    def is_empty(self) -> bool:
        return bool(np.all(self.rows < 0))

    def distance(self) -> np.ndarray:
        """Euclidean distance to the nearest edge (``inf`` when there is none)."""
        rr, cc = np.indices(self.rows.shape)
        d = np.hypot(rr - self.rows, cc - self.cols)
        d[self.rows < 0] = np.inf
        return d


def _gradient_bins(gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Quantize gradient direction to 0, 45, 90 or 135 degrees (bins 0..3)."""
    angle = np.degrees(np.arctan2(gy, gx)) % 180.0
    return (((angle + 22.5) // 45.0).astype(np.int64) % 4).astype(np.uint8)


def canny_edges(img: ImageRGB, cfg: Optional[PipelineConfig] = None) -> EdgeMap:
    """Canny edge detection on the Rec.601 gray image.

    Gaussian blur and Sobel filtering use replicated borders.  Thresholds in
    ``cfg`` are fractions of the largest gradient magnitude.
    """
    cfg = cfg or PipelineConfig()
    if not cfg.canny_low < cfg.canny_high:
        raise ValidationError("canny_low must be below canny_high")
    gray = img.data @ REC601
    blurred = ndimage.gaussian_filter(gray, cfg.canny_sigma, mode="nearest")
    gx = ndimage.sobel(blurred, axis=1, mode="nearest")
    gy = ndimage.sobel(blurred, axis=0, mode="nearest")
    mag = np.hypot(gx, gy)
    peak = float(mag.max())
    if peak <= FLAT_GRADIENT:
        return EdgeMap(np.zeros(gray.shape, dtype=bool))
    thin = _kernels.nms(mag, _gradient_bins(gx, gy), NMS_TOL * peak)
    edges = _kernels.hysteresis(thin, cfg.canny_low * peak, cfg.canny_high * peak)
    return EdgeMap(edges.astype(bool))


def nearest_edge_field(edges: EdgeMap) -> NearestEdgeField:
    rows, cols = _kernels.nearest_sites(edges.data)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return NearestEdgeField(rows, cols)


def distance_to_outside(inside: np.ndarray, border_is_outside: bool = False) -> np.ndarray:
    """Exact Euclidean distance from each pixel to the nearest pixel not in ``inside``.

    Pixels outside have distance 0.  With ``border_is_outside`` the image is
    treated as surrounded by outside pixels.  Returns ``inf`` where no
    outside pixel exists.
    """
    inside = np.asarray(inside, dtype=bool)
    if border_is_outside:
        padded = np.pad(inside, 1, constant_values=False)
        return distance_to_outside(padded)[1:-1, 1:-1]
    rows, cols = _kernels.nearest_sites(~inside)
    rr, cc = np.indices(inside.shape)
    d = np.hypot(rr - rows, cc - cols)
    d[rows < 0] = np.inf
    return d


def refine_mask(
    mask: BinaryMask, edges: EdgeMap, cfg: Optional[PipelineConfig] = None
) -> BinaryMask:
    """Erode ``mask`` toward the image edges by breadth-first peeling.

    A mask pixel is removable when its nearest edge pixel lies in the
    original mask (and, with ``cfg.erosion_cap``, when it is within that
    distance of the original boundary).  Peeling starts from every pixel on
    the mask periphery and only advances through removed non-edge pixels, so
    an edge pixel is the last pixel removed along any path.  The result is
    always a subset of ``mask``.
    """
    cfg = cfg or PipelineConfig()
    check_same_shape(mask, edges, what="mask and edge map")
    if edges.is_empty():
        return mask
    inside = mask.as_bool()
    field = nearest_edge_field(edges)
    removable = inside[field.rows, field.cols] & inside
    if cfg.erosion_cap is not None:
        depth = distance_to_outside(inside, border_is_outside=True)
        removable &= depth <= cfg.erosion_cap
    out = _kernels.bfs_refine(inside, removable, edges.data)
    return BinaryMask.from_bool(out)


def feather_mask(mask: BinaryMask, radius: float) -> AlphaMask:
    """Soft alpha ramp ``min(1, d / radius)`` inside the mask, 0 outside.

    ``d`` is the Euclidean distance to the nearest non-mask pixel; the image
    border does not count as outside.
    """
    if radius < 0:
        raise ValidationError("feather radius must be >= 0")
    if radius == 0:
        return AlphaMask(mask.data)
    inside = mask.as_bool()
    d = distance_to_outside(inside)
    alpha = np.where(inside, np.minimum(1.0, d / radius), 0.0)
    return AlphaMask(alpha)
