"""Image and mask buffers, PNG I/O, and pipeline configuration.

Images are stored as read-only ``float64`` arrays of shape ``(H, W, 3)`` with
values in [0, 1]; masks as ``(H, W)`` arrays.  Origin is the top-left pixel and
data is row-major, matching the PNG layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

PathLike = Union[str, Path]

#: Rec.601 luma weights used for every RGB -> gray conversion in the package.
REC601 = np.array([0.299, 0.587, 0.114])


class RegionXferError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(RegionXferError, ValueError):
    """Invalid values or mismatched dimensions."""


class ImageIOError(RegionXferError, OSError):
    """A raster could not be read or written."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.float64, copy=True, order="C")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ImageRGB:
    """An RGB image with channel values in [0, 1]."""

    data: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.data)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValidationError(f"expected an (H, W, 3) array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError("image must have width and height >= 1")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
            raise ValidationError("channel values must lie in [0, 1]")
        object.__setattr__(self, "data", arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple:
        return (self.height, self.width)

    @classmethod
    def clipped(cls, data) -> "ImageRGB":
        """Build an image after clamping ``data`` into [0, 1]."""
        return cls(np.clip(np.asarray(data, dtype=np.float64), 0.0, 1.0))

    def to_bytes(self) -> np.ndarray:
        return quantize(self.data)


@dataclass(frozen=True, eq=False)
class AlphaMask:
    """A single-channel mask with values in [0, 1]."""

    data: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.data)
        if arr.ndim != 2:
            raise ValidationError(f"expected an (H, W) array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError("mask must have width and height >= 1")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
            raise ValidationError("mask values must lie in [0, 1]")
        object.__setattr__(self, "data", arr)
        self._check()

    def _check(self):
        pass

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple:
        return self.data.shape


class BinaryMask(AlphaMask):
    """An :class:`AlphaMask` whose values are exactly 0 or 1."""

    def _check(self):
        if not np.all((self.data == 0.0) | (self.data == 1.0)):
            raise ValidationError("binary mask values must be exactly 0 or 1")

    @classmethod
    def from_bool(cls, arr) -> "BinaryMask":
        return cls(np.asarray(arr, dtype=bool).astype(np.float64))

    def as_bool(self) -> np.ndarray:
        return self.data > 0.5


@dataclass(frozen=True)
class PipelineConfig:
    """Tunable parameters of the regional transfer pipeline.

    Canny thresholds are fractions of the maximum gradient magnitude.
    ``erosion_cap=None`` lets mask refinement erode without limit.
    """

    canny_sigma: float = 1.4
    canny_low: float = 0.1
    canny_high: float = 0.3
    feather_radius: float = 3.0
    mask_threshold: float = 0.5
    erosion_cap: Optional[float] = None
    centered_pca: bool = True

    def __post_init__(self):
        if not self.canny_sigma > 0:
            raise ValidationError("canny_sigma must be > 0")
        for name in ("canny_low", "canny_high", "mask_threshold"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {value}")
        if not self.canny_low < self.canny_high:
            raise ValidationError(
                f"canny_low ({self.canny_low}) must be below canny_high ({self.canny_high})"
            )
        if not self.feather_radius >= 0:
            raise ValidationError("feather_radius must be >= 0")
        if self.erosion_cap is not None and not self.erosion_cap >= 0:
            raise ValidationError("erosion_cap must be >= 0 or None")


def check_same_shape(*items, what: str = "inputs") -> None:
    shapes = {tuple(item.shape[:2]) for item in items}
    if len(shapes) > 1:
        raise ValidationError(f"{what} have mismatched dimensions: {sorted(shapes)}")


def quantize(values) -> np.ndarray:
    """Map unit-interval reals to bytes: clamp, then round half up."""
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    return np.floor(v * 255.0 + 0.5).astype(np.uint8)


def _open_png(path: PathLike) -> Image.Image:
    path = Path(path)
    if not path.is_file():
        raise ImageIOError(f"no such file: {path}")
    try:
        im = Image.open(path)
        im.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise ImageIOError(f"cannot read {path}: {exc}") from exc
    if im.format != "PNG":
        raise ImageIOError(f"{path}: expected a PNG file, got {im.format}")
    if im.width < 1 or im.height < 1:
        raise ValidationError(f"{path}: zero-dimension image")
    return im


def load_image(path: PathLike) -> ImageRGB:
    """Read an 8-bit RGB or RGBA PNG.  Alpha is discarded."""
    im = _open_png(path)
    if im.mode not in ("RGB", "RGBA"):
        raise ImageIOError(f"{path}: unsupported PNG mode {im.mode!r}, need 8-bit RGB/RGBA")
    rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
    return ImageRGB(rgb / 255.0)


def save_image(img: ImageRGB, path: PathLike) -> None:
    _write_png(Image.fromarray(img.to_bytes()), path)


def _gray_bytes(path: PathLike) -> np.ndarray:
    """Normalized intensity of a grayscale or RGB PNG."""
    im = _open_png(path)
    if im.mode == "1":
        im = im.convert("L")
    if im.mode == "L":
        return np.asarray(im, dtype=np.float64) / 255.0
    if im.mode in ("RGB", "RGBA"):
        rgb = np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0
        return rgb @ REC601
    raise ImageIOError(f"{path}: unsupported PNG mode {im.mode!r} for a mask")


def load_mask(path: PathLike, threshold: float = 0.5) -> BinaryMask:
    """Read a mask PNG; pixels with intensity >= ``threshold`` are foreground."""
    if not 0.0 <= threshold <= 1.0:
        raise ValidationError("threshold must lie in [0, 1]")
    return BinaryMask.from_bool(_gray_bytes(path) >= threshold)


def load_alpha(path: PathLike) -> AlphaMask:
    """Read a grayscale PNG as a soft alpha mask (byte / 255)."""
    return AlphaMask(np.clip(_gray_bytes(path), 0.0, 1.0))


def save_mask(mask: AlphaMask, path: PathLike) -> None:
    """Write a mask as an 8-bit grayscale PNG."""
    _write_png(Image.fromarray(quantize(mask.data)), path)


def _write_png(im: Image.Image, path: PathLike) -> None:
    try:
        im.save(Path(path), format="PNG")
    except OSError as exc:
        raise ImageIOError(f"cannot write {path}: {exc}") from exc
