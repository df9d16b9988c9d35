"""Style-transfer objective on externally supplied feature maps.

A feature map is an ``N x M`` matrix: ``N`` filters, each flattened to ``M``
positions.  Style is compared through Gram matrices ``G = F F^T``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .imgcore import ImageIOError, ValidationError

FMAP_MAGIC = b"FMAP"
FMAP_VERSION = 1
_HEADER = struct.Struct("<4sBII")

#: content : style weighting, normalized so the two sum to one
DEFAULT_ALPHA = 0.15
DEFAULT_BETA = 0.85


@dataclass(frozen=True, eq=False)
class FeatureMap:
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, copy=True, order="C")
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError(f"feature map must be a non-empty 2-D matrix, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("feature map entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def n_filters(self) -> int:
        return self.data.shape[0]

    @property
    def map_size(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True, eq=False)
class GramMatrix:
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, copy=True, order="C")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValidationError(f"Gram matrix must be square, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class LossWeights:
    """Per-layer style weights plus the content/style balance.

    An empty ``layer_weights`` means uniform ``1/L`` over however many layers
    are passed to :func:`style_loss`.
    """

    layer_weights: tuple = field(default_factory=tuple)
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA

    def __post_init__(self):
        object.__setattr__(self, "layer_weights", tuple(float(w) for w in self.layer_weights))
        if any(w < 0 for w in self.layer_weights):
            raise ValidationError("layer weights must be non-negative")
        if self.alpha < 0 or self.beta < 0 or not self.alpha + self.beta > 0:
            raise ValidationError("alpha and beta must be non-negative with a positive sum")

    def for_layers(self, n_layers: int) -> tuple:
        if not self.layer_weights:
            return (1.0 / n_layers,) * n_layers
        if len(self.layer_weights) != n_layers:
            raise ValidationError(
                f"{len(self.layer_weights)} layer weights given for {n_layers} layers"
            )
        return self.layer_weights


def _fmap(f) -> FeatureMap:
    return f if isinstance(f, FeatureMap) else FeatureMap(f)


def _gram(a) -> GramMatrix:
    return a if isinstance(a, GramMatrix) else GramMatrix(a)


def gram(f: FeatureMap) -> GramMatrix:
    f = _fmap(f)
    return GramMatrix(f.data @ f.data.T)


def _same_shape(f: FeatureMap, p: FeatureMap) -> None:
    if f.data.shape != p.data.shape:
        raise ValidationError(f"feature map shapes differ: {f.data.shape} vs {p.data.shape}")


def content_loss(f: FeatureMap, p: FeatureMap) -> float:
    f, p = _fmap(f), _fmap(p)
    _same_shape(f, p)
    return 0.5 * float(np.sum((f.data - p.data) ** 2))


def content_loss_grad(f: FeatureMap, p: FeatureMap) -> FeatureMap:
    f, p = _fmap(f), _fmap(p)
    _same_shape(f, p)
    return FeatureMap(f.data - p.data)


def layer_style_loss(f: FeatureMap, a: GramMatrix, w_l: float) -> float:
    """One layer's term: ``w_l / (4 N^2 M^2) * sum((G - A)^2)``."""
    f, a = _fmap(f), _gram(a)
    if a.n != f.n_filters:
        raise ValidationError(f"Gram matrix is {a.n}x{a.n} but layer has {f.n_filters} filters")
    n, m = f.n_filters, f.map_size
    diff = gram(f).data - a.data
    return w_l / (4.0 * n * n * m * m) * float(np.sum(diff**2))


def style_loss(
    generated: Sequence[FeatureMap], style_grams: Sequence[GramMatrix], w: LossWeights = LossWeights()
) -> float:
    if len(generated) != len(style_grams):
        raise ValidationError(
            f"{len(generated)} generated layers but {len(style_grams)} style Gram matrices"
        )
    if not generated:
        raise ValidationError("style loss needs at least one layer")
    weights = w.for_layers(len(generated))
    return sum(layer_style_loss(f, a, wl) for f, a, wl in zip(generated, style_grams, weights))


def style_loss_grad(f: FeatureMap, a: GramMatrix, w_l: float) -> FeatureMap:
    """Gradient of :func:`layer_style_loss` with respect to ``F``.

    Assumes ``a`` is symmetric, as every Gram matrix is.
    """
    f, a = _fmap(f), _gram(a)
    if a.n != f.n_filters:
        raise ValidationError(f"Gram matrix is {a.n}x{a.n} but layer has {f.n_filters} filters")
    n, m = f.n_filters, f.map_size
    diff = gram(f).data - a.data
    return FeatureMap(w_l / (n * n * m * m) * (diff @ f.data))


def total_loss(l_content: float, l_style: float, w: LossWeights = LossWeights()) -> float:
    return w.alpha * l_content + w.beta * l_style


def save_fmap(matrix, path) -> None:
    """Write a matrix in the FMAP container (little-endian float64, row-major)."""
    arr = np.asarray(matrix.data if hasattr(matrix, "data") else matrix, dtype="<f8")
    if arr.ndim != 2:
        raise ValidationError("FMAP payload must be a 2-D matrix")
    n, m = arr.shape
    try:
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(FMAP_MAGIC, FMAP_VERSION, n, m))
            fh.write(np.ascontiguousarray(arr).tobytes())
    except OSError as exc:
        raise ImageIOError(f"cannot write {path}: {exc}") from exc


def load_fmap(path) -> np.ndarray:
    """Read an FMAP file and return its ``(N, M)`` float64 matrix."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ImageIOError(f"cannot read {path}: {exc}") from exc
    if len(raw) < _HEADER.size:
        raise ImageIOError(f"{path}: truncated FMAP header")
    magic, version, n, m = _HEADER.unpack_from(raw)
    if magic != FMAP_MAGIC:
        raise ImageIOError(f"{path}: bad magic {magic!r}")
    if version != FMAP_VERSION:
        raise ImageIOError(f"{path}: unsupported FMAP version {version}")
    expected = _HEADER.size + 8 * n * m
    if len(raw) != expected:
        raise ImageIOError(f"{path}: expected {expected} bytes, found {len(raw)}")
    return np.frombuffer(raw, dtype="<f8", offset=_HEADER.size).reshape(n, m).astype(np.float64)
