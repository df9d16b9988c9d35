"""Foreground color transfer by 1-D quantile matching in lab space.

Both images are projected onto their own dominant color axis.  Each content
pixel then takes the RGB of the style pixel that sits at the same normalized
rank in the style's projected distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .colorspace import LabImage, rgb_array_to_lab
from .imgcore import BinaryMask, ImageRGB, ValidationError, check_same_shape

DEFAULT_AXIS = (1.0, 0.0, 0.0)
_DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class PrincipalAxis:
    """Unit 3-vector whose first significantly nonzero component is positive."""

    q: tuple

    def __post_init__(self):
        q = np.asarray(self.q, dtype=np.float64)
        if q.shape != (3,) or not np.all(np.isfinite(q)):
            raise ValidationError("axis must be a finite 3-vector")
        norm = float(np.linalg.norm(q))
        if norm == 0.0:
            raise ValidationError("axis must be nonzero")
        q = q / norm
        for comp in q:
            if abs(comp) > _DEGENERATE_TOL:
                if comp < 0:
                    q = -q
                break
        object.__setattr__(self, "q", tuple(float(c) for c in q))

    def as_array(self) -> np.ndarray:
        return np.array(self.q)


class EmpiricalCdf:
    """Sorted sample set with mid-rank CDF evaluation.

    ``cdf(v)`` is ``#(samples <= v) / n`` when ``v`` is not a sample.  When
    ``v`` equals one or more samples, the tied block occupies 1-based ranks
    ``lo+1 .. hi`` and the CDF is the mid-rank ``(lo + 1 + hi) / 2n``.
    """

    def __init__(self, values):
        samples = np.sort(np.asarray(values, dtype=np.float64).ravel(), kind="stable")
        if samples.size == 0:
            raise ValidationError("cannot build a CDF from zero samples")
        samples.setflags(write=False)
        self.samples = samples

    def __len__(self) -> int:
        return self.samples.size

    def mid_rank(self, v):
        """1-based mid-rank of ``v`` (vectorized); ``#(<= v)`` for non-samples."""
        v = np.asarray(v, dtype=np.float64)
        lo = np.searchsorted(self.samples, v, side="left")
        hi = np.searchsorted(self.samples, v, side="right")
        return np.where(hi > lo, (lo + 1 + hi) / 2.0, hi.astype(np.float64))

    def cdf(self, v):
        r = self.mid_rank(v) / self.samples.size
        return float(r) if np.ndim(r) == 0 else r

    def position(self, v):
        """Normalized rank in [0, 1]: 0 for the minimum, 1 for the maximum.

        A single-sample distribution sits at 0.5.
        """
        n = self.samples.size
        if n == 1:
            return np.full(np.shape(v), 0.5) if np.ndim(v) else 0.5
        pos = np.clip((self.mid_rank(v) - 1.0) / (n - 1), 0.0, 1.0)
        return float(pos) if np.ndim(pos) == 0 else pos


def build_cdf(values) -> EmpiricalCdf:
    return EmpiricalCdf(values)


def _lab_array(lab) -> np.ndarray:
    return lab.data if isinstance(lab, LabImage) else np.asarray(lab, dtype=np.float64)


def _selected(lab_arr: np.ndarray, selection: Optional[BinaryMask]) -> np.ndarray:
    """Selected pixel vectors in row-major order, shape ``(n, 3)``."""
    flat = lab_arr.reshape(-1, 3)
    if selection is None:
        return flat
    if tuple(selection.shape) != tuple(lab_arr.shape[:2]):
        raise ValidationError(
            f"selection shape {selection.shape} does not match image {lab_arr.shape[:2]}"
        )
    return flat[selection.as_bool().ravel()]


def principal_axis_of(vectors: np.ndarray, centered: bool = True) -> PrincipalAxis:
    """Dominant eigenvector of the 3x3 scatter matrix of ``vectors``."""
    x = np.asarray(vectors, dtype=np.float64).reshape(-1, 3)
    if x.shape[0] == 0:
        raise ValidationError("principal axis needs at least one selected pixel")
    if centered:
        x = x - x.mean(axis=0)
    if np.max(np.abs(x)) <= _DEGENERATE_TOL:
        return PrincipalAxis(DEFAULT_AXIS)
    cov = x.T @ x
    _, vecs = np.linalg.eigh(cov)
    return PrincipalAxis(tuple(vecs[:, -1]))


def principal_axis(
    lab: LabImage, selection: Optional[BinaryMask] = None, centered: bool = True
) -> PrincipalAxis:
    """Dominant color direction of the selected lab pixels.

    With ``centered=False`` the raw ``X^T X`` product is decomposed instead of
    the covariance, which mostly tracks the mean color.
    """
    return principal_axis_of(_selected(_lab_array(lab), selection), centered=centered)


def project(lab: LabImage, q: PrincipalAxis, selection: Optional[BinaryMask] = None) -> np.ndarray:
    return _selected(_lab_array(lab), selection) @ q.as_array()


def style_order(values: np.ndarray) -> np.ndarray:
    """Indices sorting ``values`` ascending, ties by lowest index."""
    return np.argsort(values, kind="stable")


def match_indices(
    content: ImageRGB,
    style: ImageRGB,
    selection: Optional[BinaryMask] = None,
    centered: bool = True,
) -> np.ndarray:
    """Row-major style pixel index matched to each selected content pixel.

    The content pixel's normalized rank ``u`` is mapped to the style order
    statistic at ``floor(u * (n_style - 1) + 0.5)``.
    """
    if selection is not None:
        check_same_shape(content, selection, what="content and selection")
    content_vecs = _selected(rgb_array_to_lab(content.data), selection)
    if content_vecs.shape[0] == 0:
        raise ValidationError("content selection is empty")
    style_vecs = rgb_array_to_lab(style.data).reshape(-1, 3)

    q_content = principal_axis_of(content_vecs, centered=centered).as_array()
    q_style = principal_axis_of(style_vecs, centered=centered).as_array()
    p_content = content_vecs @ q_content
    p_style = style_vecs @ q_style

    return match_projections(p_content, p_style)


def match_projections(p_content, p_style) -> np.ndarray:
    """Quantile-match 1-D content values onto style values.

    Returns, for each content value, the index of the style value at the same
    normalized rank (nearest order statistic, half-up rounding).
    """
    p_content = np.asarray(p_content, dtype=np.float64).ravel()
    p_style = np.asarray(p_style, dtype=np.float64).ravel()
    if p_content.size == 0 or p_style.size == 0:
        raise ValidationError("quantile matching needs non-empty inputs")
    u = np.atleast_1d(EmpiricalCdf(p_content).position(p_content))
    n_style = p_style.size
    ranks = np.floor(u * (n_style - 1) + 0.5).astype(np.int64)
    np.clip(ranks, 0, n_style - 1, out=ranks)
    return style_order(p_style)[ranks]


def transfer_colors(
    content: ImageRGB,
    style: ImageRGB,
    selection: Optional[BinaryMask] = None,
    centered: bool = True,
) -> ImageRGB:
    """Recolor the selected content pixels with quantile-matched style pixels.

    Statistics come from the selected content pixels and from every style
    pixel.  Pixels outside ``selection`` are returned unchanged.
    """
    idx = match_indices(content, style, selection, centered=centered)
    out = np.array(content.data)
    flat = out.reshape(-1, 3)
    style_flat = style.data.reshape(-1, 3)
    if selection is None:
        flat[:] = style_flat[idx]
    else:
        flat[selection.as_bool().ravel()] = style_flat[idx]
    return ImageRGB(out)
