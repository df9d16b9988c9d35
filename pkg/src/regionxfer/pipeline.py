"""Alpha blending and the end-to-end regional transfer pipeline."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .boundary import EdgeMap, canny_edges, feather_mask, refine_mask
from .colorxfer import transfer_colors
from .imgcore import (
    AlphaMask,
    BinaryMask,
    ImageRGB,
    PipelineConfig,
    RegionXferError,
    check_same_shape,
    save_image,
    save_mask,
)

log = logging.getLogger(__name__)


class PipelineError(RegionXferError):
    """A pipeline stage failed; the original error is chained as ``__cause__``."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage


def alpha_blend(color_img: ImageRGB, style_img: ImageRGB, alpha: AlphaMask) -> ImageRGB:
    """``alpha * color + (1 - alpha) * style`` per pixel and channel."""
    check_same_shape(color_img, style_img, alpha, what="blend inputs")
    a = alpha.data[..., None]
    c, s = color_img.data, style_img.data
    out = a * c + (1.0 - a) * s
    # rounding can step an ulp outside the convex interval
    out = np.clip(out, np.minimum(c, s), np.maximum(c, s))
    return ImageRGB(out)


@dataclass(frozen=True, eq=False)
class PipelineInputs:
    content: ImageRGB
    style: ImageRGB
    mask: BinaryMask
    stylized_background: Optional[ImageRGB] = None
    config: PipelineConfig = field(default_factory=PipelineConfig)

    def __post_init__(self):
        items = [self.content, self.mask]
        if self.stylized_background is not None:
            items.append(self.stylized_background)
        check_same_shape(*items, what="content, mask and stylized background")


@dataclass(frozen=True, eq=False)
class PipelineResult:
    edges: EdgeMap
    refined_mask: BinaryMask
    alpha: AlphaMask
    foreground: ImageRGB
    background: ImageRGB
    output: ImageRGB


def _stage(name, fn, *args, **kwargs):
    log.debug("stage %s", name)
    try:
        return fn(*args, **kwargs)
    except Exception as exc:
        raise PipelineError(name, exc) from exc


def run_pipeline_stages(inputs: PipelineInputs) -> PipelineResult:
    cfg = inputs.config
    edges = _stage("edges", canny_edges, inputs.content, cfg)
    refined = _stage("refine", refine_mask, inputs.mask, edges, cfg)
    alpha = _stage("feather", feather_mask, refined, cfg.feather_radius)
    if refined.as_bool().any():
        fg = _stage(
            "color-transfer",
            transfer_colors,
            inputs.content,
            inputs.style,
            refined,
            centered=cfg.centered_pca,
        )
    else:
        # nothing selected; alpha is zero everywhere so fg never shows
        fg = inputs.content
    bg = inputs.stylized_background if inputs.stylized_background is not None else inputs.content
    out = _stage("blend", alpha_blend, fg, bg, alpha)
    return PipelineResult(edges, refined, alpha, fg, bg, out)


def run_pipeline(inputs: PipelineInputs) -> ImageRGB:
    """Refine the mask, recolor the foreground, and composite over the background.

    Without a stylized background the original content is used, giving a
    color-only regional transfer.
    """
    return run_pipeline_stages(inputs).output


def dump_stages(result: PipelineResult, directory) -> None:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    save_mask(BinaryMask.from_bool(result.edges.data), out / "edges.png")
    save_mask(result.refined_mask, out / "refined_mask.png")
    save_mask(result.alpha, out / "alpha.png")
    save_image(result.foreground, out / "foreground.png")
    save_image(result.background, out / "background.png")
    save_image(result.output, out / "blend.png")
