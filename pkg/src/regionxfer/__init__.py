"""Regional style and color transfer.

Refines a foreground mask against image edges, recolors the foreground by
quantile matching in l-alpha-beta space, and composites it over a stylized
background with a distance-feathered alpha.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .boundary import (
    EdgeMap,
    NearestEdgeField,
    canny_edges,
    feather_mask,
    nearest_edge_field,
    refine_mask,
)
from .colorspace import LabImage, lab_to_rgb, rgb_to_lab, rgb_to_lms
from .colorxfer import (
    EmpiricalCdf,
    PrincipalAxis,
    build_cdf,
    match_indices,
    principal_axis,
    project,
    transfer_colors,
)
from .imgcore import (
    AlphaMask,
    BinaryMask,
    ImageIOError,
    ImageRGB,
    PipelineConfig,
    RegionXferError,
    ValidationError,
    load_alpha,
    load_image,
    load_mask,
    save_image,
    save_mask,
)
from .pipeline import PipelineError, PipelineInputs, alpha_blend, run_pipeline
from .stylemath import (
    FeatureMap,
    GramMatrix,
    LossWeights,
    content_loss,
    content_loss_grad,
    gram,
    load_fmap,
    save_fmap,
    style_loss,
    style_loss_grad,
    total_loss,
)
