"""Command-line entry point.

Exit codes: 0 success, 1 invalid arguments, 2 I/O failure, 3 dimension or
validation failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .boundary import canny_edges, feather_mask, refine_mask
from .colorxfer import transfer_colors
from .imgcore import (
    ImageIOError,
    PipelineConfig,
    ValidationError,
    check_same_shape,
    load_alpha,
    load_image,
    load_mask,
    save_image,
    save_mask,
)
from .pipeline import PipelineError, PipelineInputs, alpha_blend, dump_stages, run_pipeline_stages
from .stylemath import (
    FeatureMap,
    GramMatrix,
    LossWeights,
    content_loss,
    load_fmap,
    style_loss,
    total_loss,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INVALID = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _add_canny(p):
    defaults = PipelineConfig()
    p.add_argument("--canny-sigma", type=float, default=defaults.canny_sigma)
    p.add_argument("--canny-low", type=float, default=defaults.canny_low)
    p.add_argument("--canny-high", type=float, default=defaults.canny_high)
    p.add_argument("--erosion-cap", type=float, default=None,
                   help="limit erosion to this distance from the original boundary")
    p.add_argument("--mask-threshold", type=float, default=defaults.mask_threshold)


def _config(args) -> PipelineConfig:
    try:
        return _build_config(args)
    except ValidationError as exc:
        raise UsageError(str(exc)) from exc


def _build_config(args) -> PipelineConfig:
    return PipelineConfig(
        canny_sigma=args.canny_sigma,
        canny_low=args.canny_low,
        canny_high=args.canny_high,
        feather_radius=getattr(args, "feather", PipelineConfig.feather_radius),
        mask_threshold=args.mask_threshold,
        erosion_cap=args.erosion_cap,
        centered_pca=not getattr(args, "uncentered_pca", False),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="regionxfer", description="Regional style and color transfer.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="full pipeline")
    p.add_argument("--content", required=True)
    p.add_argument("--style", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--stylized-bg", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--feather", type=float, default=PipelineConfig.feather_radius)
    p.add_argument("--uncentered-pca", action="store_true",
                   help="decompose raw X^T X instead of the covariance")
    p.add_argument("--dump-stages", default=None, metavar="DIR")
    _add_canny(p)

    p = sub.add_parser("refine-mask", help="edge-guided mask refinement")
    p.add_argument("--image", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--out", required=True)
    _add_canny(p)

    p = sub.add_parser("feather", help="distance-feathered alpha from a binary mask")
    p.add_argument("--mask", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mask-threshold", type=float, default=0.5)

    p = sub.add_parser("color-transfer", help="quantile-matched color transfer")
    p.add_argument("--content", required=True)
    p.add_argument("--style", required=True)
    p.add_argument("--mask", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--mask-threshold", type=float, default=0.5)
    p.add_argument("--uncentered-pca", action="store_true")

    p = sub.add_parser("blend", help="alpha-blend foreground over background")
    p.add_argument("--fg", required=True)
    p.add_argument("--bg", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("losses", help="content, style and total loss from FMAP files")
    p.add_argument("--generated", nargs="+", required=True)
    p.add_argument("--original", required=True)
    p.add_argument("--style-grams", nargs="+", required=True)
    p.add_argument("--content-layer", type=int, default=0,
                   help="index of the generated map compared with --original")
    p.add_argument("--layer-weights", type=float, nargs="+", default=None)
    p.add_argument("--alpha", type=float, default=LossWeights.alpha)
    p.add_argument("--beta", type=float, default=LossWeights.beta)
    return parser


def _cmd_run(args):
    cfg = _config(args)
    inputs = PipelineInputs(
        content=load_image(args.content),
        style=load_image(args.style),
        mask=load_mask(args.mask, cfg.mask_threshold),
        stylized_background=load_image(args.stylized_bg) if args.stylized_bg else None,
        config=cfg,
    )
    result = run_pipeline_stages(inputs)
    save_image(result.output, args.out)
    if args.dump_stages:
        dump_stages(result, args.dump_stages)


def _cmd_refine(args):
    cfg = _config(args)
    image = load_image(args.image)
    mask = load_mask(args.mask, cfg.mask_threshold)
    check_same_shape(image, mask, what="image and mask")
    save_mask(refine_mask(mask, canny_edges(image, cfg), cfg), args.out)


def _cmd_feather(args):
    if args.radius < 0:
        raise UsageError("--radius must be >= 0")
    save_mask(feather_mask(load_mask(args.mask, args.mask_threshold), args.radius), args.out)


def _cmd_color(args):
    content = load_image(args.content)
    style = load_image(args.style)
    mask = load_mask(args.mask, args.mask_threshold) if args.mask else None
    out = transfer_colors(content, style, mask, centered=not args.uncentered_pca)
    save_image(out, args.out)


def _cmd_blend(args):
    out = alpha_blend(load_image(args.fg), load_image(args.bg), load_alpha(args.alpha))
    save_image(out, args.out)


def _cmd_losses(args):
    generated = [FeatureMap(load_fmap(p)) for p in args.generated]
    original = FeatureMap(load_fmap(args.original))
    grams = [GramMatrix(load_fmap(p)) for p in args.style_grams]
    if not 0 <= args.content_layer < len(generated):
        raise UsageError(f"--content-layer must be in [0, {len(generated) - 1}]")
    try:
        weights = LossWeights(tuple(args.layer_weights or ()), args.alpha, args.beta)
    except ValidationError as exc:
        raise UsageError(str(exc)) from exc
    lc = content_loss(generated[args.content_layer], original)
    ls = style_loss(generated, grams, weights)
    print(f"content {lc:.12g}")
    print(f"style {ls:.12g}")
    print(f"total {total_loss(lc, ls, weights):.12g}")


COMMANDS = {
    "run": _cmd_run,
    "refine-mask": _cmd_refine,
    "feather": _cmd_feather,
    "color-transfer": _cmd_color,
    "blend": _cmd_blend,
    "losses": _cmd_losses,
}


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, PipelineError) and exc.__cause__ is not None:
        return _exit_code(exc.__cause__)
    if isinstance(exc, (ImageIOError, OSError)):
        return EXIT_IO
    return EXIT_INVALID


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"regionxfer: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, ImageIOError, PipelineError, OSError) as exc:
        print(f"regionxfer: {exc}", file=sys.stderr)
        return _exit_code(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
