"""Command-line pipeline driver.

Subcommands::

    synth       render a synthetic scene to grids + truth picks
    postproc    probability/mask grid -> candidate picks CSV
    validate    picks CSV -> retained + rejected CSVs
    peakdetect  amplitude + radius grids -> picks CSV
    evaluate    auto picks vs manual picks [-> + grids] -> report JSON
    bench       scene benchmark across methods -> JSON
    augment     manifest of training samples -> augmented manifest
    stress      breakout width -> S_Hmax (optionally a sensitivity sweep)

Exit codes: 0 ok, 2 input/parse error, 3 parameter error, 4 internal error.
Outputs are written atomically and never overwrite existing files unless
``--force`` is given.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from dataclasses import dataclass
from pathlib import Path

from . import evaluation, synthgen
from .augment import AugmentConfig, augment_set, load_samples, save_samples
from .core import (
    BreakoutKitError,
    GeometryError,
    ImageLogGrid,
    MaskGrid,
    ParameterError,
    ParseError,
    PickSet,
    ProbGrid,
)
from .gridio import grid_to_bytes, read_grid, read_picks, write_atomic, write_picks
from .peakdetect import PeakDetectParams, peak_detect
from .postproc import MIN_WIDTH_DEG, binarize, picks_from_mask
from .stress import StressParams, sensitivity_sweep, shmax, sweep_csv
from .validation import validate

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PARAMETER = 3
EXIT_INTERNAL = 4


@dataclass
class RunConfig:
    """Common run context shared by all subcommands."""

    out_dir: Path
    seed: int | None
    force: bool
    quiet: bool

    def output_path(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        if path.exists() and not self.force:
            raise ParameterError(f"{path} exists; pass --force to overwrite")
        return path

    def say(self, message: str) -> None:
        if not self.quiet:
            print(message)


def _write_text(cfg: RunConfig, name: str, text: str) -> Path:
    path = cfg.output_path(name)
    write_atomic(text.encode("utf-8"), path)
    cfg.say(f"wrote {path}")
    return path


def _write_picks(cfg: RunConfig, name: str, picks: PickSet) -> Path:
    path = cfg.output_path(name)
    tmp = path.with_name(path.name + ".tmp")
    write_picks(picks, tmp)
    tmp.replace(path)
    cfg.say(f"wrote {path} ({len(picks)} picks)")
    return path


def _write_grid(cfg: RunConfig, name: str, grid) -> Path:
    path = cfg.output_path(name)
    write_atomic(grid_to_bytes(grid), path)
    cfg.say(f"wrote {path}")
    return path


def _require_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise ParseError(f"input file not found: {p}")
    return p


def cmd_synth(args, cfg: RunConfig) -> int:
    spec = synthgen.load_scene(args.scene)
    if cfg.seed is not None:
        spec = synthgen.SceneSpec(
            spec.geometry, spec.background, spec.features,
            spec.speckle_level, cfg.seed, spec.keyseat_in_truth,
        )
    amp, rad, mask, picks = synthgen.render(spec)
    _write_grid(cfg, "amplitude.igrid", amp)
    _write_grid(cfg, "radius.igrid", rad)
    _write_grid(cfg, "truth_mask.igrid", mask)
    _write_picks(cfg, "truth_picks.csv", picks)
    _write_text(cfg, "scene.cfg", synthgen.format_scene_config(spec))
    return EXIT_OK


def cmd_postproc(args, cfg: RunConfig) -> int:
    if not 0.0 < args.tau < 1.0:
        raise ParameterError(f"threshold must lie in (0, 1), got {args.tau}")
    grid = read_grid(_require_file(args.input))
    if isinstance(grid, ProbGrid):
        mask = binarize(grid, args.tau)
    elif isinstance(grid, MaskGrid):
        mask = grid
    else:
        raise ParameterError(
            "postproc input must be a mask or probability grid, "
            f"got {grid.channel} channel"
        )
    picks = picks_from_mask(mask, source=args.source, min_width_deg=args.min_width_deg)
    _write_picks(cfg, args.output, picks)
    return EXIT_OK


def cmd_validate(args, cfg: RunConfig) -> int:
    picks = read_picks(_require_file(args.picks))
    outcome = validate(picks, args.depth_step)
    _write_picks(cfg, "retained.csv", outcome.retained)
    _write_picks(cfg, "rejected.csv", outcome.rejected)
    return EXIT_OK


def _peak_params(args) -> PeakDetectParams:
    return PeakDetectParams(
        smooth_window_deg=args.smooth_window_deg,
        k_amp=args.k_amp,
        k_rad=args.k_rad,
        apply_symmetry_validation=args.validate,
        min_width_deg=args.min_width_deg,
    )


def cmd_peakdetect(args, cfg: RunConfig) -> int:
    amp = read_grid(_require_file(args.amplitude))
    rad = read_grid(_require_file(args.radius))
    if not isinstance(amp, ImageLogGrid) or amp.channel != "amplitude":
        raise ParameterError(f"{args.amplitude} is not an amplitude grid")
    if not isinstance(rad, ImageLogGrid) or rad.channel != "radius":
        raise ParameterError(f"{args.radius} is not a radius grid")
    picks = peak_detect(amp, rad, _peak_params(args))
    _write_picks(cfg, args.output, picks)
    return EXIT_OK


def cmd_evaluate(args, cfg: RunConfig) -> int:
    auto = read_picks(_require_file(args.auto))
    manual = read_picks(_require_file(args.manual))
    if args.resample_step > 0:
        auto = evaluation.resample_picks(auto, args.resample_step)
        manual = evaluation.resample_picks(manual, args.resample_step)
    pred = label = None
    if args.pred or args.label:
        if not (args.pred and args.label):
            raise ParameterError("--pred and --label must be given together")
        pred = read_grid(_require_file(args.pred))
        label = read_grid(_require_file(args.label))
        if not isinstance(pred, MaskGrid) or not isinstance(label, MaskGrid):
            raise ParameterError("--pred and --label must be mask grids")
    grid_step = args.resample_step if args.resample_step > 0 else args.native_step
    report = evaluation.evaluate_picks(
        auto, manual, az_tol_deg=args.az_tol_deg, grid_step=grid_step,
        pred=pred, label=label,
    )
    _write_text(cfg, "report.json", report.to_json() + "\n")
    _write_text(cfg, "rose_auto.csv", evaluation.rose_csv(auto.azimuths()))
    return EXIT_OK


def cmd_bench(args, cfg: RunConfig) -> int:
    rows = []
    params_off = PeakDetectParams(
        smooth_window_deg=args.smooth_window_deg, k_amp=args.k_amp, k_rad=args.k_rad,
        apply_symmetry_validation=False,
    )
    for scene_name in args.scenes:
        spec = synthgen.load_scene(scene_name)
        amp, rad, _mask, truth = synthgen.render(spec)
        step = spec.geometry.depth_step
        truth_rs = evaluation.resample_picks(truth, args.resample_step)
        methods = {"peak_detect": peak_detect(amp, rad, params_off)}
        if args.external_picks:
            methods["external"] = read_picks(_require_file(args.external_picks))
        for method, picks in methods.items():
            for validated in (False, True):
                result = validate(picks, step).retained if validated else picks
                result_rs = evaluation.resample_picks(result, args.resample_step)
                report = evaluation.evaluate_picks(
                    result_rs, truth_rs,
                    az_tol_deg=args.az_tol_deg, grid_step=args.resample_step,
                )
                rows.append(
                    {
                        "scene": scene_name,
                        "method": method,
                        "validated": validated,
                        **report.to_dict(),
                    }
                )
    payload = json.dumps({"schema": 1, "rows": rows}, indent=2, sort_keys=True)
    _write_text(cfg, "bench.json", payload + "\n")
    return EXIT_OK


def cmd_augment(args, cfg: RunConfig) -> int:
    if cfg.seed is None:
        raise ParameterError("augment requires an explicit --seed")
    samples = load_samples(_require_file(args.manifest))
    augmented = augment_set(samples, AugmentConfig(), cfg.seed)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    manifest = save_samples(augmented, cfg.out_dir, prefix="aug")
    cfg.say(f"wrote {manifest} ({len(samples)} -> {len(augmented)} samples)")
    return EXIT_OK


def cmd_stress(args, cfg: RunConfig) -> int:
    prm = StressParams(shmin=args.shmin, pf=args.pf, cef=args.cef)
    if args.sweep:
        try:
            lo, hi, step = (float(x) for x in args.sweep.split(":"))
        except ValueError as exc:
            raise ParameterError(f"--sweep must be lo:hi:step, got {args.sweep!r}") from exc
        rows = sensitivity_sweep((lo, hi), args.dwidth, prm, step)
        text = sweep_csv(rows)
    else:
        text = "width_deg,shmax_mpa\n" + f"{args.width_deg:.6f},{shmax(args.width_deg, prm):.6f}\n"
    if args.out_dir is not None:
        _write_text(cfg, "stress.csv", text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="breakoutkit",
        description="Borehole breakout picking, validation, and evaluation",
    )
    parser.add_argument("--out-dir", default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="seed for randomized commands")
    parser.add_argument("--force", action="store_true", help="overwrite existing outputs")
    parser.add_argument("--quiet", action="store_true", help="suppress progress messages")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="render a synthetic scene")
    p.add_argument("--scene", required=True, help="suite scene name or config path")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("postproc", help="extract picks from a segmentation grid")
    p.add_argument("--input", required=True, help="mask or probability IGRID file")
    p.add_argument("--tau", type=float, default=0.5, help="binarization threshold")
    p.add_argument("--min-width-deg", type=float, default=MIN_WIDTH_DEG)
    p.add_argument("--source", default="segnet", help="pick source tag")
    p.add_argument("--output", default="picks.csv")
    p.set_defaults(func=cmd_postproc)

    p = sub.add_parser("validate", help="apply the azimuthal symmetry filter")
    p.add_argument("--picks", required=True)
    p.add_argument("--depth-step", type=float, required=True,
                   help="depth grid step of the pick set (m)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("peakdetect", help="signal-based baseline picker")
    p.add_argument("--amplitude", required=True)
    p.add_argument("--radius", required=True)
    p.add_argument("--smooth-window-deg", type=float, default=15.0)
    p.add_argument("--k-amp", type=float, default=1.0)
    p.add_argument("--k-rad", type=float, default=1.0)
    p.add_argument("--min-width-deg", type=float, default=MIN_WIDTH_DEG)
    p.add_argument("--validate", action="store_true",
                   help="apply symmetry validation to the detections")
    p.add_argument("--output", default="picks.csv")
    p.set_defaults(func=cmd_peakdetect)

    p = sub.add_parser("evaluate", help="compare automatic picks against manual picks")
    p.add_argument("--auto", required=True)
    p.add_argument("--manual", required=True)
    p.add_argument("--pred", default=None, help="predicted mask IGRID (for IoU)")
    p.add_argument("--label", default=None, help="label mask IGRID (for IoU)")
    p.add_argument("--az-tol-deg", type=float, default=evaluation.DEFAULT_AZ_TOL_DEG)
    p.add_argument("--resample-step", type=float, default=evaluation.EVAL_DEPTH_STEP,
                   help="evaluation depth grid step (m); 0 disables resampling")
    p.add_argument("--native-step", type=float, default=evaluation.EVAL_DEPTH_STEP,
                   help="native depth step; used only when resampling is disabled")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", help="benchmark methods on synthetic scenes")
    p.add_argument("--scenes", nargs="+", default=["mixed"],
                   help="suite scene names or config paths")
    p.add_argument("--external-picks", default=None,
                   help="optional externally produced picks CSV to score too")
    p.add_argument("--smooth-window-deg", type=float, default=15.0)
    p.add_argument("--k-amp", type=float, default=1.0)
    p.add_argument("--k-rad", type=float, default=1.0)
    p.add_argument("--az-tol-deg", type=float, default=evaluation.DEFAULT_AZ_TOL_DEG)
    p.add_argument("--resample-step", type=float, default=evaluation.EVAL_DEPTH_STEP)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("augment", help="augment a training-sample manifest")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("stress", help="stress magnitude from breakout width")
    p.add_argument("--width-deg", type=float, default=None)
    p.add_argument("--shmin", type=float, required=True)
    p.add_argument("--pf", type=float, required=True)
    p.add_argument("--cef", type=float, required=True)
    p.add_argument("--sweep", default=None, help="baseline width sweep lo:hi:step")
    p.add_argument("--dwidth", type=float, default=0.0,
                   help="width perturbation for the sweep (deg)")
    p.set_defaults(func=cmd_stress)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "stress" and args.width_deg is None and args.sweep is None:
        parser.error("stress requires --width-deg or --sweep")
    cfg = RunConfig(
        out_dir=Path(args.out_dir) if args.out_dir is not None else Path.cwd(),
        seed=args.seed,
        force=args.force,
        quiet=args.quiet,
    )
    try:
        return args.func(args, cfg)
    except (ParseError, GeometryError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except BreakoutKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
