"""Command-line interface: embed, extract, attack, bench."""

import argparse
import dataclasses
import sys
import time

import numpy as np

from . import attacks as attacks_mod
from . import bench as bench_mod
from . import codec, config as config_mod, image_core, metrics
from .kernels import BACKEND


def _load_config(path):
    if path is None:
        return config_mod.ToolkitConfig().validate()
    return config_mod.load_config(path)


def _embed_params(cfg, args):
    params = cfg.embed
    psy = params.psychovisual
    if getattr(args, "alpha", None) is not None:
        psy = dataclasses.replace(psy, alpha=args.alpha)
    if getattr(args, "beta", None) is not None:
        psy = dataclasses.replace(psy, beta=args.beta)
    overrides = {"psychovisual": psy}
    if getattr(args, "adaptive", None) is not None:
        overrides["adaptive"] = args.adaptive
    if getattr(args, "fixed_sf", None) is not None:
        overrides["fixed_sf"] = args.fixed_sf
    if getattr(args, "magnitude_floor", None) is not None:
        overrides["magnitude_floor"] = args.magnitude_floor
    return dataclasses.replace(params, **overrides).validate()


def _read_payload(arg):
    if arg.startswith("@"):
        with open(arg[1:], "rb") as f:
            raw = f.read()
        if len(raw) == codec.PAYLOAD_BITS // 8:
            return codec.payload_from_bytes(raw)
        try:
            text = raw.decode("ascii")
        except UnicodeDecodeError:
            raise ValueError(
                f"{arg[1:]}: payload file must be 32 raw bytes or 64 hex characters") from None
        return codec.payload_from_hex(text)
    return codec.payload_from_hex(arg)


def cmd_embed(args):
    cfg = _load_config(args.config)
    params = _embed_params(cfg, args)
    _, cover = bench_mod.resolve_image(args.cover)
    payload = _read_payload(args.payload)
    marked = codec.embed(cover, payload, params)
    image_core.save_image(args.out, marked)
    print(f"psnr_db {metrics.psnr(cover, marked):.4f}")
    print(f"ssim {metrics.ssim(cover, marked):.6f}")
    return 0


def cmd_extract(args):
    cfg = _load_config(args.config)
    params = _embed_params(cfg, args)
    _, img = bench_mod.resolve_image(args.image)
    payload, votes = codec.extract_votes(img, params)
    conf = codec.vote_confidence(votes)
    print(codec.payload_to_hex(payload))
    print(f"mean_confidence {float(np.mean(conf)):.4f}")
    if args.out:
        with open(args.out, "wb") as f:
            f.write(codec.payload_to_bytes(payload))
    return 0


def cmd_attack(args):
    _, img = bench_mod.resolve_image(args.image)
    spec = attacks_mod.AttackSpec(
        kind=args.kind, kernel=args.kernel, density=args.density,
        variance=args.variance, quality=args.quality, seed=args.seed).validate()
    image_core.save_image(args.out, attacks_mod.apply_attack(img, spec))
    print(f"applied {spec.label()}")
    return 0


def _csv_floats(text):
    return tuple(float(v) for v in text.split(","))


def cmd_bench(args):
    cfg = _load_config(args.config)
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.images:
        overrides["images"] = tuple(args.images)
    if overrides:
        cfg = dataclasses.replace(
            cfg, bench=dataclasses.replace(cfg.bench, **overrides))
    cfg.validate()
    out_dir = args.out_dir or cfg.report_dir
    log = lambda msg: print(msg, file=sys.stderr)
    log(f"bench: backend={BACKEND} started={time.strftime('%Y-%m-%dT%H:%M:%S')}")
    if args.calibrate:
        kw = {"trials": args.cal_trials, "log": log}
        if args.cal_alphas:
            kw["alphas"] = _csv_floats(args.cal_alphas)
        if args.cal_betas:
            kw["betas"] = _csv_floats(args.cal_betas)
        if args.cal_sfs:
            kw["fixed_sfs"] = _csv_floats(args.cal_sfs)
        result = bench_mod.calibrate(cfg, **kw)
        path = bench_mod.write_calibration(result, out_dir)
        adaptive, fixed = result["adaptive"], result["fixed"]
        print(f"calibrated alpha={adaptive['alpha']} beta={adaptive['beta']} "
              f"(nc={adaptive['mean_nc']:.4f} psnr={adaptive['mean_psnr']:.2f} "
              f"constraint_met={adaptive['constraint_met']})")
        print(f"calibrated fixed_sf={fixed['fixed_sf']} "
              f"(nc={fixed['mean_nc']:.4f} psnr={fixed['mean_psnr']:.2f} "
              f"constraint_met={fixed['constraint_met']})")
        print(f"wrote {path}")
        return 0
    report = bench_mod.run_bench(cfg, log=log)
    csv_path, json_path = bench_mod.write_report(report, out_dir)
    for row in report["results"]:
        print(f"{row['image']}/{row['scheme']}: psnr={row['psnr']:.2f} "
              f"ssim={row['ssim']:.4f}")
        for cell in row["attacks"]:
            print(f"  {cell['attack']}: nc={cell['mean_nc']:.4f} "
                  f"ber={cell['mean_ber']:.4f}")
    print(f"wrote {csv_path} and {json_path}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="blindmark",
        description="Blind DWT+DCT image watermarking with adaptive strength.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_embed_flags(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--adaptive", dest="adaptive", action="store_true",
                       default=None, help="per-block adaptive strength (default)")
        p.add_argument("--no-adaptive", dest="adaptive", action="store_false",
                       help="use the fixed strength factor instead")
        p.add_argument("--fixed-sf", type=float, help="strength factor for --no-adaptive")
        p.add_argument("--alpha", type=float, help="edge weight in the strength factor")
        p.add_argument("--beta", type=float, help="brightness weight in the strength factor")
        p.add_argument("--magnitude-floor", type=float,
                       help="minimum post-embed coefficient magnitude")

    p = sub.add_parser("embed", help="write a 256-bit payload into an image")
    p.add_argument("--cover", required=True, help="cover image (pgm/png or builtin:NAME)")
    p.add_argument("--payload", required=True,
                   help="64 hex chars, or @FILE with 32 raw bytes or 64 hex chars")
    p.add_argument("--out", required=True, help="output image path")
    add_embed_flags(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover the payload from a marked image")
    p.add_argument("--image", required=True, help="marked image")
    p.add_argument("--out", help="also write the payload as 32 raw bytes")
    add_embed_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("attack", help="apply one attack to an image")
    p.add_argument("--image", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--kind", required=True, choices=attacks_mod.KINDS)
    p.add_argument("--kernel", type=int, default=3, help="median window size")
    p.add_argument("--density", type=float, default=0.01, help="salt and pepper density")
    p.add_argument("--variance", type=float, default=0.003,
                   help="gaussian noise variance on the [0,1] scale")
    p.add_argument("--quality", type=int, default=50, help="jpeg quality")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("bench", help="run the robustness benchmark")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out-dir", help="report directory (default from config)")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--images", nargs="+", help="paths or builtin:NAME")
    p.add_argument("--calibrate", action="store_true",
                   help="grid-search alpha/beta and fixed_sf instead of benching")
    p.add_argument("--cal-alphas", help="comma list of alpha values")
    p.add_argument("--cal-betas", help="comma list of beta values")
    p.add_argument("--cal-sfs", help="comma list of fixed_sf values")
    p.add_argument("--cal-trials", type=int, default=5)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
