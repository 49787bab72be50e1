"""Robustness benchmark: images x schemes x attacks, averaged over trials.

All randomness (payloads, attack seeds) derives from one master seed
through numpy SeedSequence spawn keys, so a rerun with the same config
produces byte-identical report files. Payloads are keyed by (image,
trial) only, making the adaptive vs fixed comparison paired.
"""

import dataclasses
import json
import os

import numpy as np

from . import attacks as attacks_mod
from . import fixtures, image_core, metrics
from .codec import embed, extract, random_payload
from .config import config_to_dict
from .kernels import BACKEND

_STOCHASTIC = ("salt_pepper", "gaussian_noise")


def resolve_image(ref):
    """Image reference -> (display name, array). builtin:NAME or a path."""
    if ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        return name, fixtures.make(name)
    name = os.path.splitext(os.path.basename(ref))[0]
    return name, image_core.load_image(ref)


def _payload_rng(master, img_idx, trial):
    return np.random.default_rng(np.random.SeedSequence(master, spawn_key=(img_idx, trial)))


def _attack_seed(master, img_idx, scheme_idx, attack_idx, trial):
    ss = np.random.SeedSequence(master, spawn_key=(img_idx, scheme_idx, attack_idx, trial))
    return int(ss.generate_state(1)[0])


def run_bench(cfg, log=None):
    """Run the full battery; returns the nested report dict."""
    cfg.validate()
    say = log or (lambda msg: None)
    master = cfg.bench.seed
    trials = cfg.bench.trials
    schemes = (
        ("adaptive", dataclasses.replace(cfg.embed, adaptive=True)),
        ("fixed", dataclasses.replace(cfg.embed, adaptive=False)),
    )
    results = []
    for img_idx, ref in enumerate(cfg.bench.images):
        name, img = resolve_image(ref)
        payloads = [random_payload(_payload_rng(master, img_idx, t))
                    for t in range(trials)]
        for scheme_idx, (scheme, params) in enumerate(schemes):
            say(f"bench: {name} / {scheme}")
            marked = [embed(img, p, params) for p in payloads]
            psnr = float(np.mean([metrics.psnr(img, m) for m in marked]))
            ssim = float(np.mean([metrics.ssim(img, m) for m in marked]))
            cells = []
            for attack_idx, spec in enumerate((None,) + tuple(cfg.attacks)):
                ncs, bers = [], []
                for t in range(trials):
                    target = marked[t]
                    if spec is not None:
                        run_spec = spec
                        if spec.kind in _STOCHASTIC:
                            run_spec = dataclasses.replace(
                                spec, seed=_attack_seed(master, img_idx, scheme_idx,
                                                        attack_idx, t))
                        target = attacks_mod.apply_attack(target, run_spec)
                    got = extract(target, params)
                    ncs.append(metrics.nc(payloads[t], got))
                    bers.append(metrics.ber(payloads[t], got))
                cells.append({
                    "attack": "none" if spec is None else spec.label(),
                    "trials": trials,
                    "mean_nc": float(np.mean(ncs)),
                    "mean_ber": float(np.mean(bers)),
                })
            results.append({
                "image": name,
                "scheme": scheme,
                "psnr": psnr,
                "ssim": ssim,
                "attacks": cells,
            })
    return {
        "metadata": {
            "seed": master,
            "trials": trials,
            "backend": BACKEND,
            "config": config_to_dict(cfg),
        },
        "results": results,
    }


def report_csv(report):
    lines = ["image,scheme,attack,trials,mean_nc,mean_ber,psnr,ssim"]
    for row in report["results"]:
        for cell in row["attacks"]:
            lines.append(
                f"{row['image']},{row['scheme']},\"{cell['attack']}\","
                f"{cell['trials']},{cell['mean_nc']:.6f},{cell['mean_ber']:.6f},"
                f"{row['psnr']:.4f},{row['ssim']:.6f}")
    return "\n".join(lines) + "\n"


def write_report(report, out_dir):
    """Write report.csv and report.json; returns their paths."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "report.csv")
    json_path = os.path.join(out_dir, "report.json")
    with open(csv_path, "w", encoding="utf-8") as f:
        f.write(report_csv(report))
    with open(json_path, "w", encoding="utf-8") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")
    return csv_path, json_path


def _grid(start, stop, step):
    return tuple(round(start + i * step, 6)
                 for i in range(int(round((stop - start) / step)) + 1))


DEFAULT_ALPHAS = _grid(0.1, 1.0, 0.1)
DEFAULT_BETAS = _grid(0.05, 0.5, 0.05)
DEFAULT_FIXED_SFS = _grid(0.01, 0.12, 0.01)
CAL_MIN_PSNR = 45.0


def _cal_run(cfg, params, images, payload_sets, spec, master, tag):
    """Mean PSNR and mean NC under one attack for one parameter set."""
    psnrs, ncs = [], []
    for img_idx, img in enumerate(images):
        for t, payload in enumerate(payload_sets[img_idx]):
            marked = embed(img, payload, params)
            psnrs.append(metrics.psnr(img, marked))
            seed = _attack_seed(master, 1 << 16 | img_idx, tag, 0, t)
            attacked = attacks_mod.apply_attack(
                marked, dataclasses.replace(spec, seed=seed))
            ncs.append(metrics.nc(payload, extract(attacked, params)))
    return float(np.mean(psnrs)), float(np.mean(ncs))


def calibrate(cfg, alphas=DEFAULT_ALPHAS, betas=DEFAULT_BETAS,
              fixed_sfs=DEFAULT_FIXED_SFS, trials=5, log=None):
    """Grid-search alpha/beta (adaptive) and fixed_sf (non-adaptive).

    Objective: max mean NC under a 3x3 median filter subject to mean
    PSNR >= 45 dB. When nothing satisfies the floor, the best NC point
    is returned with constraint_met false.
    """
    cfg.validate()
    say = log or (lambda msg: None)
    master = cfg.bench.seed
    spec = attacks_mod.AttackSpec(kind="median_filter", kernel=3)
    images = [resolve_image(ref)[1] for ref in cfg.bench.images]
    payload_sets = [[random_payload(_payload_rng(master, 1 << 20 | i, t))
                     for t in range(trials)] for i in range(len(images))]

    def pick(candidates):
        # candidates: list of (meets_floor, nc, psnr, settings)
        feasible = [c for c in candidates if c[0]]
        pool = feasible if feasible else candidates
        best = max(pool, key=lambda c: (c[1], c[2]))
        return best, bool(feasible)

    adaptive_cands = []
    for tag, (a, b) in enumerate((a, b) for a in alphas for b in betas):
        psy = dataclasses.replace(cfg.embed.psychovisual, alpha=a, beta=b)
        params = dataclasses.replace(cfg.embed, adaptive=True, psychovisual=psy)
        p, n = _cal_run(cfg, params, images, payload_sets, spec, master, tag)
        say(f"calibrate: alpha={a} beta={b} psnr={p:.2f} nc={n:.4f}")
        adaptive_cands.append((p >= CAL_MIN_PSNR, n, p, {"alpha": a, "beta": b}))
    (best_a, constraint_a) = pick(adaptive_cands)

    fixed_cands = []
    for tag, sf in enumerate(fixed_sfs):
        params = dataclasses.replace(cfg.embed, adaptive=False, fixed_sf=sf)
        p, n = _cal_run(cfg, params, images, payload_sets, spec, master,
                        1 << 12 | tag)
        say(f"calibrate: fixed_sf={sf} psnr={p:.2f} nc={n:.4f}")
        fixed_cands.append((p >= CAL_MIN_PSNR, n, p, {"fixed_sf": sf}))
    (best_f, constraint_f) = pick(fixed_cands)

    return {
        "adaptive": {**best_a[3], "mean_nc": best_a[1], "mean_psnr": best_a[2],
                     "constraint_met": constraint_a},
        "fixed": {**best_f[3], "mean_nc": best_f[1], "mean_psnr": best_f[2],
                  "constraint_met": constraint_f},
        "objective": f"max mean NC under {spec.label()} s.t. mean PSNR >= {CAL_MIN_PSNR}",
        "trials": trials,
        "seed": master,
    }


def write_calibration(result, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "calibration.json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump(result, f, indent=2, sort_keys=True)
        f.write("\n")
    return path
