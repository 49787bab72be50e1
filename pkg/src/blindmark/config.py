"""Toolkit configuration: dataclasses plus JSON round trip.

Unknown keys are rejected so config typos fail loudly instead of being
silently ignored.
"""

import dataclasses
import json
from dataclasses import dataclass, field

from .attacks import AttackSpec
from .codec import EmbedParams
from .psychovisual import PsychovisualParams

DEFAULT_ATTACKS = (
    AttackSpec(kind="median_filter", kernel=3),
    AttackSpec(kind="salt_pepper", density=0.01),
    AttackSpec(kind="hist_equalize"),
    AttackSpec(kind="gaussian_noise", variance=0.003),
    AttackSpec(kind="gaussian_noise", variance=0.005),
    AttackSpec(kind="jpeg", quality=30),
    AttackSpec(kind="jpeg", quality=50),
    AttackSpec(kind="jpeg", quality=70),
    AttackSpec(kind="jpeg", quality=90),
)

DEFAULT_IMAGES = ("builtin:texture", "builtin:rings")


@dataclass(frozen=True)
class BenchSettings:
    trials: int = 20
    seed: int = 1234
    images: tuple = DEFAULT_IMAGES

    def validate(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.images:
            raise ValueError("bench needs at least one image")
        return self


@dataclass(frozen=True)
class ToolkitConfig:
    embed: EmbedParams = field(default_factory=EmbedParams)
    attacks: tuple = DEFAULT_ATTACKS
    bench: BenchSettings = field(default_factory=BenchSettings)
    report_dir: str = "reports"

    def validate(self):
        self.embed.validate()
        for a in self.attacks:
            a.validate()
        self.bench.validate()
        return self


def _build(cls, data, path):
    if not isinstance(data, dict):
        raise ValueError(f"config section {path} must be an object, got {type(data).__name__}")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ValueError(f"unknown config keys in {path}: {sorted(unknown)}")
    kwargs = {}
    for key, value in data.items():
        if key == "psychovisual":
            value = _build(PsychovisualParams, value, f"{path}.{key}")
        elif key in ("pos_a", "pos_b", "images", "subband_order"):
            value = tuple(value)
        kwargs[key] = value
    return cls(**kwargs)


def config_from_dict(data):
    if not isinstance(data, dict):
        raise ValueError("config root must be an object")
    unknown = set(data) - {"embed", "attacks", "bench", "report_dir"}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    embed = _build(EmbedParams, data.get("embed", {}), "embed")
    attacks = tuple(_build(AttackSpec, a, f"attacks[{i}]")
                    for i, a in enumerate(data.get("attacks", [])))
    if not attacks:
        attacks = DEFAULT_ATTACKS
    bench = _build(BenchSettings, data.get("bench", {}), "bench")
    cfg = ToolkitConfig(embed=embed, attacks=attacks, bench=bench,
                        report_dir=data.get("report_dir", "reports"))
    return cfg.validate()


def config_to_dict(cfg):
    d = dataclasses.asdict(cfg)
    d["embed"]["pos_a"] = list(cfg.embed.pos_a)
    d["embed"]["pos_b"] = list(cfg.embed.pos_b)
    d["embed"]["subband_order"] = list(cfg.embed.subband_order)
    d["attacks"] = [dataclasses.asdict(a) for a in cfg.attacks]
    d["bench"]["images"] = list(cfg.bench.images)
    return d


def load_config(path):
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: invalid JSON ({e})") from None
    return config_from_dict(data)


def save_config(path, cfg):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(config_to_dict(cfg), f, indent=2, sort_keys=True)
        f.write("\n")
