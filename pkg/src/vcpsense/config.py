"""Experiment configuration: structured JSON in, dataclasses out.

Unknown fields warn (forward compatibility); missing required fields
raise with the field named.  A config written by emit_config loads back
equal.
"""

import json
import warnings
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Union

from .channel import ScenarioSpec
from .detector import CfarParams
from .sensing_vcp import SegmentationParams
from .waveform import SystemParams


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    system: SystemParams
    segmentation: Union[SegmentationParams, str]   # or "follow-comm" for the baseline
    scenario: ScenarioSpec
    trials: int
    seed: int
    sigma_w2: Optional[float] = None
    gamma0_db: Optional[List[float]] = None
    cfar: Optional[CfarParams] = None
    preset: Optional[str] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.sigma_w2 is None and self.gamma0_db is None:
            raise ConfigError("one of sigma_w2 or gamma0_db is required")
        if self.gamma0_db is not None and not all(
                abs(g) < 1e6 for g in self.gamma0_db):
            raise ConfigError("gamma0_db sweep bounds must be finite")


_SECTION_FIELDS = {
    "system": ("M", "N", "Q", "fc", "B", "waveform", "constellation", "sigma_d2"),
    "segmentation": ("m_tilde", "q_tilde", "q_bar"),
    "scenario": ("kind", "rmax", "vmax", "entries"),
    "cfar": ("pf", "ng_k", "ng_l", "nr_k", "nr_l"),
}
_TOP_FIELDS = ("system", "segmentation", "scenario", "cfar", "trials", "seed",
               "sigma_w2", "gamma0_db", "preset")


def _build_section(name, cls, data, required):
    if not isinstance(data, dict):
        raise ConfigError(f"section {name!r} must be an object")
    known = _SECTION_FIELDS[name]
    for key in data:
        if key not in known:
            warnings.warn(f"unknown field {name}.{key} ignored", stacklevel=3)
    for key in required:
        if key not in data:
            raise ConfigError(f"missing required field {name}.{key}")
    return cls(**{k: v for k, v in data.items() if k in known})


def config_from_dict(raw: dict) -> ExperimentConfig:
    for key in raw:
        if key not in _TOP_FIELDS:
            warnings.warn(f"unknown field {key} ignored", stacklevel=2)
    for key in ("system", "trials", "seed"):
        if key not in raw:
            raise ConfigError(f"missing required field {key}")

    system = _build_section("system", SystemParams, raw["system"], ("M", "N", "Q"))
    seg_raw = raw.get("segmentation", "follow-comm")
    if seg_raw == "follow-comm":
        segmentation = "follow-comm"
    else:
        segmentation = _build_section("segmentation", SegmentationParams, seg_raw,
                                      ("m_tilde", "q_tilde"))
    scenario = _build_section("scenario", ScenarioSpec, raw.get("scenario", {"kind": "table2"}), ())
    cfar = None
    if raw.get("cfar") is not None:
        cfar = _build_section("cfar", CfarParams, raw["cfar"], ("pf",))
    return ExperimentConfig(
        system=system, segmentation=segmentation, scenario=scenario,
        trials=int(raw["trials"]), seed=int(raw["seed"]),
        sigma_w2=raw.get("sigma_w2"), gamma0_db=raw.get("gamma0_db"),
        cfar=cfar, preset=raw.get("preset"),
    )


def config_to_dict(cfg: ExperimentConfig) -> dict:
    out = {
        "system": asdict(cfg.system),
        "segmentation": ("follow-comm" if cfg.segmentation == "follow-comm"
                         else asdict(cfg.segmentation)),
        "scenario": asdict(cfg.scenario),
        "trials": cfg.trials,
        "seed": cfg.seed,
    }
    if cfg.sigma_w2 is not None:
        out["sigma_w2"] = cfg.sigma_w2
    if cfg.gamma0_db is not None:
        out["gamma0_db"] = list(cfg.gamma0_db)
    if cfg.cfar is not None:
        out["cfar"] = asdict(cfg.cfar)
    if cfg.preset is not None:
        out["preset"] = cfg.preset
    return out


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    return config_from_dict(raw)


def emit_config(cfg: ExperimentConfig, path) -> None:
    with open(path, "w") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2, sort_keys=True)
        fh.write("\n")
