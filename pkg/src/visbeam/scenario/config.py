"""Scenario configuration: defaults, validation and YAML/JSON loading."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import yaml

from ..beamforming import DEFAULT_BEAM_SLOT_S, LinkBudget
from ..channel import PATH_LOSS_MODES, ArrayGeometry, PathLossParams

SCHEMES = ("vbm", "cvbm", "codebook-od", "codebook-ic", "5g-bm")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    area_m: float = 20.0
    bs_position: tuple[float, float, float] = (0.0, 0.0, 3.0)
    ue_height_m: float = 1.65
    tx_array: tuple[int, int] = (8, 8)
    rx_array: tuple[int, int] = (2, 2)
    link_budget: LinkBudget = field(default_factory=LinkBudget)
    path_loss: PathLossParams = field(default_factory=lambda: PathLossParams(100.0, "normalized"))
    array_gain: bool = False
    fading: bool = True
    detector_profile: str = "vomtc-test"
    baseline_profile: str = "efficientdet-d8-test"
    profiles_file: str | None = None
    schemes: tuple[str, ...] = SCHEMES
    grid_points: int = 21
    drops: int = 1000
    seed: int = 0
    oversampling: int | None = 4
    phase_bits: int | None = 8
    sweep_beams: int = 36
    beam_slot_s: float = DEFAULT_BEAM_SLOT_S
    rsrp_noise: bool = True
    aoa_estimation: str = "music"
    music_snapshots: int = 200
    music_grid: tuple[int, int] = (181, 181)
    antenna_counts: tuple[int, ...] = (36, 64, 121, 196)
    irs_elements: tuple[int, ...] = (16, 32, 64, 112, 128)
    irs_trials: int = 200

    def __post_init__(self):
        if self.area_m <= 0 or self.ue_height_m < 0:
            raise ConfigError("area and UE height must be positive")
        if len(self.bs_position) != 3:
            raise ConfigError("bs_position is (x, y, height)")
        if self.grid_points < 2:
            raise ConfigError("grid_points must be >= 2")
        if self.drops < 0 or self.irs_trials < 1 or self.music_snapshots < 1:
            raise ConfigError("drops/irs_trials/music_snapshots out of range")
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown or not self.schemes:
            raise ConfigError(f"unknown schemes {sorted(unknown)}")
        if self.aoa_estimation not in ("music", "oracle"):
            raise ConfigError("aoa_estimation must be 'music' or 'oracle'")
        if self.oversampling is not None and self.oversampling < 1:
            raise ConfigError("oversampling must be >= 1 or null (continuous)")
        for m in self.antenna_counts:
            if math.isqrt(m) ** 2 != m:
                raise ConfigError(f"antenna count {m} is not a perfect square")
        if len(self.music_grid) != 2 or min(self.music_grid) < 2:
            raise ConfigError("music_grid needs >= 2 points per axis")

    @property
    def tx(self) -> ArrayGeometry:
        return ArrayGeometry(*self.tx_array)

    @property
    def rx(self) -> ArrayGeometry:
        return ArrayGeometry(*self.rx_array)

    def with_tx_count(self, m: int) -> "ScenarioConfig":
        g = ArrayGeometry.square(m)
        return replace(self, tx_array=(g.nx, g.ny))

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d


_TUPLE_FIELDS = {"bs_position", "tx_array", "rx_array", "schemes", "music_grid",
                 "antenna_counts", "irs_elements"}


def _nested(cls, value, name):
    if isinstance(value, cls):
        return value
    if not isinstance(value, dict):
        raise ConfigError(f"{name} must be a mapping")
    allowed = {f.name for f in fields(cls)}
    unknown = set(value) - allowed
    if unknown:
        raise ConfigError(f"unknown {name} keys: {sorted(unknown)}")
    try:
        return cls(**value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: {exc}") from None


def config_from_mapping(data: dict[str, Any] | None) -> ScenarioConfig:
    data = dict(data or {})
    allowed = {f.name for f in fields(ScenarioConfig)}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "link_budget" in data:
        data["link_budget"] = _nested(LinkBudget, data["link_budget"], "link_budget")
    if "path_loss" in data:
        pl = data["path_loss"]
        if isinstance(pl, dict) and pl.get("mode", "physical") not in PATH_LOSS_MODES:
            raise ConfigError(f"path_loss.mode must be one of {PATH_LOSS_MODES}")
        data["path_loss"] = _nested(PathLossParams, pl, "path_loss")
    for k in _TUPLE_FIELDS & set(data):
        data[k] = tuple(data[k])
    try:
        return ScenarioConfig(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path | None, **overrides) -> ScenarioConfig:
    data = {}
    if path is not None:
        data = yaml.safe_load(Path(path).read_text()) or {}
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a mapping")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_mapping(data)
