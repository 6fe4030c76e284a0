"""Statistical stand-in for the vision object detector.

A detection succeeds with probability ``recall`` and reports the target
direction with independent zero-mean Gaussian errors on theta and phi whose
standard deviations reproduce the tabulated mean absolute errors
(sigma = m * sqrt(pi / 2)).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import yaml

from .geometry import SphericalTarget, canonical_target

F1_TOL = 0.005


@dataclass(frozen=True)
class DetectorProfile:
    name: str
    precision: float
    recall: float
    mean_abs_angle_err_az: float
    mean_abs_angle_err_el: float
    f1: float | None = None

    def __post_init__(self):
        if not (0 <= self.precision <= 1 and 0 <= self.recall <= 1):
            raise ValueError("precision and recall must lie in [0, 1]")
        if self.mean_abs_angle_err_az < 0 or self.mean_abs_angle_err_el < 0:
            raise ValueError("angle errors must be non-negative")
        if self.f1 is not None and abs(self.f1 - self.implied_f1) > F1_TOL:
            raise ValueError(f"{self.name}: f1 {self.f1} inconsistent with precision/recall")

    @property
    def implied_f1(self) -> float:
        p, r = self.precision, self.recall
        return 0.0 if p + r == 0 else 2 * p * r / (p + r)

    @property
    def sigma_az(self) -> float:
        return self.mean_abs_angle_err_az * math.sqrt(math.pi / 2)

    @property
    def sigma_el(self) -> float:
        return self.mean_abs_angle_err_el * math.sqrt(math.pi / 2)

    def scaled(self, factor: float) -> "DetectorProfile":
        """Same detection rates with angle errors multiplied by ``factor``."""
        return DetectorProfile(f"{self.name}*{factor:g}", self.precision, self.recall,
                               self.mean_abs_angle_err_az * factor,
                               self.mean_abs_angle_err_el * factor, self.f1)


def _row(name, p, r, f1, az, el):
    return DetectorProfile(name, p / 100, r / 100, az, el, f1 / 100)


_BUILTIN = (
    # VOMTC test set
    _row("vomtc-test", 94.46, 81.04, 87.24, 0.0804, 0.0804),
    _row("efficientdet-d8-test", 94.17, 76.78, 84.59, 0.0972, 0.0973),
    # VOMTC validation set
    _row("vomtc-val", 90.74, 70.70, 79.48, 0.1212, 0.1208),
    _row("efficientdet-d8-val", 90.10, 66.70, 76.66, 0.1371, 0.1365),
    # VOMTC-V2 transfer set
    _row("vomtc-v2", 94.93, 76.16, 84.52, 0.0977, 0.0987),
    _row("efficientdet-d8-v2", 94.03, 73.25, 82.35, 0.1094, 0.1102),
)

PERFECT = DetectorProfile("perfect", 1.0, 1.0, 0.0, 0.0)


def builtin_profiles() -> list[DetectorProfile]:
    return list(_BUILTIN)


def get_profile(name: str) -> DetectorProfile:
    for p in (*_BUILTIN, PERFECT):
        if p.name == name:
            return p
    raise KeyError(f"unknown detector profile {name!r}")


def load_profiles(path: str | Path) -> list[DetectorProfile]:
    """Read profiles from a YAML/JSON file: a mapping or a list of mappings with the field names."""
    data = yaml.safe_load(Path(path).read_text())
    entries = data if isinstance(data, list) else [data]
    out = []
    for entry in entries:
        unknown = set(entry) - set(DetectorProfile.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown profile keys: {sorted(unknown)}")
        out.append(DetectorProfile(**entry))
    return out


def dump_profiles(profiles: list[DetectorProfile]) -> str:
    return yaml.safe_dump([asdict(p) for p in profiles], sort_keys=False)


def simulate_detection(truth: SphericalTarget, profile: DetectorProfile,
                       rng: np.random.Generator) -> SphericalTarget | None:
    """One detector pass over a visible target; ``None`` means the target was missed.

    Three variates are consumed on every call, hit or miss, so streams
    shared between detectors stay aligned.
    """
    u = rng.random()
    z_az, z_el = rng.standard_normal(2)
    if u >= profile.recall:
        return None
    return canonical_target(truth.range_m,
                            truth.theta + profile.sigma_az * z_az,
                            truth.phi + profile.sigma_el * z_el)


def simulate_scene(truths: list[SphericalTarget], profile: DetectorProfile,
                   rng: np.random.Generator) -> list[SphericalTarget]:
    """Detections for a multi-target scene, including false positives.

    False alarms are Poisson with mean ``TP (1 - p) / p`` so the expected
    precision matches the profile; they land uniformly in the front hemisphere.
    """
    hits = [d for d in (simulate_detection(t, profile, rng) for t in truths) if d is not None]
    if profile.precision <= 0:
        return hits
    n_fp = rng.poisson(len(hits) * (1 - profile.precision) / profile.precision)
    for _ in range(n_fp):
        theta = math.acos(rng.random())  # uniform over the hemisphere's solid angle
        phi = rng.uniform(-math.pi, math.pi)
        r = float(np.median([t.range_m for t in truths])) if truths else 1.0
        hits.append(canonical_target(r, theta, phi))
    return hits
