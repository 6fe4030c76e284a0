"""Experiment drivers: rate map over a grid, random drops, latency sweep, IRS NMSE."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..beamforming import avg_latency, sweep_overhead
from ..channel import ArrayGeometry, irs_ue_channel, path_loss_db
from ..detector import simulate_detection
from ..geometry import SphericalTarget
from ..irs import nmse, reconstruct_irs_channel
from .config import ScenarioConfig
from .engine import DropEvaluator, resolve_profile

# independent seed streams per experiment
STREAM_RATE_MAP, STREAM_DROPS, STREAM_IRS = 1, 2, 3


def _seed(cfg: ScenarioConfig, stream: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(cfg.seed, spawn_key=(stream, *key))


def grid_axes(cfg: ScenarioConfig) -> tuple[np.ndarray, np.ndarray]:
    """Cell centers of the square area in front of the BS."""
    n, a = cfg.grid_points, cfg.area_m
    bx, by, _ = cfg.bs_position
    centers = (np.arange(n) + 0.5) * a / n
    return bx - a / 2 + centers, by + centers


@dataclass
class RateMap:
    xs: np.ndarray
    ys: np.ndarray
    rates: dict[str, np.ndarray]  # scheme -> (len(xs), len(ys))

    def rows(self):
        for scheme, grid in self.rates.items():
            for i, x in enumerate(self.xs):
                for j, y in enumerate(self.ys):
                    yield float(x), float(y), scheme, float(grid[i, j])

    def means(self) -> dict[str, float]:
        return {k: float(v.mean()) for k, v in self.rates.items()}


def run_rate_map(cfg: ScenarioConfig) -> RateMap:
    ev = DropEvaluator(cfg)
    xs, ys = grid_axes(cfg)
    rates = {s: np.zeros((len(xs), len(ys))) for s in cfg.schemes}
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            res = ev.evaluate((x, y, cfg.ue_height_m), _seed(cfg, STREAM_RATE_MAP, i, j))
            for s, r in res.rates.items():
                rates[s][i, j] = r
    return RateMap(xs, ys, rates)


@dataclass
class DropSet:
    positions: np.ndarray  # (drops, 2)
    rates: dict[str, np.ndarray]
    sweep_fraction: dict[str, float]

    def means(self) -> dict[str, float]:
        return {k: float(v.mean()) for k, v in self.rates.items()}


def random_positions(cfg: ScenarioConfig, n: int) -> np.ndarray:
    u = np.random.default_rng(_seed(cfg, STREAM_DROPS, 0)).random((n, 2))
    bx, by, _ = cfg.bs_position
    # 1 - u keeps y strictly in front of the BS
    return np.column_stack([bx + (u[:, 0] - 0.5) * cfg.area_m, by + (1.0 - u[:, 1]) * cfg.area_m])


def run_drops(cfg: ScenarioConfig, n: int | None = None) -> DropSet:
    n = cfg.drops if n is None else n
    ev = DropEvaluator(cfg)
    pos = random_positions(cfg, n)
    rates = {s: np.zeros(n) for s in cfg.schemes}
    swept = {s: 0 for s in cfg.schemes}
    for k, (x, y) in enumerate(pos):
        res = ev.evaluate((x, y, cfg.ue_height_m), _seed(cfg, STREAM_DROPS, 1, k))
        for s in cfg.schemes:
            rates[s][k] = res.rates[s]
            swept[s] += res.swept[s]
    return DropSet(pos, rates, {s: swept[s] / n if n else 0.0 for s in cfg.schemes})


@dataclass(frozen=True)
class LatencyRow:
    antennas: int
    scheme: str
    avg_rate: float
    latency_s: float


def run_latency_sweep(cfg: ScenarioConfig, antenna_counts=None) -> list[LatencyRow]:
    """Average latency per scheme and BS array size.

    Schemes pay the BS sweep overhead on the fraction of drops where they ran it
    (always for 5G-BM, on detector misses for the vision-aided schemes).
    """
    counts = tuple(cfg.antenna_counts if antenna_counts is None else antenna_counts)
    overhead = sweep_overhead(cfg.sweep_beams, cfg.beam_slot_s)
    rows = []
    for m in counts:
        drops = run_drops(cfg.with_tx_count(m))
        for s in cfg.schemes:
            r = float(drops.rates[s].mean())
            lat = avg_latency(r, cfg.link_budget, drops.sweep_fraction[s] * overhead)
            rows.append(LatencyRow(m, s, r, lat))
    return rows


@dataclass(frozen=True)
class NmseRow:
    elements: int
    scheme: str
    nmse: float


def irs_geometry(n: int) -> ArrayGeometry:
    """Most square factorization nx * ny = n with nx >= ny."""
    ny = max(d for d in range(1, math.isqrt(n) + 1) if n % d == 0)
    return ArrayGeometry(n // ny, ny)


def run_irs_nmse(cfg: ScenarioConfig, element_counts=None, error_scale: float = 1.0) -> list[NmseRow]:
    """Mean linear NMSE of the IRS-UE channel rebuilt from an estimated UE direction.

    Location-aided uses the detector's angle errors (conditioned on a hit);
    oracle-LS rebuilds from the true direction with the same gain estimate.
    """
    counts = tuple(cfg.irs_elements if element_counts is None else element_counts)
    base = resolve_profile(cfg, cfg.detector_profile)
    located = replace(base.scaled(error_scale), recall=1.0, f1=None)
    rows = []
    for n in counts:
        g = irs_geometry(n)
        rng = np.random.default_rng(_seed(cfg, STREAM_IRS, n))
        errs = {"location-aided": [], "oracle-ls": []}
        for _ in range(cfg.irs_trials):
            r = rng.uniform(1.0, cfg.area_m)
            truth = SphericalTarget(r, rng.uniform(0.0, math.pi / 3), rng.uniform(-math.pi, math.pi))
            beta = path_loss_db(r, cfg.path_loss) if cfg.path_loss.mode == "physical" else 0.0
            h = irs_ue_channel(g, truth.theta, truth.phi, beta)
            est = simulate_detection(truth, located, rng)
            errs["location-aided"].append(nmse(h, reconstruct_irs_channel(est, g, beta)))
            errs["oracle-ls"].append(nmse(h, reconstruct_irs_channel(truth, g, beta)))
        for scheme, v in errs.items():
            rows.append(NmseRow(n, scheme, float(np.mean(v))))
    return rows


__all__ = ["RateMap", "DropSet", "LatencyRow", "NmseRow", "grid_axes", "run_rate_map",
           "run_drops", "random_positions", "run_latency_sweep", "irs_geometry",
           "run_irs_nmse"]
