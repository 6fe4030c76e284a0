"""One UE drop: geometry, channel draw and every scheme's beam choice and rate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..beamforming import (Beamformer, Codebook, achievable_rate, best_combiner,
                           dft_codebook, measured_rsrp_sweep, rsrp_sweep, sweep_codebook)
from ..channel import ChannelRealization, draw_small_scale, los_channel, upa_steering
from ..detector import DetectorProfile, get_profile, load_profiles, simulate_detection
from ..geometry import CartesianPoint, SphericalTarget, cart_to_spherical
from ..music import MusicEstimator, MusicGrid, sample_covariance, simulate_snapshots
from .config import ScenarioConfig

MIN_PILOT_SNR_DB = -200.0  # keeps the snapshot noise scale finite


def bs_view(bs: tuple[float, float, float], ue: tuple[float, float, float]) -> SphericalTarget:
    """UE direction seen by a wall-mounted BS whose boresight is horizontal along +y.

    Array/camera frame: x to the right, y down, z along boresight.
    """
    dx, dy, dz = (ue[i] - bs[i] for i in range(3))
    if dy <= 0:
        raise ValueError("UE must lie in front of the BS")
    return cart_to_spherical(CartesianPoint(dx, -dz, dy))


def ue_view(bs: tuple[float, float, float], ue: tuple[float, float, float]) -> SphericalTarget:
    """BS direction seen by a UE array facing the BS (boresight along -y)."""
    dx, dy, dz = (ue[i] - bs[i] for i in range(3))
    return cart_to_spherical(CartesianPoint(dx, dz, dy))


def resolve_profile(cfg: ScenarioConfig, name: str) -> DetectorProfile:
    """Profiles from ``cfg.profiles_file`` shadow the built-in table."""
    if cfg.profiles_file:
        for p in load_profiles(cfg.profiles_file):
            if p.name == name:
                return p
    return get_profile(name)


@dataclass
class DropResult:
    rates: dict[str, float]
    swept: dict[str, bool]  # whether the BS-side sweep ran for that scheme
    channel: ChannelRealization = field(repr=False)


class DropEvaluator:
    """Holds per-config codebooks, profiles and the MUSIC grid for repeated drops."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.tx, self.rx = cfg.tx, cfg.rx
        self.profile = resolve_profile(cfg, cfg.detector_profile)
        self.baseline = resolve_profile(cfg, cfg.baseline_profile)
        self.continuous = cfg.oversampling is None
        if not self.continuous:
            o, b = cfg.oversampling, cfg.phase_bits
            self.cb_tx: Codebook = dft_codebook(self.tx, o, b)
            self.cb_sweep: Codebook = sweep_codebook(self.tx, cfg.sweep_beams, o, b)
            self.cb_rx: Codebook = dft_codebook(self.rx, o, b)
        self.music = None
        if cfg.aoa_estimation == "music":
            self.music = MusicEstimator(self.rx, MusicGrid.front_hemisphere(*cfg.music_grid))

    # -- helpers ------------------------------------------------------------------

    def _combiner(self, ch: ChannelRealization, f: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """UE combiner from a codebook sweep against the fixed precoder ``f``."""
        if self.continuous:
            return upa_steering(self.rx, ch.aoa.theta, ch.aoa.phi)
        nv = self.cfg.link_budget.noise_var if self.cfg.rsrp_noise else 0.0
        wi = best_combiner(ch, f, self.cb_rx, self.cfg.link_budget.power_w, nv, rng)
        return self.cb_rx.codewords[:, wi]

    def _music_combiner(self, ch: ChannelRealization, f: np.ndarray,
                        rng: np.random.Generator) -> np.ndarray:
        if self.music is None:
            return upa_steering(self.rx, ch.aoa.theta, ch.aoa.phi)
        lb = self.cfg.link_budget
        signal = lb.power_w * float(np.vdot(ch.H @ f, ch.H @ f).real)
        snr_db = MIN_PILOT_SNR_DB if signal <= 0 else max(
            MIN_PILOT_SNR_DB, 10 * math.log10(signal / (self.rx.size * lb.noise_var)))
        Y = simulate_snapshots(ch.aoa, self.rx, snr_db, self.cfg.music_snapshots, rng)
        est = self.music.estimate(sample_covariance(Y))
        return upa_steering(self.rx, est.theta, est.phi)

    def _five_g(self, ch: ChannelRealization, rng: np.random.Generator) -> Beamformer:
        if self.continuous:  # a continuous noiseless sweep lands on the truth
            return Beamformer(upa_steering(self.tx, ch.aod.theta, ch.aod.phi),
                              upa_steering(self.rx, ch.aoa.theta, ch.aoa.phi))
        lb = self.cfg.link_budget
        if self.cfg.rsrp_noise:
            fi, wi, _ = measured_rsrp_sweep(ch, self.cb_sweep, self.cb_rx, lb.power_w, lb.noise_var, rng)
        else:
            fi, wi, _ = rsrp_sweep(ch, self.cb_sweep, self.cb_rx, lb.power_w)
        return Beamformer(self.cb_sweep.codewords[:, fi], self.cb_rx.codewords[:, wi])

    def _detect(self, ch, profile: DetectorProfile, seed: np.random.SeedSequence):
        # every detector replays the same stream -> common random numbers
        return simulate_detection(ch.aod, profile, np.random.default_rng(seed))

    # -- main entry -------------------------------------------------------------------

    def channel(self, ue_xyz: tuple[float, float, float], rng: np.random.Generator) -> ChannelRealization:
        cfg = self.cfg
        aod = bs_view(cfg.bs_position, ue_xyz)
        aoa = ue_view(cfg.bs_position, ue_xyz)
        alpha = draw_small_scale(rng) if cfg.fading else 1.0
        return los_channel(self.tx, self.rx, aod, aoa, cfg.path_loss, alpha, cfg.array_gain)

    def evaluate(self, ue_xyz: tuple[float, float, float], seed: np.random.SeedSequence) -> DropResult:
        cfg, lb = self.cfg, self.cfg.link_budget
        s_alpha, s_det, s_music, s_5g, s_od, s_ic = seed.spawn(6)
        ch = self.channel(ue_xyz, np.random.default_rng(s_alpha))
        want = set(cfg.schemes)
        rates: dict[str, float] = {}
        swept: dict[str, bool] = {}

        fallback = None
        if want & {"5g-bm", "vbm", "cvbm", "codebook-od"}:
            fallback = achievable_rate(ch, self._five_g(ch, np.random.default_rng(s_5g)), lb)
        if "5g-bm" in want:
            rates["5g-bm"], swept["5g-bm"] = fallback, True

        for name, profile in (("vbm", self.profile), ("cvbm", self.baseline)):
            if name not in want:
                continue
            det = self._detect(ch, profile, s_det)
            if det is None:
                rates[name], swept[name] = fallback, True
                continue
            f = upa_steering(self.tx, det.theta, det.phi)
            w = self._music_combiner(ch, f, np.random.default_rng(s_music))
            rates[name], swept[name] = achievable_rate(ch, Beamformer(f, w), lb), False

        if "codebook-od" in want:
            det = self._detect(ch, self.baseline, s_det)
            if det is None:
                rates["codebook-od"], swept["codebook-od"] = fallback, True
            else:
                if self.continuous:
                    f = upa_steering(self.tx, det.theta, det.phi)
                else:
                    f = self.cb_tx.codewords[:, self.cb_tx.nearest_to_angle(det.theta, det.phi)]
                w = self._combiner(ch, f, np.random.default_rng(s_od))
                rates["codebook-od"] = achievable_rate(ch, Beamformer(f, w), lb)
                swept["codebook-od"] = False

        if "codebook-ic" in want:
            if self.continuous:
                f = upa_steering(self.tx, ch.aod.theta, ch.aod.phi)
            else:
                f = self.cb_sweep.codewords[:, self.cb_sweep.nearest_to_angle(ch.aod.theta, ch.aod.phi)]
            w = self._combiner(ch, f, np.random.default_rng(s_ic))
            rates["codebook-ic"], swept["codebook-ic"] = achievable_rate(ch, Beamformer(f, w), lb), False

        return DropResult({k: rates[k] for k in cfg.schemes}, {k: swept[k] for k in cfg.schemes}, ch)
