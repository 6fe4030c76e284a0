"""Continuous (vision-aimed) beams, DFT codebooks with RSRP sweeps, rate and latency."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channel import (ArrayGeometry, ChannelRealization, spatial_frequencies,
                      upa_steering, upa_steering_psi)
from .geometry import SphericalTarget

NORM_TOL = 1e-12
DEFAULT_BEAM_SLOT_S = 7.5e-3  # 30 ms for 4 CSI-RS beams


@dataclass(frozen=True)
class Beamformer:
    f: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("f", "w"):
            v = getattr(self, name)
            if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
                raise ValueError(f"{name} must have unit 2-norm")


@dataclass(frozen=True)
class LinkBudget:
    power_w: float = 2.0
    noise_var: float = 0.1
    bandwidth_hz: float = 100e6
    packet_bits: float = 1e9

    def __post_init__(self):
        if min(self.power_w, self.noise_var, self.bandwidth_hz) <= 0 or self.packet_bits < 0:
            raise ValueError("link budget entries must be positive")


def _matrix(H) -> np.ndarray:
    return H.H if isinstance(H, ChannelRealization) else np.asarray(H, dtype=complex)


def vbm_beamformer(aod_est: SphericalTarget, aoa_est: SphericalTarget,
                   tx: ArrayGeometry, rx: ArrayGeometry) -> Beamformer:
    """Steer precoder and combiner straight at the estimated directions."""
    return Beamformer(upa_steering(tx, aod_est.theta, aod_est.phi),
                      upa_steering(rx, aoa_est.theta, aoa_est.phi))


# -- codebooks -----------------------------------------------------------------

def dft_lattice(n: int, oversampling: int) -> np.ndarray:
    """Spatial-frequency lattice 2k/(n O) - 1; a single element needs only psi = 0."""
    if n == 1:
        return np.zeros(1)
    return 2.0 * np.arange(n * oversampling) / (n * oversampling) - 1.0


def quantize_phases(v: np.ndarray, bits: int | None) -> np.ndarray:
    """Round every entry's phase to the 2^bits grid and renormalize to unit norm."""
    if bits is None:
        return v
    step = 2 * math.pi / 2 ** bits
    q = np.exp(1j * step * np.round(np.angle(v) / step))
    return q / math.sqrt(len(v))


@dataclass(frozen=True)
class Codebook:
    """Codewords on the product lattice ``psi_x x psi_y`` (x-major order), one per column."""

    geometry: ArrayGeometry
    psi_x: np.ndarray = field(repr=False)
    psi_y: np.ndarray = field(repr=False)
    codewords: np.ndarray = field(repr=False)
    oversampling: int = 1
    phase_bits: int | None = None

    def __len__(self) -> int:
        return self.codewords.shape[1]

    @property
    def grid(self) -> np.ndarray:
        gx, gy = np.meshgrid(self.psi_x, self.psi_y, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])

    def index(self, ix: int, iy: int) -> int:
        return ix * len(self.psi_y) + iy

    def nearest(self, psi_x: float, psi_y: float) -> int:
        """Codeword whose lattice cell contains (psi_x, psi_y); psi wraps modulo 2."""
        return self.index(_nearest_wrapped(self.psi_x, psi_x), _nearest_wrapped(self.psi_y, psi_y))

    def nearest_to_angle(self, theta: float, phi: float) -> int:
        return self.nearest(*spatial_frequencies(theta, phi))


def _nearest_wrapped(lattice: np.ndarray, psi: float) -> int:
    if len(lattice) == 1:
        return 0
    d = np.abs((lattice - psi + 1.0) % 2.0 - 1.0)
    return int(np.argmin(d))


def _build(g: ArrayGeometry, psi_x, psi_y, oversampling, phase_bits) -> Codebook:
    cols = [quantize_phases(upa_steering_psi(g, px, py), phase_bits)
            for px in psi_x for py in psi_y]
    return Codebook(g, np.asarray(psi_x, float), np.asarray(psi_y, float),
                    np.column_stack(cols), oversampling, phase_bits)


def dft_codebook(g: ArrayGeometry, oversampling: int = 4, phase_bits: int | None = 8) -> Codebook:
    """Oversampled DFT codebook with optional per-entry phase quantization.

    A planar array yields ``nx * ny * O^2`` codewords; an axis with one element
    contributes a single lattice point.
    """
    if oversampling < 1:
        raise ValueError("oversampling must be >= 1")
    if phase_bits is not None and phase_bits < 1:
        raise ValueError("phase_bits must be >= 1")
    return _build(g, dft_lattice(g.nx, oversampling), dft_lattice(g.ny, oversampling),
                  oversampling, phase_bits)


def sweep_codebook(g: ArrayGeometry, n_beams: int = 36, oversampling: int = 4,
                   phase_bits: int | None = 8) -> Codebook:
    """Evenly spread subset of the DFT lattice used for a fixed-size beam sweep.

    Planar arrays take ``sqrt(n_beams)`` lattice points per axis, so ``n_beams``
    must be a perfect square unless the array is linear.
    """
    def pick(lattice, k):
        if len(lattice) == 1:
            return lattice
        k = min(k, len(lattice))
        idx = np.round(np.arange(k) * len(lattice) / k).astype(int)
        return lattice[idx]

    lx, ly = dft_lattice(g.nx, oversampling), dft_lattice(g.ny, oversampling)
    if g.ny == 1 or g.nx == 1:
        per_x = n_beams if g.nx > 1 else 1
        per_y = n_beams if g.ny > 1 else 1
    else:
        side = math.isqrt(n_beams)
        if side * side != n_beams:
            raise ValueError("planar sweeps need a square number of beams")
        per_x = per_y = side
    return _build(g, pick(lx, per_x), pick(ly, per_y), oversampling, phase_bits)


# -- sweeps ----------------------------------------------------------------------

def beam_gains(H, cb_tx: Codebook, cb_rx: Codebook) -> np.ndarray:
    """|w^H H f|^2 for every (f, w) pair, shape (len(cb_tx), len(cb_rx))."""
    g = cb_rx.codewords.conj().T @ _matrix(H) @ cb_tx.codewords
    return np.abs(g.T) ** 2


def _argmax_pair(values: np.ndarray) -> tuple[int, int]:
    # np.argmax returns the first maximum in row-major order -> lexicographic tie-break
    i = int(np.argmax(values))
    return divmod(i, values.shape[1])


def rsrp_sweep(H, cb_tx: Codebook, cb_rx: Codebook, power_w: float) -> tuple[int, int, float]:
    """Exhaustive noiseless sweep: best (f index, w index) and its RSRP in watts."""
    if len(cb_tx) == 0 or len(cb_rx) == 0:
        raise ValueError("codebooks must be non-empty")
    rsrp = power_w * beam_gains(H, cb_tx, cb_rx)
    fi, wi = _argmax_pair(rsrp)
    return fi, wi, float(rsrp[fi, wi])


def measured_rsrp_sweep(H, cb_tx: Codebook, cb_rx: Codebook, power_w: float,
                        noise_var: float, rng: np.random.Generator) -> tuple[int, int, float]:
    """Sweep where each pair is judged from one noisy reference symbol.

    Returns the chosen pair and its true (noise-free) RSRP.
    """
    amp = math.sqrt(power_w) * (cb_rx.codewords.conj().T @ _matrix(H) @ cb_tx.codewords).T
    noise = rng.standard_normal(amp.shape) + 1j * rng.standard_normal(amp.shape)
    measured = np.abs(amp + math.sqrt(noise_var / 2) * noise) ** 2
    fi, wi = _argmax_pair(measured)
    return fi, wi, float(abs(amp[fi, wi]) ** 2)


def best_combiner(H, f: np.ndarray, cb_rx: Codebook, power_w: float,
                  noise_var: float = 0.0, rng: np.random.Generator | None = None) -> int:
    """UE-side sweep for a fixed precoder; noisy when ``noise_var > 0``."""
    amp = math.sqrt(power_w) * (cb_rx.codewords.conj().T @ (_matrix(H) @ f))
    if noise_var > 0:
        if rng is None:
            raise ValueError("noisy sweep needs a generator")
        amp = amp + math.sqrt(noise_var / 2) * (rng.standard_normal(amp.shape)
                                               + 1j * rng.standard_normal(amp.shape))
    return int(np.argmax(np.abs(amp) ** 2))


# -- rate & latency ----------------------------------------------------------------

def achievable_rate(H, bf: Beamformer, lb: LinkBudget,
                    interferers: Sequence[np.ndarray] = ()) -> float:
    """log2(1 + SINR) in bps/Hz; with no interferers this is the per-user Shannon term."""
    Hm = _matrix(H)
    wh = bf.w.conj() @ Hm
    signal = lb.power_w * abs(wh @ bf.f) ** 2
    interference = sum(lb.power_w * abs(wh @ fj) ** 2 for fj in interferers)
    return math.log2(1.0 + signal / (interference + lb.noise_var))


def sum_rate(users: Sequence[tuple[object, Beamformer]], lb: LinkBudget,
             interference: bool = False) -> float:
    if not users:
        raise ValueError("need at least one user")
    total = 0.0
    for k, (H, bf) in enumerate(users):
        others = [u[1].f for j, u in enumerate(users) if j != k] if interference else ()
        total += achievable_rate(H, bf, lb, others)
    return total


def sweep_overhead(n_beams: int, slot_s: float = DEFAULT_BEAM_SLOT_S) -> float:
    return n_beams * slot_s


def avg_latency(rate_avg: float, lb: LinkBudget, sweep_overhead_s: float = 0.0) -> float:
    """Packet delivery time F / (W R) plus any beam-sweep overhead, in seconds."""
    if rate_avg <= 0:
        raise ValueError("average rate must be positive (outage)")
    return lb.packet_bits / (lb.bandwidth_hz * rate_avg) + sweep_overhead_s


def quantization_gain_loss(g: ArrayGeometry, cb: Codebook, theta: float, phi: float) -> float:
    """Fractional beamforming-gain loss of the best codeword for a unit LoS channel."""
    a = upa_steering(g, theta, phi)
    unit_rx = Codebook(ArrayGeometry(1), np.zeros(1), np.zeros(1), np.ones((1, 1), complex))
    fi, _, _ = rsrp_sweep(a.conj()[None, :], cb, unit_rx, 1.0)
    return float(min(1.0, max(0.0, 1.0 - abs(a.conj() @ cb.codewords[:, fi]) ** 2)))
