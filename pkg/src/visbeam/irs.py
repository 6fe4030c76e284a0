"""IRS phase control and location-aided IRS-UE channel reconstruction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ArrayGeometry, irs_ue_channel
from .geometry import SphericalTarget


@dataclass(frozen=True)
class IrsLink:
    """IRS-to-UE channel ``h_r`` and the BS-side cascade ``g`` (all ones when omitted)."""

    h_r: np.ndarray = field(repr=False)
    g: np.ndarray | None = field(default=None, repr=False)
    beta_r_db: float = 0.0

    def __post_init__(self):
        h = np.asarray(self.h_r, dtype=complex)
        g = np.ones_like(h) if self.g is None else np.asarray(self.g, dtype=complex)
        if h.shape != g.shape or h.ndim != 1:
            raise ValueError("h_r and g must be vectors of equal length")
        object.__setattr__(self, "h_r", h)
        object.__setattr__(self, "g", g)

    @property
    def cascade(self) -> np.ndarray:
        return self.h_r * self.g


def reflection(phases: np.ndarray) -> np.ndarray:
    """Unit-modulus reflection coefficients exp(j w_n)."""
    return np.exp(1j * np.asarray(phases, dtype=float))


def objective(link: IrsLink, phases: np.ndarray, power_w: float = 1.0,
              noise_var: float = 1.0) -> float:
    """Received SNR P |sum_n h_n psi_n g_n|^2 / sigma^2."""
    return float(power_w * abs(np.sum(link.cascade * reflection(phases))) ** 2 / noise_var)


def irs_rate(link: IrsLink, phases: np.ndarray, power_w: float = 1.0,
             noise_var: float = 1.0) -> float:
    return float(np.log2(1.0 + objective(link, phases, power_w, noise_var)))


def optimal_phases(link: IrsLink) -> np.ndarray:
    """Co-phase every cascade term: w_n = -arg(h_n g_n), 0 where the term vanishes."""
    c = link.cascade
    return np.where(np.abs(c) > 0, -np.angle(c), 0.0)


def reconstruct_irs_channel(ue_est: SphericalTarget, g_irs: ArrayGeometry,
                            beta_r_db: float = 0.0) -> np.ndarray:
    return irs_ue_channel(g_irs, ue_est.theta, ue_est.phi, beta_r_db)


def nmse(h_true: np.ndarray, h_est: np.ndarray) -> float:
    """||h_est - h_true||^2 / ||h_true||^2 (linear)."""
    h_true = np.asarray(h_true, dtype=complex)
    h_est = np.asarray(h_est, dtype=complex)
    if h_true.shape != h_est.shape:
        raise ValueError("channel vectors differ in length")
    ref = float(np.vdot(h_true, h_true).real)
    if ref == 0:
        raise ValueError("true channel is zero")
    d = h_est - h_true
    return float(np.vdot(d, d).real / ref)
