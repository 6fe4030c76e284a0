"""Single-source MUSIC angle-of-arrival estimation over a (theta, phi) grid."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ArrayGeometry, upa_steering, upa_steering_grid
from .geometry import SphericalTarget, wrap_angle
from .linalg import hermitian_eig, is_hermitian

SINGULAR_PEAK_RATIO = 1e-10


class DegenerateCovarianceError(ValueError):
    """Covariance has no distinguishable signal subspace."""


@dataclass(frozen=True)
class MusicGrid:
    theta: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("theta", "phi"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.ndim != 1 or len(v) == 0 or np.any(np.diff(v) <= 0):
                raise ValueError(f"{name} lattice must be non-empty and strictly increasing")
            object.__setattr__(self, name, v)

    @classmethod
    def front_hemisphere(cls, n_theta: int = 181, n_phi: int = 181) -> "MusicGrid":
        theta = np.linspace(0.0, math.pi / 2, n_theta)
        phi = -math.pi + 2 * math.pi * np.arange(1, n_phi + 1) / n_phi
        return cls(theta, phi)

    @property
    def theta_step(self) -> float:
        return float(self.theta[1] - self.theta[0]) if len(self.theta) > 1 else 0.0

    @property
    def phi_step(self) -> float:
        return float(self.phi[1] - self.phi[0]) if len(self.phi) > 1 else 0.0

    @property
    def phi_periodic(self) -> bool:
        return len(self.phi) > 2 and abs(self.phi[-1] - self.phi[0] + self.phi_step - 2 * math.pi) < 1e-9


def simulate_snapshots(aoa: SphericalTarget, rx: ArrayGeometry, snr_db: float,
                       T: int, rng: np.random.Generator) -> np.ndarray:
    """``T`` snapshots ``y_t = a(aoa) s_t + n_t`` as rows of a (T, N) array.

    Symbols are CN(0, 1); ``snr_db`` is total signal power over total noise
    power per snapshot (``inf`` gives noiseless data).
    """
    if T < 1:
        raise ValueError("need at least one snapshot")
    a = upa_steering(rx, aoa.theta, aoa.phi)
    s = (rng.standard_normal(T) + 1j * rng.standard_normal(T)) / math.sqrt(2)
    noise = (rng.standard_normal((T, rx.size)) + 1j * rng.standard_normal((T, rx.size))) / math.sqrt(2)
    if math.isinf(snr_db) and snr_db > 0:
        sigma = 0.0
    else:
        sigma = math.sqrt(1.0 / (rx.size * 10.0 ** (snr_db / 10.0)))
    return s[:, None] * a[None, :] + sigma * noise


def sample_covariance(snapshots: np.ndarray) -> np.ndarray:
    """(1/T) sum_t y_t y_t^H."""
    y = np.atleast_2d(np.asarray(snapshots, dtype=complex))
    return y.T @ y.conj() / y.shape[0]


def _parabolic_offset(left: float, mid: float, right: float) -> float:
    denom = left - 2 * mid + right
    if denom >= 0:  # not a local maximum
        return 0.0
    return float(np.clip(0.5 * (left - right) / denom, -0.5, 0.5))


class MusicEstimator:
    """Precomputes grid steering vectors for repeated estimates on one array."""

    def __init__(self, rx: ArrayGeometry, grid: MusicGrid | None = None, refine: bool = True):
        self.rx = rx
        self.grid = grid or MusicGrid.front_hemisphere()
        self.refine = refine
        tt, pp = np.meshgrid(self.grid.theta, self.grid.phi, indexing="ij")
        self._steer = upa_steering_grid(rx, tt.ravel(), pp.ravel())

    def noise_subspace(self, R: np.ndarray) -> np.ndarray:
        if not is_hermitian(R):
            raise ValueError("covariance must be Hermitian")
        w, V = hermitian_eig(R)
        spread = w[-1] - w[0]
        if spread <= 1e-9 * max(abs(w[-1]), np.finfo(float).tiny):
            raise DegenerateCovarianceError("all eigenvalues equal; no signal subspace")
        return V[:, :-1]

    def null_spectrum(self, R: np.ndarray) -> np.ndarray:
        """a^H En En^H a on the grid, shape (n_theta, n_phi); MUSIC peaks are its minima."""
        En = self.noise_subspace(R)
        proj = self._steer.conj() @ En
        return np.sum(np.abs(proj) ** 2, axis=1).reshape(len(self.grid.theta), len(self.grid.phi))

    def pseudo_spectrum(self, R: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 1.0 / self.null_spectrum(R)

    def estimate(self, R: np.ndarray, range_m: float = 1.0) -> SphericalTarget:
        den = self.null_spectrum(R)
        flat = int(np.argmin(den))  # first minimum -> lowest grid index on ties
        i, j = divmod(flat, den.shape[1])
        theta, phi = float(self.grid.theta[i]), float(self.grid.phi[j])

        if self.refine and den[i, j] > SINGULAR_PEAK_RATIO * float(np.mean(den)):
            logp = -np.log(np.maximum(den, np.finfo(float).tiny))
            if 0 < i < den.shape[0] - 1:
                theta += self.grid.theta_step * _parabolic_offset(logp[i - 1, j], logp[i, j], logp[i + 1, j])
            n_phi = den.shape[1]
            if self.grid.phi_periodic or 0 < j < n_phi - 1:
                off = _parabolic_offset(logp[i, (j - 1) % n_phi], logp[i, j], logp[i, (j + 1) % n_phi])
                phi = wrap_angle(phi + self.grid.phi_step * off)
        return SphericalTarget(range_m, theta, phi)


def estimate_aoa(R: np.ndarray, rx: ArrayGeometry, grid: MusicGrid | None = None,
                 num_sources: int = 1, refine: bool = True) -> SphericalTarget:
    if num_sources != 1:
        raise NotImplementedError("only single-source MUSIC is supported")
    return MusicEstimator(rx, grid, refine).estimate(R)
