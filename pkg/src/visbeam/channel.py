"""Path loss, array steering vectors and the LoS MIMO / IRS-UE channels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import SphericalTarget


@dataclass(frozen=True)
class ArrayGeometry:
    """Half-wavelength uniform planar array of ``nx * ny`` elements (``ny == 1`` is a ULA)."""

    nx: int
    ny: int = 1

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("array dimensions must be >= 1")

    @property
    def size(self) -> int:
        return self.nx * self.ny

    @classmethod
    def square(cls, count: int) -> "ArrayGeometry":
        side = math.isqrt(count)
        if side * side != count:
            raise ValueError(f"{count} antennas is not a perfect square")
        return cls(side, side)


PATH_LOSS_MODES = ("physical", "normalized")


@dataclass(frozen=True)
class PathLossParams:
    """Indoor path-loss settings.

    ``mode="normalized"`` keeps the formula available but builds channels with
    unit large-scale gain, which is how relative scheme comparisons are run.
    """

    carrier_freq_ghz: float = 100.0
    mode: str = "physical"

    def __post_init__(self):
        if self.carrier_freq_ghz <= 0:
            raise ValueError("carrier frequency must be positive")
        if self.mode not in PATH_LOSS_MODES:
            raise ValueError(f"unknown path-loss mode {self.mode!r}")


def path_loss_db(r: float, p: PathLossParams | None = None) -> float:
    """Large-scale gain in dB (negative): -(31.84 + 21.5 log10 r + 19 log10 fc[GHz])."""
    p = p or PathLossParams()
    if r <= 0:
        raise ValueError("distance must be positive")
    return -(31.84 + 21.5 * math.log10(r) + 19.0 * math.log10(p.carrier_freq_ghz))


def db_to_lin(db: float) -> float:
    return 10.0 ** (db / 10.0)


def spatial_frequencies(theta: float, phi: float) -> tuple[float, float]:
    """Directional cosines (psi_x, psi_y) = sin(theta) * (cos(phi), sin(phi))."""
    st = math.sin(theta)
    return st * math.cos(phi), st * math.sin(phi)


def ula_steering(n: int, psi: float) -> np.ndarray:
    """Unit-norm ULA response (1/sqrt(n)) [1, e^{j pi psi}, ..., e^{j (n-1) pi psi}]."""
    if n < 1:
        raise ValueError("array length must be >= 1")
    return np.exp(1j * math.pi * psi * np.arange(n)) / math.sqrt(n)


def upa_steering_psi(g: ArrayGeometry, psi_x: float, psi_y: float) -> np.ndarray:
    return np.kron(ula_steering(g.nx, psi_x), ula_steering(g.ny, psi_y))


def upa_steering(g: ArrayGeometry, theta: float, phi: float) -> np.ndarray:
    return upa_steering_psi(g, *spatial_frequencies(theta, phi))


def upa_steering_grid(g: ArrayGeometry, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Steering vectors for many directions at once, shape ``(len(theta), g.size)``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    psi_x = np.sin(theta) * np.cos(phi)
    psi_y = np.sin(theta) * np.sin(phi)
    ax = np.exp(1j * np.pi * psi_x[:, None] * np.arange(g.nx)) / math.sqrt(g.nx)
    ay = np.exp(1j * np.pi * psi_y[:, None] * np.arange(g.ny)) / math.sqrt(g.ny)
    return (ax[:, :, None] * ay[:, None, :]).reshape(len(theta), g.size)


def draw_small_scale(rng: np.random.Generator) -> complex:
    """One CN(0, 1) coefficient via Box-Muller."""
    u1, u2 = rng.random(2)
    radius = math.sqrt(-math.log1p(-u1))  # -ln(1-u1) avoids log(0)
    return complex(radius * math.cos(2 * math.pi * u2), radius * math.sin(2 * math.pi * u2))


@dataclass(frozen=True)
class ChannelRealization:
    H: np.ndarray = field(repr=False)
    beta_db: float
    alpha: complex
    aod: SphericalTarget
    aoa: SphericalTarget

    @property
    def shape(self) -> tuple[int, int]:
        return self.H.shape


def los_channel(tx: ArrayGeometry, rx: ArrayGeometry, aod: SphericalTarget,
                aoa: SphericalTarget, p: PathLossParams | None = None,
                alpha: complex = 1.0, array_gain: bool = False) -> ChannelRealization:
    """Rank-1 LoS channel ``H = sqrt(beta) alpha a_N(aoa) a_M(aod)^H`` of shape (N, M).

    With ``array_gain`` the matrix is scaled by ``sqrt(M N)`` so that matched
    beams collect the full array gain instead of a unit-norm projection.
    """
    p = p or PathLossParams()
    if aod.range_m <= 0:
        raise ValueError("link range must be positive")
    beta_db = path_loss_db(aod.range_m, p) if p.mode == "physical" else 0.0
    amp = math.sqrt(db_to_lin(beta_db)) * complex(alpha)
    if array_gain:
        amp *= math.sqrt(tx.size * rx.size)
    a_m = upa_steering(tx, aod.theta, aod.phi)
    a_n = upa_steering(rx, aoa.theta, aoa.phi)
    H = amp * np.outer(a_n, a_m.conj())
    return ChannelRealization(H, beta_db, complex(alpha), aod, aoa)


def irs_ue_channel(g: ArrayGeometry, theta_ue: float, phi_ue: float,
                   beta_r_db: float = 0.0) -> np.ndarray:
    """IRS-to-UE channel ``sqrt(beta_r) a_IRS`` with unnormalized unit-modulus entries.

    The x factor advances by ``exp(-j pi cos(theta) sin(phi))`` per element and
    the y factor by ``exp(-j pi sin(theta) sin(phi))``.
    """
    sx = math.cos(theta_ue) * math.sin(phi_ue)
    sy = math.sin(theta_ue) * math.sin(phi_ue)
    ax = np.exp(-1j * math.pi * sx * np.arange(g.nx))
    ay = np.exp(-1j * math.pi * sy * np.arange(g.ny))
    return math.sqrt(db_to_lin(beta_r_db)) * np.kron(ax, ay)
