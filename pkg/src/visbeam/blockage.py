"""Geometric LoS-blockage prediction from a device trajectory and obstacle boxes.

Drop-in for a learned predictor ``b = f(p, delta)``: the UE track is
extrapolated linearly and the BS-UE segment is tested against each obstacle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import CartesianPoint

Rect = tuple[float, float, float, float]


@dataclass(frozen=True)
class Trajectory:
    positions: np.ndarray = field(repr=False)  # (S, 2) meters
    timestamps: np.ndarray = field(repr=False)  # (S,) seconds

    def __post_init__(self):
        p = np.atleast_2d(np.asarray(self.positions, dtype=float))
        t = np.atleast_1d(np.asarray(self.timestamps, dtype=float))
        if p.ndim != 2 or p.shape[1] != 2 or len(p) < 1 or len(t) != len(p):
            raise ValueError("need S >= 1 (x, y) positions with one timestamp each")
        if np.any(np.diff(t) <= 0):
            raise ValueError("timestamps must be strictly increasing")
        object.__setattr__(self, "positions", p)
        object.__setattr__(self, "timestamps", t)

    def extrapolate(self, horizon_s: float) -> tuple[float, float]:
        last = self.positions[-1]
        if len(self.positions) < 2 or horizon_s == 0:
            return float(last[0]), float(last[1])
        v = (last - self.positions[-2]) / (self.timestamps[-1] - self.timestamps[-2])
        return float(last[0] + v[0] * horizon_s), float(last[1] + v[1] * horizon_s)


@dataclass(frozen=True)
class ObstacleSet:
    rects: tuple[Rect, ...] = ()

    def __post_init__(self):
        rects = tuple(tuple(float(v) for v in r) for r in self.rects)
        for x0, y0, x1, y1 in rects:
            if not (x1 > x0 and y1 > y0):
                raise ValueError("obstacles need positive extents")
        object.__setattr__(self, "rects", rects)


def segment_hits_rect(p0: tuple[float, float], p1: tuple[float, float], rect: Rect) -> bool:
    """Liang-Barsky clip of segment p0-p1 against a closed axis-aligned rectangle."""
    x0, y0, x1, y1 = rect
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    t_lo, t_hi = 0.0, 1.0
    for p, q in ((-dx, p0[0] - x0), (dx, x1 - p0[0]), (-dy, p0[1] - y0), (dy, y1 - p0[1])):
        if p == 0:
            if q < 0:
                return False
            continue
        t = q / p
        if p < 0:
            t_lo = max(t_lo, t)
        else:
            t_hi = min(t_hi, t)
        if t_lo > t_hi:
            return False
    return True


def predict_blockage(trajectory: Trajectory, obstacles: ObstacleSet,
                     bs: CartesianPoint, horizon_s: float = 0.0) -> int:
    """1 if the LoS from the BS to the UE's predicted position crosses an obstacle."""
    ue = trajectory.extrapolate(horizon_s)
    origin = (bs.x, bs.y)
    return int(any(segment_hits_rect(origin, ue, r) for r in obstacles.rects))
