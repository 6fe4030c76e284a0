"""Pixel + depth -> camera-frame cartesian -> spherical target coordinates.

Camera frame: z along the optical axis (array boresight), x to the right,
y down in the image. ``theta`` is the angle off boresight and ``phi`` the
azimuth of the ray around boresight, measured from +x towards +y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class CameraIntrinsics:
    focal_length_px: float = 500.0
    principal_point: tuple[float, float] = (320.0, 240.0)
    image_size: tuple[int, int] = (640, 480)

    def __post_init__(self):
        w, h = self.image_size
        u0, v0 = self.principal_point
        if self.focal_length_px <= 0:
            raise GeometryError("focal length must be positive")
        if not (0 <= u0 <= w and 0 <= v0 <= h):
            raise GeometryError("principal point outside the image")


@dataclass(frozen=True)
class CartesianPoint:
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


@dataclass(frozen=True)
class SphericalTarget:
    """Range, off-boresight angle ``theta`` in [0, pi/2] and azimuth ``phi`` in (-pi, pi]."""

    range_m: float
    theta: float
    phi: float


def wrap_angle(phi: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    w = math.remainder(phi, 2.0 * math.pi)
    return math.pi if w == -math.pi else w


def pixel_to_camera(u: float, v: float, range_m: float,
                    intr: CameraIntrinsics | None = None) -> CartesianPoint:
    """Back-project pixel ``(u, v)`` with measured range onto the camera ray.

    The metric offsets are ``x = (u - u0) s`` and ``y = (v - v0) s`` where the
    scale ``s`` puts the point on the pinhole ray at distance ``range_m``;
    depth then follows from ``z = sqrt(r^2 - x^2 - y^2)``.
    """
    intr = intr or CameraIntrinsics()
    if range_m <= 0:
        raise GeometryError("range must be positive")
    u0, v0 = intr.principal_point
    du, dv, f = u - u0, v - v0, intr.focal_length_px
    s = range_m / math.sqrt(du * du + dv * dv + f * f)
    x, y = du * s, dv * s
    lateral_sq = x * x + y * y
    if lateral_sq > range_m * range_m:
        raise GeometryError("lateral offset exceeds the measured range")
    return CartesianPoint(x, y, math.sqrt(range_m * range_m - lateral_sq))


def cart_to_spherical(p: CartesianPoint) -> SphericalTarget:
    r = p.norm()
    if r == 0:
        raise GeometryError("cannot take direction of the zero vector")
    lateral = math.hypot(p.x, p.y)
    theta = math.atan2(lateral, p.z)
    phi = 0.0 if lateral == 0 else wrap_angle(math.atan2(p.y, p.x))
    return SphericalTarget(r, theta, phi)


def spherical_to_cart(t: SphericalTarget) -> CartesianPoint:
    st = math.sin(t.theta)
    return CartesianPoint(
        t.range_m * st * math.cos(t.phi),
        t.range_m * st * math.sin(t.phi),
        t.range_m * math.cos(t.theta),
    )


def canonical_target(range_m: float, theta: float, phi: float) -> SphericalTarget:
    """Fold arbitrary (theta, phi) back into the front-hemisphere convention.

    Negative ``theta`` is reflected through boresight; anything past the array
    plane is clamped to ``pi/2``.
    """
    if theta < 0:
        theta, phi = -theta, phi + math.pi
    theta = min(theta, math.pi / 2)
    return SphericalTarget(range_m, theta, wrap_angle(phi))
