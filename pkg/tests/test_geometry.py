import math

import pytest
from hypothesis import given, strategies as st

from visbeam.geometry import (CameraIntrinsics, CartesianPoint, GeometryError, SphericalTarget,
                              canonical_target, cart_to_spherical, pixel_to_camera,
                              spherical_to_cart, wrap_angle)

INTR = CameraIntrinsics()


def close(p, q, tol=1e-12):
    return all(abs(a - b) <= tol for a, b in zip(p, q))


def test_intrinsics_validation():
    with pytest.raises(GeometryError):
        CameraIntrinsics(focal_length_px=0)
    with pytest.raises(GeometryError):
        CameraIntrinsics(principal_point=(700, 240))


def test_pixel_to_camera_examples():
    p = pixel_to_camera(320, 240, 5.0, INTR)
    assert close((p.x, p.y, p.z), (0, 0, 5))
    p = pixel_to_camera(820, 240, math.sqrt(2), INTR)
    assert close((p.x, p.y, p.z), (1, 0, 1))


def test_pixel_to_camera_errors():
    with pytest.raises(GeometryError):
        pixel_to_camera(320, 240, 0.0, INTR)


@given(st.floats(0, 640), st.floats(0, 480), st.floats(0.1, 50))
def test_pixel_to_camera_preserves_range(u, v, r):
    p = pixel_to_camera(u, v, r, INTR)
    assert abs(p.norm() - r) <= 1e-9
    assert p.z >= 0


def test_cart_to_spherical_examples():
    t = cart_to_spherical(CartesianPoint(0, 0, 1))
    assert close((t.range_m, t.theta, t.phi), (1, 0, 0))
    t = cart_to_spherical(CartesianPoint(1, 1, 1))
    assert close((t.range_m, t.theta, t.phi), (math.sqrt(3), math.atan(math.sqrt(2)), math.pi / 4))
    assert abs(t.theta - 0.9553) < 1e-4
    t = cart_to_spherical(CartesianPoint(0, 1, 1))
    assert close((t.range_m, t.theta, t.phi), (math.sqrt(2), math.pi / 4, math.pi / 2))
    with pytest.raises(GeometryError):
        cart_to_spherical(CartesianPoint(0, 0, 0))


def test_spherical_to_cart_examples():
    p = spherical_to_cart(SphericalTarget(1, 0, 0))
    assert close((p.x, p.y, p.z), (0, 0, 1))
    p = spherical_to_cart(SphericalTarget(2, math.pi / 2, 0))
    assert close((p.x, p.y, p.z), (2, 0, 0), 1e-15)


targets = st.builds(SphericalTarget, st.floats(0.01, 100), st.floats(1e-6, math.pi / 2),
                    st.floats(-math.pi + 1e-9, math.pi))


@given(targets)
def test_roundtrip(t):
    back = cart_to_spherical(spherical_to_cart(t))
    assert abs(back.range_m - t.range_m) <= 1e-9 * max(1, t.range_m)
    assert abs(back.theta - t.theta) <= 1e-9
    assert abs(wrap_angle(back.phi - t.phi)) <= 1e-9


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.01, 5), st.floats(-math.pi, math.pi))
def test_rotation_about_boresight(x, y, z, a):
    if math.hypot(x, y) < 1e-3:
        return
    t0 = cart_to_spherical(CartesianPoint(x, y, z))
    c, s = math.cos(a), math.sin(a)
    t1 = cart_to_spherical(CartesianPoint(c * x - s * y, s * x + c * y, z))
    assert abs(t1.theta - t0.theta) <= 1e-9
    assert abs(wrap_angle(t1.phi - t0.phi - a)) <= 1e-9


def test_output_ranges():
    t = cart_to_spherical(CartesianPoint(-1, -1e-300, 0.5))
    assert 0 <= t.theta <= math.pi / 2 and -math.pi < t.phi <= math.pi


def test_wrap_and_canonical():
    assert wrap_angle(-math.pi) == math.pi
    assert abs(wrap_angle(3 * math.pi) - math.pi) < 1e-12
    t = canonical_target(1.0, -0.2, 0.5)
    assert abs(t.theta - 0.2) < 1e-15 and abs(t.phi - (0.5 - math.pi)) < 1e-12
    assert canonical_target(1.0, 2.0, 0.0).theta == math.pi / 2
