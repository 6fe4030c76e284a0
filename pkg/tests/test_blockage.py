import numpy as np
from hypothesis import given, strategies as st

from visbeam.blockage import ObstacleSet, Trajectory, predict_blockage, segment_hits_rect
from visbeam.geometry import CartesianPoint

import pytest

BS = CartesianPoint(0, 0, 3)


def test_examples():
    still = Trajectory(np.array([[5.0, 0.0]]), np.array([0.0]))
    assert predict_blockage(still, ObstacleSet(), BS) == 0
    assert predict_blockage(still, ObstacleSet(((2, -1, 3, 1),)), BS) == 1
    moving = Trajectory(np.array([[5.0, -1.0], [5.0, 0.0]]), np.array([-1.0, 0.0]))
    assert moving.extrapolate(2.0) == (5.0, 2.0)
    obs = ObstacleSet(((2, 1, 3, 2),))
    assert predict_blockage(moving, obs, BS, 2.0) == 1
    assert predict_blockage(moving, obs, BS, 0.0) == 0


def test_validation():
    with pytest.raises(ValueError):
        Trajectory(np.array([[0, 0], [1, 1]]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        ObstacleSet(((0, 0, 0, 1),))


def brute_hit(p0, p1, rect, n=20001):
    t = np.linspace(0, 1, n)
    x = p0[0] + t * (p1[0] - p0[0])
    y = p0[1] + t * (p1[1] - p0[1])
    return bool(np.any((x >= rect[0]) & (x <= rect[2]) & (y >= rect[1]) & (y <= rect[3])))


coord = st.floats(-10, 10)


@given(coord, coord, coord, coord, coord, coord, st.floats(0.5, 5), st.floats(0.5, 5))
def test_segment_vs_sampling(x0, y0, x1, y1, rx, ry, w, h):
    rect = (rx, ry, rx + w, ry + h)
    exact = segment_hits_rect((x0, y0), (x1, y1), rect)
    if brute_hit((x0, y0), (x1, y1), rect):
        assert exact  # sampling can only miss grazing hits
    if exact:
        # grow slightly: a real hit must show up in sampling of an inflated box
        big = (rect[0] - 1e-2, rect[1] - 1e-2, rect[2] + 1e-2, rect[3] + 1e-2)
        assert brute_hit((x0, y0), (x1, y1), big)


@given(st.lists(st.tuples(coord, coord, st.floats(0.5, 4), st.floats(0.5, 4)), max_size=5),
       coord, coord, coord, coord)
def test_translation_and_monotonicity(boxes, ux, uy, dx, dy):
    rects = tuple((x, y, x + w, y + h) for x, y, w, h in boxes)
    traj = Trajectory(np.array([[ux, uy]]), np.array([0.0]))
    b = predict_blockage(traj, ObstacleSet(rects), BS)
    moved = ObstacleSet(tuple((r[0] + dx, r[1] + dy, r[2] + dx, r[3] + dy) for r in rects))
    traj2 = Trajectory(np.array([[ux + dx, uy + dy]]), np.array([0.0]))
    # dyadic shifts keep the float arithmetic exact enough for the boundary cases
    if all(float(v).is_integer() for v in (dx, dy)):
        assert predict_blockage(traj2, moved, CartesianPoint(dx, dy, 3)) == b
    for k in range(len(rects)):
        fewer = ObstacleSet(rects[:k] + rects[k + 1:])
        assert predict_blockage(traj, fewer, BS) <= b


@given(st.integers(-8, 8), st.integers(-8, 8), st.integers(-8, 8), st.integers(-8, 8))
def test_translation_integer(ux, uy, dx, dy):
    rects = ((1, 1, 3, 2), (-4, -2, -1, 5))
    traj = Trajectory(np.array([[ux, uy]], float), np.array([0.0]))
    moved = tuple((r[0] + dx, r[1] + dy, r[2] + dx, r[3] + dy) for r in rects)
    traj2 = Trajectory(np.array([[ux + dx, uy + dy]], float), np.array([0.0]))
    assert predict_blockage(traj, ObstacleSet(rects), BS) == \
        predict_blockage(traj2, ObstacleSet(moved), CartesianPoint(dx, dy, 3))
