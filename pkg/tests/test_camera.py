# tests/test_camera.py
"""
Tests for the pinhole projection model.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mono3d.core.camera import (
    ProjectionMatrix,
    backproject,
    backproject_points,
    focal_length,
    project_points,
    project_to_pixel,
)
from mono3d.core.structures import CameraPoint, Keypoint
from mono3d.exceptions import InvalidProjection, NonPositiveDepth, NonPositiveFocal, SingularProjection


# --- Construction ---

def test_normalizes_depth_row(kitti_P):
    scaled = ProjectionMatrix(np.array(kitti_P.matrix) * 3.5)
    assert scaled == kitti_P
    assert scaled.matrix[2, 2] == 1.0


def test_accepts_flat_twelve_values(kitti_P):
    assert ProjectionMatrix(kitti_P.to_list()) == kitti_P


def test_matrix_is_read_only(kitti_P):
    with pytest.raises(ValueError):
        kitti_P.matrix[0, 0] = 1.0


@pytest.mark.parametrize("bad", [np.zeros((3, 3)), np.zeros(11), [[1, 0, 0, 0], [0, 1, 0, 0]]])
def test_rejects_wrong_shape(bad):
    with pytest.raises(InvalidProjection):
        ProjectionMatrix(bad)


def test_rejects_non_finite_and_zero_depth_entry():
    with pytest.raises(InvalidProjection):
        ProjectionMatrix([[np.nan, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    with pytest.raises(InvalidProjection):
        ProjectionMatrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]])


def test_rejects_negative_focal():
    with pytest.raises(NonPositiveFocal):
        ProjectionMatrix.from_intrinsics(700.0, -700.0, 600.0, 180.0)


def test_focal_length_is_fy():
    P = ProjectionMatrix.from_intrinsics(710.0, 700.0, 600.0, 180.0)
    assert focal_length(P) == 700.0


# --- Projection ---

def test_principal_point_projection(simple_P):
    kpt, depth = project_to_pixel(simple_P, CameraPoint(0.0, 0.0, 10.0))
    assert (kpt.u, kpt.v) == pytest.approx((600.0, 180.0))
    assert depth == pytest.approx(10.0)


def test_projection_of_offset_point(simple_P):
    kpt, _ = project_to_pixel(simple_P, CameraPoint(1.0, 0.5, 10.0))
    assert (kpt.u, kpt.v) == pytest.approx((670.0, 215.0))


def test_point_behind_camera_is_rejected(simple_P):
    with pytest.raises(NonPositiveDepth):
        project_to_pixel(simple_P, CameraPoint(0.0, 0.0, -1.0))
    with pytest.raises(NonPositiveDepth):
        backproject(simple_P, Keypoint(600.0, 180.0), 0.0)


def test_backproject_inverts_projection_with_translation(kitti_P):
    point = CameraPoint(-3.2, 1.4, 27.5)
    kpt, depth = project_to_pixel(kitti_P, point)
    recovered = backproject(kitti_P, kpt, depth)
    assert recovered.as_array() == pytest.approx(point.as_array(), abs=1e-9)


def test_singular_left_block_is_rejected():
    degenerate = ProjectionMatrix([[1.0, 1.0, 1.0, 0.0], [1.0, 1.0, 1.0, 0.0], [0.0, 0.0, 1.0, 0.0]])
    with pytest.raises(SingularProjection):
        backproject(degenerate, Keypoint(0.0, 0.0), 5.0)


def test_batch_round_trip(kitti_P):
    rng = np.random.default_rng(7)
    points = np.column_stack([
        rng.uniform(-20, 20, 1000), rng.uniform(-2, 3, 1000), rng.uniform(2, 80, 1000),
    ])
    uv, depth = project_points(kitti_P, points)
    assert backproject_points(kitti_P, uv, depth) == pytest.approx(points, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(
    fx=st.floats(300, 2000), fy=st.floats(300, 2000),
    cx=st.floats(0, 1500), cy=st.floats(0, 800), tx=st.floats(-100, 100),
    x=st.floats(-30, 30), y=st.floats(-5, 5), z=st.floats(1, 100),
)
def test_round_trip_property(fx, fy, cx, cy, tx, x, y, z):
    P = ProjectionMatrix.from_intrinsics(fx, fy, cx, cy, tx)
    point = CameraPoint(x, y, z)
    kpt, depth = project_to_pixel(P, point)
    assert backproject(P, kpt, depth).as_array() == pytest.approx(point.as_array(), abs=1e-9)
