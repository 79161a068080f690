# src/mono3d/core/boxes.py
"""
3D bounding-box geometry: cuboid corners, the projected central line (PCL),
visual height and yaw encodings.

Rotation convention (KITTI): a box with yaw ry is rotated about the camera
y-axis by R = [[cos ry, 0, sin ry], [0, 1, 0], [-sin ry, 0, cos ry]]. In the
box frame the length runs along x, the height along y and the width along z.
"""

import math
from typing import List, Tuple

import numpy as np

from ..exceptions import DegenerateEncoding, NonPositiveDepth
from .camera import ProjectionMatrix, project_points, project_to_pixel
from .structures import Box3D, CameraPoint, Keypoint, YawEncoding

# Corner sign pattern (length, height, width). Front-top-left first, then the
# rest of the top face counterclockwise seen from above, then the bottom face
# in the same order. "Front" is +x of the box frame, "top" is -y (y points down).
_CORNER_SIGNS = np.array(
    [
        [1, -1, 1],
        [-1, -1, 1],
        [-1, -1, -1],
        [1, -1, -1],
        [1, 1, 1],
        [-1, 1, 1],
        [-1, 1, -1],
        [1, 1, -1],
    ],
    dtype=float,
)


def wrap_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    wrapped = math.remainder(theta, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def rotation_y(ry: float) -> np.ndarray:
    """Rotation matrix about the camera y-axis."""
    c, s = math.cos(ry), math.sin(ry)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def corners_array(box: Box3D) -> np.ndarray:
    """(8, 3) array of box corners in the fixed corner order."""
    size = box.size
    offsets = _CORNER_SIGNS * np.array([size.L / 2.0, size.H / 2.0, size.W / 2.0])
    return offsets @ rotation_y(box.ry).T + box.center.as_array()


def corners_3d(box: Box3D) -> List[CameraPoint]:
    """The eight cuboid corners in camera coordinates (see the module docstring for order)."""
    return [CameraPoint.from_array(row) for row in corners_array(box)]


def project_corners(
    P: ProjectionMatrix, box: Box3D, include_center: bool = False
) -> List[Keypoint]:
    """
    Project the box corners (and optionally the center, listed first) to pixels.

    These are the keypoint targets of a keypoint head: the projected center is
    used at inference, the eight corners only as auxiliary training targets.
    """
    points = corners_array(box)
    if include_center:
        points = np.vstack([box.center.as_array(), points])
    uv, _ = project_points(P, points)
    return [Keypoint(float(u), float(v)) for u, v in uv]


def pcl_endpoints(box: Box3D) -> Tuple[CameraPoint, CameraPoint]:
    """Top and bottom of the vertical line through the box center."""
    c, half = box.center, box.size.H / 2.0
    return CameraPoint(c.x, c.y - half, c.z), CameraPoint(c.x, c.y + half, c.z)


def visual_height(P: ProjectionMatrix, box: Box3D) -> float:
    """Pixel length of the projected central line (v(bottom) - v(top))."""
    top, bottom = pcl_endpoints(box)
    top_px, _ = project_to_pixel(P, top)
    bottom_px, _ = project_to_pixel(P, bottom)
    return bottom_px.v - top_px.v


def yaw_encode(theta: float) -> YawEncoding:
    return YawEncoding(math.sin(theta), math.cos(theta))


def yaw_decode(a: YawEncoding) -> float:
    """Angle of a (possibly unnormalized) encoding, in (-pi, pi]."""
    if a.sin_t == 0.0 and a.cos_t == 0.0:
        raise DegenerateEncoding("cannot decode yaw from sin = cos = 0")
    return wrap_angle(math.atan2(a.sin_t, a.cos_t))


def alpha_to_ry(alpha: float, x: float, z: float) -> float:
    """Allocentric (observation) angle to egocentric yaw: ry = alpha + atan2(x, z)."""
    if z <= 0.0:
        raise NonPositiveDepth(f"z must be positive, got {z}")
    return wrap_angle(alpha + math.atan2(x, z))


def ry_to_alpha(ry: float, x: float, z: float) -> float:
    """Egocentric yaw to allocentric angle: alpha = ry - atan2(x, z)."""
    if z <= 0.0:
        raise NonPositiveDepth(f"z must be positive, got {z}")
    return wrap_angle(ry - math.atan2(x, z))
