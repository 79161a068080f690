"""
Core geometry for the mono3d toolkit.

Camera projection, 3D box geometry and the distance decomposition
Z = f * H * h_rec.
"""

from .structures import Box2D, Box3D, CameraPoint, Keypoint, PhysicalSize, YawEncoding
from .camera import (
    ProjectionMatrix,
    backproject,
    backproject_points,
    focal_length,
    project_points,
    project_to_pixel,
)
from .boxes import (
    alpha_to_ry,
    corners_3d,
    corners_array,
    pcl_endpoints,
    project_corners,
    rotation_y,
    ry_to_alpha,
    visual_height,
    wrap_angle,
    yaw_decode,
    yaw_encode,
)
from .distance import (
    DistanceFactors,
    decompose_distance,
    decompose_distances,
    recover_box,
    recover_center,
    recover_distance,
    recover_distances,
    rescale_for_focal,
)
