# src/mono3d/core/distance.py
"""
Geometry-based distance decomposition.

The distance Z of an object's center factors into the focal length f, the
physical height H and the reciprocal visual height h_rec = 1/h:

    Z = f * H / h = f * H * h_rec

h_rec (not h) is the stored factor because it is the regressed quantity.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import InvalidFactor
from .boxes import alpha_to_ry, yaw_decode
from .camera import ProjectionMatrix, backproject, focal_length
from .structures import Box3D, CameraPoint, Keypoint, PhysicalSize, YawEncoding

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DistanceFactors:
    """Physical height H (meters) and reciprocal projected visual height h_rec (1/pixels)."""
    H: float
    h_rec: float

    def __post_init__(self):
        _require_positive(H=self.H, h_rec=self.h_rec)

    @property
    def h(self) -> float:
        """Visual height in pixels (display only)."""
        return 1.0 / self.h_rec


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value) or value <= 0.0:
            raise InvalidFactor(f"{name} must be positive and finite, got {value}")


def recover_distance(f: float, factors: DistanceFactors) -> float:
    """Z = f * H * h_rec."""
    _require_positive(f=f, H=factors.H, h_rec=factors.h_rec)
    return f * factors.H * factors.h_rec


def decompose_distance(f: float, H: float, Z: float) -> DistanceFactors:
    """Inverse of recover_distance: h_rec = Z / (f * H)."""
    _require_positive(f=f, H=H, Z=Z)
    return DistanceFactors(H=H, h_rec=Z / (f * H))


def recover_distances(f, H, h_rec) -> np.ndarray:
    """Vectorized recover_distance over broadcastable arrays."""
    f, H, h_rec = (np.asarray(v, dtype=float) for v in (f, H, h_rec))
    for name, arr in (("f", f), ("H", H), ("h_rec", h_rec)):
        if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
            raise InvalidFactor(f"all {name} values must be positive and finite")
    return f * H * h_rec


def decompose_distances(f, H, Z) -> np.ndarray:
    """Vectorized decompose_distance; returns the h_rec array."""
    f, H, Z = (np.asarray(v, dtype=float) for v in (f, H, Z))
    for name, arr in (("f", f), ("H", H), ("Z", Z)):
        if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
            raise InvalidFactor(f"all {name} values must be positive and finite")
    return Z / (f * H)


def rescale_for_focal(factors: DistanceFactors, f_from: float, f_to: float) -> DistanceFactors:
    """
    Ground-truth factors of the same object seen through a camera with focal f_to.

    H is a physical property and does not change; h_rec scales by f_from / f_to,
    so the recovered distance is identical for both cameras.
    """
    _require_positive(f_from=f_from, f_to=f_to)
    return DistanceFactors(H=factors.H, h_rec=factors.h_rec * f_from / f_to)


def recover_center(P: ProjectionMatrix, p: Keypoint, factors: DistanceFactors) -> CameraPoint:
    """Full inference path: Z from the factors, then back-projection of the center keypoint."""
    Z = recover_distance(focal_length(P), factors)
    return backproject(P, p, Z)


def recover_box(
    P: ProjectionMatrix,
    p: Keypoint,
    factors: DistanceFactors,
    size: PhysicalSize,
    yaw: YawEncoding,
    yaw_is_allocentric: bool = True,
) -> Box3D:
    """
    Assemble a 3D box from decomposed predictions.

    The yaw is decoded from its (sin, cos) encoding; allocentric angles are
    converted to egocentric ry using the recovered center.
    """
    center = recover_center(P, p, factors)
    theta = yaw_decode(yaw)
    ry = alpha_to_ry(theta, center.x, center.z) if yaw_is_allocentric else theta
    logger.debug(f"Recovered box at {center} with ry={ry:.4f}")
    return Box3D(center=center, size=size, ry=ry)
