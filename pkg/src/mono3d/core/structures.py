# src/mono3d/core/structures.py
"""
Immutable value types shared by the geometry, loss and evaluation modules.

Camera frame convention throughout: x right, y down, z forward, meters.
Pixel coordinates: u right, v down.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..exceptions import DegenerateEncoding, DegenerateProposal, InvalidSize

# --- Points ---


@dataclass(frozen=True)
class CameraPoint:
    """A point in the camera frame (meters)."""
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_array(cls, values) -> "CameraPoint":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)


@dataclass(frozen=True)
class Keypoint:
    """A point on the image plane (pixels)."""
    u: float
    v: float


# --- Boxes ---


@dataclass(frozen=True)
class PhysicalSize:
    """Physical width, height and length of an object (meters)."""
    W: float
    H: float
    L: float

    def __post_init__(self):
        for name in ("W", "H", "L"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise InvalidSize(f"{name} must be a positive finite length, got {value}")

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.W, self.H, self.L)


@dataclass(frozen=True)
class Box2D:
    """Axis-aligned image box given by its top-left and bottom-right corners."""
    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise DegenerateProposal(
                f"2D box needs x1 < x2 and y1 < y2, got "
                f"({self.x1}, {self.y1}, {self.x2}, {self.y2})"
            )

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def height(self) -> float:
        return self.y2 - self.y1

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.x1, self.y1, self.x2, self.y2)


@dataclass(frozen=True)
class Box3D:
    """
    3D bounding box in the camera frame.

    `center` is the geometric center of the cuboid (not the bottom face used
    by KITTI label files); `ry` is the egocentric yaw about the camera y-axis.
    """
    center: CameraPoint
    size: PhysicalSize
    ry: float


# --- Orientation ---


@dataclass(frozen=True)
class YawEncoding:
    """Yaw angle encoded as (sin, cos); only normalized encodings lie on the unit circle."""
    sin_t: float
    cos_t: float

    def normalize(self) -> "YawEncoding":
        norm = math.hypot(self.sin_t, self.cos_t)
        if norm == 0.0:
            raise DegenerateEncoding("cannot normalize a zero (sin, cos) pair")
        return YawEncoding(self.sin_t / norm, self.cos_t / norm)
