# src/mono3d/core/camera.py
"""
Pinhole projection model.

A ProjectionMatrix wraps the 3x4 matrix P that maps homogeneous camera points
to homogeneous pixels. Matrices are canonically normalized at construction
(depth row scaled so that entry (2, 2) equals 1), which makes the third
homogeneous component metric depth.

Both scalar helpers (one point at a time) and batch helpers working on numpy
arrays are provided; the batch versions are what the Monte-Carlo checks use.
"""

import logging
from typing import Iterable, Tuple

import numpy as np

from ..exceptions import (
    InvalidProjection,
    NonPositiveDepth,
    NonPositiveFocal,
    SingularProjection,
)
from .structures import CameraPoint, Keypoint

logger = logging.getLogger(__name__)

# Relative determinant threshold below which the left 3x3 block is treated as singular.
SINGULAR_TOLERANCE = 1e-12


class ProjectionMatrix:
    """
    Immutable, canonically normalized 3x4 camera projection matrix.

    Accepts anything numpy can turn into a 3x4 (or flat 12-element) float
    array. Scaling every entry by a non-zero constant yields the same matrix.
    """

    __slots__ = ("_matrix",)

    def __init__(self, matrix: Iterable):
        m = np.array(matrix, dtype=float)
        if m.shape == (12,):
            m = m.reshape(3, 4)
        if m.shape != (3, 4):
            raise InvalidProjection(f"projection matrix must be 3x4, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidProjection("projection matrix contains non-finite entries")
        depth = m[2, 2]
        if depth == 0.0:
            raise InvalidProjection("entry (2, 2) of the projection matrix must be nonzero")
        m = m / depth
        if m[0, 0] <= 0.0 or m[1, 1] <= 0.0:
            raise NonPositiveFocal(
                f"focal entries must be positive, got fx={m[0, 0]}, fy={m[1, 1]}"
            )
        m.setflags(write=False)
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        """The normalized 3x4 matrix (read-only view)."""
        return self._matrix

    @property
    def fx(self) -> float:
        return float(self._matrix[0, 0])

    @property
    def fy(self) -> float:
        return float(self._matrix[1, 1])

    @property
    def principal_point(self) -> Keypoint:
        return Keypoint(float(self._matrix[0, 2]), float(self._matrix[1, 2]))

    def to_list(self) -> list:
        """Row-major list of the 12 entries."""
        return [float(v) for v in self._matrix.reshape(-1)]

    @classmethod
    def from_intrinsics(
        cls, fx: float, fy: float, cx: float, cy: float, tx: float = 0.0
    ) -> "ProjectionMatrix":
        """Build P = [[fx, 0, cx, tx], [0, fy, cy, 0], [0, 0, 1, 0]]."""
        return cls([[fx, 0.0, cx, tx], [0.0, fy, cy, 0.0], [0.0, 0.0, 1.0, 0.0]])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectionMatrix):
            return NotImplemented
        return bool(np.array_equal(self._matrix, other._matrix))

    def __hash__(self) -> int:
        return hash(self._matrix.tobytes())

    def __repr__(self) -> str:
        return f"ProjectionMatrix({self._matrix.tolist()!r})"


def focal_length(P: ProjectionMatrix) -> float:
    """
    Vertical focal length fy of P, in pixels.

    fy is the focal length relevant to the visual height of an object, since
    that height is a vertical image extent.
    """
    f = P.fy
    if f <= 0.0:
        raise NonPositiveFocal(f"vertical focal length must be positive, got {f}")
    return f


def project_to_pixel(P: ProjectionMatrix, pt: CameraPoint) -> Tuple[Keypoint, float]:
    """
    Project a camera point to pixels.

    Returns the keypoint and the third homogeneous component w, which is the
    metric depth for a canonically normalized P.
    """
    hom = P.matrix @ np.array([pt.x, pt.y, pt.z, 1.0])
    w = float(hom[2])
    if w <= 0.0:
        raise NonPositiveDepth(f"point {pt} projects with non-positive depth {w}")
    return Keypoint(float(hom[0] / w), float(hom[1] / w)), w


def backproject(P: ProjectionMatrix, kpt: Keypoint, Z: float) -> CameraPoint:
    """
    Recover the camera point that projects to `kpt` with depth Z.

    Solves M [x, y, z]^T = [u Z, v Z, Z]^T - t, where M is the left 3x3 block
    of P and t its fourth column.
    """
    if Z <= 0.0:
        raise NonPositiveDepth(f"depth must be positive, got {Z}")
    rhs = np.array([kpt.u * Z, kpt.v * Z, Z]) - P.matrix[:, 3]
    solution = _solve_left_block(P, rhs[:, None])
    return CameraPoint.from_array(solution[:, 0])


def project_points(P: ProjectionMatrix, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Batch projection of an (N, 3) array of camera points.

    Returns (uv, depth) with shapes (N, 2) and (N,).
    """
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    hom = points @ P.matrix[:, :3].T + P.matrix[:, 3]
    w = hom[:, 2]
    if np.any(w <= 0.0):
        raise NonPositiveDepth(f"{int(np.sum(w <= 0.0))} point(s) project with non-positive depth")
    return hom[:, :2] / w[:, None], w


def backproject_points(P: ProjectionMatrix, uv: np.ndarray, depth: np.ndarray) -> np.ndarray:
    """Batch inverse of project_points: (N, 2) pixels and (N,) depths to (N, 3) points."""
    uv = np.asarray(uv, dtype=float).reshape(-1, 2)
    depth = np.asarray(depth, dtype=float).reshape(-1)
    if np.any(depth <= 0.0):
        raise NonPositiveDepth("all depths must be positive")
    rhs = np.column_stack([uv[:, 0] * depth, uv[:, 1] * depth, depth]) - P.matrix[:, 3]
    return _solve_left_block(P, rhs.T).T


def _solve_left_block(P: ProjectionMatrix, rhs: np.ndarray) -> np.ndarray:
    left = P.matrix[:, :3]
    scale = np.linalg.norm(left) ** 3
    if abs(np.linalg.det(left)) <= SINGULAR_TOLERANCE * scale:
        raise SingularProjection("left 3x3 block of the projection matrix is singular")
    try:
        return np.linalg.solve(left, rhs)
    except np.linalg.LinAlgError as e:
        raise SingularProjection(str(e)) from e
