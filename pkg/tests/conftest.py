# tests/conftest.py
"""
Shared fixtures: KITTI-style projection matrices, toy boxes and helpers that
write label, calibration and prediction files into a temporary directory.
"""

import json
from pathlib import Path
from typing import Iterable, List, Optional

import pytest

from mono3d.core.boxes import ry_to_alpha, yaw_encode
from mono3d.core.camera import ProjectionMatrix, focal_length, project_to_pixel
from mono3d.core.distance import decompose_distance
from mono3d.core.structures import Box2D, Box3D, CameraPoint, PhysicalSize
from mono3d.kitti.calibration import format_calib
from mono3d.kitti.labels import ObjectLabel, format_label_file
from mono3d.losses.regression import normalize_keypoint

# Left color camera of a KITTI training frame (non-zero fourth column).
KITTI_P2 = [
    7.215377e02, 0.0, 6.095593e02, 4.485728e01,
    0.0, 7.215377e02, 1.728540e02, 2.163791e-01,
    0.0, 0.0, 1.0, 2.745884e-03,
]


# --- Fixtures ---

@pytest.fixture
def kitti_P() -> ProjectionMatrix:
    return ProjectionMatrix(KITTI_P2)


@pytest.fixture
def simple_P() -> ProjectionMatrix:
    return ProjectionMatrix.from_intrinsics(700.0, 700.0, 600.0, 180.0)


@pytest.fixture
def car_size() -> PhysicalSize:
    return PhysicalSize(W=1.6, H=1.5, L=3.9)


@pytest.fixture
def car_box(car_size) -> Box3D:
    return Box3D(center=CameraPoint(2.0, 1.0, 20.0), size=car_size, ry=0.3)


# --- Helpers ---

def make_label(
    box: Box3D,
    category: str = "Car",
    bbox=(500.0, 150.0, 600.0, 220.0),
    truncation: Optional[float] = 0.0,
    occlusion: Optional[int] = 0,
    score: Optional[float] = None,
) -> ObjectLabel:
    """A label for `box`; alpha is consistent with the box position."""
    alpha = ry_to_alpha(box.ry, box.center.x, box.center.z)
    return ObjectLabel.from_box3d(
        category=category,
        box=box,
        box2d=Box2D(*bbox),
        alpha=alpha,
        score=score,
        truncation=truncation,
        occlusion=occlusion,
    )


def write_label_dir(directory: Path, labels_by_image: dict) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    for image_id, labels in labels_by_image.items():
        (directory / f"{image_id}.txt").write_text(format_label_file(labels), encoding="utf-8")
    return directory


def write_calib_dir(directory: Path, image_ids: Iterable[str], P: ProjectionMatrix) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    for image_id in image_ids:
        text = "P0: 1 0 0 0 0 1 0 0 0 0 1 0\n" + format_calib(P)
        (directory / f"{image_id}.txt").write_text(text, encoding="utf-8")
    return directory


def prediction_for(
    image_id: str,
    P: ProjectionMatrix,
    box: Box3D,
    bbox=(500.0, 150.0, 600.0, 220.0),
    score: float = 0.9,
    sigma_H: float = 0.05,
    sigma_hrec: float = 1e-4,
    category: str = "Car",
) -> dict:
    """A prediction whose factors, keypoint and yaw reproduce `box` exactly."""
    kpt, depth = project_to_pixel(P, box.center)
    factors = decompose_distance(focal_length(P), box.size.H, depth)
    proposal = Box2D(*bbox)
    t = normalize_keypoint(proposal, kpt)
    yaw = yaw_encode(ry_to_alpha(box.ry, box.center.x, box.center.z))
    return {
        "image_id": image_id,
        "cls": category,
        "score": score,
        "box2d": list(bbox),
        "center_t": [t.t1, t.t2],
        "size": [box.size.W, box.size.H, box.size.L],
        "yaw": [yaw.sin_t, yaw.cos_t],
        "H": factors.H,
        "h_rec": factors.h_rec,
        "sigma_H": sigma_H,
        "sigma_hrec": sigma_hrec,
    }


def write_predictions(path: Path, records: List[dict]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path
