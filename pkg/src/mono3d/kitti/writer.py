# src/mono3d/kitti/writer.py
"""
Writing recovered detections as KITTI 16-field detection lines.
"""

import logging
from typing import Sequence, Tuple

from ..core.boxes import yaw_decode
from ..core.structures import Box3D
from ..scoring.confidence import DetectionRecord
from .labels import ObjectLabel, format_label_file

logger = logging.getLogger(__name__)


def detection_to_label(record: DetectionRecord, box: Box3D) -> ObjectLabel:
    """
    File record for a detection: alpha is the decoded allocentric yaw,
    location is moved back to the bottom-face center, truncation and
    occlusion are written as -1 (not annotated).
    """
    return ObjectLabel.from_box3d(
        category=record.cls,
        box=box,
        box2d=record.box2d,
        alpha=yaw_decode(record.yaw),
        score=record.score,
    )


def write_detections(detections: Sequence[Tuple[DetectionRecord, Box3D]]) -> str:
    """Byte-deterministic detection file text (empty string for no detections)."""
    labels = [detection_to_label(record, box) for record, box in detections]
    return format_label_file(labels)
