# src/mono3d/scoring/confidence.py
"""
Detection records and confidence re-scoring.

The product f * H * sigma_hrec acts as a distance-uncertainty proxy, so
detections can be ranked by score / (f * H * sigma_hrec) instead of the raw
classification score. The composite value is a ranking key only; it is not
clamped or renormalized.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

from ..core.distance import DistanceFactors
from ..core.structures import Box2D, Keypoint, PhysicalSize, YawEncoding
from ..exceptions import InvalidFactor

logger = logging.getLogger(__name__)


class ScoreMode(str, Enum):
    """Which key rank_detections sorts by."""
    RAW = "raw"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class DetectionRecord:
    """
    Everything predicted for one object.

    `focal` is the vertical focal length of the source image's calibration;
    it is required for composite ranking because images may come from
    cameras with different intrinsics.
    """
    cls: str
    score: float
    box2d: Box2D
    center_kpt: Keypoint
    size: PhysicalSize
    yaw: YawEncoding
    factors: DistanceFactors
    sigma_H: float
    sigma_hrec: float
    focal: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score must lie in [0, 1], got {self.score}")
        if not (self.sigma_H > 0.0 and self.sigma_hrec > 0.0):
            raise InvalidFactor(
                f"uncertainties must be positive, got sigma_H={self.sigma_H}, "
                f"sigma_hrec={self.sigma_hrec}"
            )

    def composite(self) -> float:
        """Composite confidence of this record using its own focal length and predicted H."""
        if self.focal is None:
            raise InvalidFactor(f"detection of class {self.cls!r} has no focal length attached")
        return composite_confidence(self.score, self.focal, self.factors.H, self.sigma_hrec)


def composite_confidence(score: float, f: float, H: float, sigma_hrec: float) -> float:
    """score / (f * H * sigma_hrec)."""
    for name, value in (("f", f), ("H", H), ("sigma_hrec", sigma_hrec)):
        if not math.isfinite(value) or value <= 0.0:
            raise InvalidFactor(f"{name} must be positive and finite, got {value}")
    if score < 0.0:
        raise InvalidFactor(f"score must be non-negative, got {score}")
    return score / (f * H * sigma_hrec)


def ranking_key(det: DetectionRecord, mode: ScoreMode) -> float:
    if ScoreMode(mode) is ScoreMode.COMPOSITE:
        return det.composite()
    return det.score


def rank_detections(
    dets: Sequence[DetectionRecord], mode: ScoreMode = ScoreMode.RAW
) -> List[DetectionRecord]:
    """Stable descending sort by the chosen key; ties keep their input order."""
    keys = [ranking_key(det, mode) for det in dets]
    order = sorted(range(len(dets)), key=lambda i: -keys[i])
    return [dets[i] for i in order]
