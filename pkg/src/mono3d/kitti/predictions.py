# src/mono3d/kitti/predictions.py
"""
JSON-lines prediction files consumed by `mono3d recover`.

One JSON object per line:

    {"image_id": "000001", "cls": "Car", "score": 0.93,
     "box2d": [x1, y1, x2, y2], "center_t": [t1, t2],
     "size": [W, H, L], "yaw": [sin, cos],
     "H": 1.52, "h_rec": 0.0213, "sigma_H": 0.05, "sigma_hrec": 0.0007}

`center_t` is the projected 3D center normalized by box2d; `yaw` encodes the
allocentric angle; `H` and `h_rec` are the distance factors.
"""

import json
import logging
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..core.distance import DistanceFactors
from ..core.structures import Box2D, PhysicalSize, YawEncoding
from ..exceptions import Mono3DError, PredictionSchemaError
from ..losses.regression import NormalizedKeypoint, denormalize_keypoint
from ..scoring.confidence import DetectionRecord

logger = logging.getLogger(__name__)


class PredictionRecord(BaseModel):
    """Raw network outputs for one object."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    image_id: str = Field(..., min_length=1, description="Image the object was detected in.")
    cls: str = Field(..., min_length=1, description="Category label.")
    score: float = Field(..., ge=0, le=1, description="Classification confidence.")
    box2d: Tuple[float, float, float, float] = Field(..., description="Proposal / 2D box x1, y1, x2, y2.")
    center_t: Tuple[float, float] = Field(..., description="Proposal-normalized projected center.")
    size: Tuple[float, float, float] = Field(..., description="Physical W, H, L (meters).")
    yaw: Tuple[float, float] = Field(..., description="(sin, cos) of the allocentric yaw.")
    H: float = Field(..., gt=0, description="Physical height factor (meters).")
    h_rec: float = Field(..., gt=0, description="Reciprocal visual height factor (1/pixels).")
    sigma_H: float = Field(..., gt=0, description="Uncertainty of H.")
    sigma_hrec: float = Field(..., gt=0, description="Uncertainty of h_rec.")

    def to_detection(self, focal: float) -> DetectionRecord:
        """Lift to a DetectionRecord, denormalizing the center keypoint."""
        box2d = Box2D(*self.box2d)
        return DetectionRecord(
            cls=self.cls,
            score=self.score,
            box2d=box2d,
            center_kpt=denormalize_keypoint(box2d, NormalizedKeypoint(*self.center_t)),
            size=PhysicalSize(*self.size),
            yaw=YawEncoding(*self.yaw),
            factors=DistanceFactors(H=self.H, h_rec=self.h_rec),
            sigma_H=self.sigma_H,
            sigma_hrec=self.sigma_hrec,
            focal=focal,
        )


def parse_prediction_lines(text: str) -> List[PredictionRecord]:
    """Parse every non-blank line; errors carry the 1-based line number."""
    records = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as e:
            raise PredictionSchemaError(f"invalid JSON: {e.msg}", line=line_no) from None
        if not isinstance(payload, dict):
            raise PredictionSchemaError("each line must be a JSON object", line=line_no)
        try:
            record = PredictionRecord(**payload)
            # Surface geometry problems (degenerate boxes, sizes, yaw) at parse time.
            Box2D(*record.box2d)
            PhysicalSize(*record.size)
            YawEncoding(*record.yaw).normalize()
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(part) for part in first.get("loc", ())) or None
            raise PredictionSchemaError(first.get("msg", str(e)), line=line_no, field=field) from None
        except (Mono3DError, TypeError) as e:
            raise PredictionSchemaError(str(e), line=line_no) from None
        records.append(record)
    return records
