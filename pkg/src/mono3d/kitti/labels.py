# src/mono3d/kitti/labels.py
"""
KITTI label and detection file parsing and formatting.

Line grammar (whitespace separated, one object per line):

    type truncated occluded alpha x1 y1 x2 y2 h w l x y z rotation_y [score]

15 fields for ground truth, 16 for detections. `x y z` is the BOTTOM-face
center of the box in camera coordinates; lifting to Box3D moves it to the
geometric center (y - h/2). A truncation or occlusion of -1 means "not
annotated" and is kept as None. DontCare lines carry placeholder values
and are not validated beyond being numeric.

Canonical output: fixed 6 decimals for reals, integers for occlusion,
single spaces, LF line endings.
"""

import logging
import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.structures import Box2D, Box3D, CameraPoint, PhysicalSize
from ..exceptions import (
    FieldCountError,
    GeometryError,
    NumericParseError,
    RecordValueError,
)

logger = logging.getLogger(__name__)

DONTCARE = "DontCare"
GT_FIELD_COUNT = 15
DETECTION_FIELD_COUNT = 16
# Slack on the [-pi, pi] angle range for values rounded in files.
ANGLE_TOLERANCE = 1e-6

FIELD_NAMES = (
    "type", "truncated", "occluded", "alpha",
    "bbox_x1", "bbox_y1", "bbox_x2", "bbox_y2",
    "height", "width", "length",
    "loc_x", "loc_y", "loc_z",
    "rotation_y", "score",
)


class ObjectLabel(BaseModel):
    """One line of a KITTI label (or detection) file, with raw file values."""
    model_config = ConfigDict(frozen=True)

    category: str = Field(..., min_length=1, description="Object type, e.g. 'Car' or 'DontCare'.")
    truncation: Optional[float] = Field(None, ge=0, le=1, description="Truncation in [0, 1]; None if not annotated.")
    occlusion: Optional[int] = Field(None, ge=0, le=3, description="Occlusion state 0..3; None if not annotated.")
    alpha: float = Field(..., description="Observation angle (radians).")
    bbox: Tuple[float, float, float, float] = Field(..., description="2D box x1, y1, x2, y2 (pixels).")
    dimensions: Tuple[float, float, float] = Field(..., description="h, w, l in file order (meters).")
    location: Tuple[float, float, float] = Field(..., description="Bottom-face center x, y, z (meters).")
    rotation_y: float = Field(..., description="Egocentric yaw (radians).")
    score: Optional[float] = Field(None, description="Detection confidence; absent for ground truth.")

    @model_validator(mode="after")
    def _check_geometry(self) -> "ObjectLabel":
        if self.is_dontcare:
            return self
        for name in ("alpha", "rotation_y"):
            value = getattr(self, name)
            if abs(value) > math.pi + ANGLE_TOLERANCE:
                raise ValueError(f"{name}={value} outside [-pi, pi]")
        Box2D(*self.bbox)
        h, w, l = self.dimensions
        PhysicalSize(W=w, H=h, L=l)
        return self

    @property
    def is_dontcare(self) -> bool:
        return self.category == DONTCARE

    @property
    def bbox_height(self) -> float:
        return self.bbox[3] - self.bbox[1]

    @property
    def box2d(self) -> Box2D:
        return Box2D(*self.bbox)

    @property
    def size(self) -> PhysicalSize:
        h, w, l = self.dimensions
        return PhysicalSize(W=w, H=h, L=l)

    @property
    def box3d(self) -> Box3D:
        """Box with the geometric center (bottom-face y moved up by h/2)."""
        size = self.size
        x, y, z = self.location
        return Box3D(center=CameraPoint(x, y - size.H / 2.0, z), size=size, ry=self.rotation_y)

    @classmethod
    def from_box3d(
        cls,
        category: str,
        box: Box3D,
        box2d: Box2D,
        alpha: float,
        score: Optional[float] = None,
        truncation: Optional[float] = None,
        occlusion: Optional[int] = None,
    ) -> "ObjectLabel":
        """Build a file record from a box with a geometric center."""
        c, size = box.center, box.size
        return cls(
            category=category,
            truncation=truncation,
            occlusion=occlusion,
            alpha=alpha,
            bbox=box2d.as_tuple(),
            dimensions=(size.H, size.W, size.L),
            location=(c.x, c.y + size.H / 2.0, c.z),
            rotation_y=box.ry,
            score=score,
        )


# --- Parsing ---


def _parse_float(token: str, line_no: int, field: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise NumericParseError(f"cannot parse {token!r} as a number", line=line_no, field=field) from None
    if not math.isfinite(value):
        raise NumericParseError(f"non-finite value {token!r}", line=line_no, field=field)
    return value


def parse_label_line(line: str, line_no: int = 1) -> ObjectLabel:
    """Parse a single 15- or 16-field label line."""
    fields = line.split()
    if len(fields) not in (GT_FIELD_COUNT, DETECTION_FIELD_COUNT):
        raise FieldCountError(
            f"expected {GT_FIELD_COUNT} or {DETECTION_FIELD_COUNT} fields, got {len(fields)}",
            line=line_no,
        )
    values = [_parse_float(tok, line_no, name) for tok, name in zip(fields[1:], FIELD_NAMES[1:])]
    truncation, occlusion_raw = values[0], values[1]
    if not occlusion_raw.is_integer():
        raise NumericParseError(f"occlusion must be an integer, got {fields[2]!r}", line=line_no, field="occluded")

    try:
        return ObjectLabel(
            category=fields[0],
            truncation=None if truncation == -1.0 else truncation,
            occlusion=None if occlusion_raw == -1.0 else int(occlusion_raw),
            alpha=values[2],
            bbox=tuple(values[3:7]),
            dimensions=tuple(values[7:10]),
            location=tuple(values[10:13]),
            rotation_y=values[13],
            score=values[14] if len(values) == 15 else None,
        )
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first.get("loc", ())) or None
        raise RecordValueError(first.get("msg", str(e)), line=line_no, field=field) from None
    except GeometryError as e:
        raise RecordValueError(str(e), line=line_no) from None


def parse_label_file(text: str) -> List[ObjectLabel]:
    """Parse every non-blank line of a label or detection file."""
    labels = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        labels.append(parse_label_line(line, line_no))
    logger.debug(f"Parsed {len(labels)} label(s)")
    return labels


# --- Formatting ---


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def format_label_line(label: ObjectLabel) -> str:
    """Canonical single-line representation (no trailing newline)."""
    parts = [
        label.category,
        _fmt(-1.0 if label.truncation is None else label.truncation),
        str(-1 if label.occlusion is None else label.occlusion),
        _fmt(label.alpha),
        *(_fmt(v) for v in label.bbox),
        *(_fmt(v) for v in label.dimensions),
        *(_fmt(v) for v in label.location),
        _fmt(label.rotation_y),
    ]
    if label.score is not None:
        parts.append(_fmt(label.score))
    return " ".join(parts)


def format_label_file(labels: List[ObjectLabel]) -> str:
    """Canonical file text; empty for no labels."""
    return "".join(format_label_line(label) + "\n" for label in labels)
