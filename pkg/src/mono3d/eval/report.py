# src/mono3d/eval/report.py
"""
Evaluation report model and its renderings.

JSON schema (keys sorted on output):

    {
      "ap_3d":  {"easy": 0.91, "moderate": 0.78, "hard": null},
      "ap_bev": {...},
      "category": "Car", "difficulty": "moderate",
      "iou_thresh": 0.7, "score_mode": "raw",
      "distance_bins": [{"label": "0-20", "lo": 0.0, "hi": 20.0,
                         "mean_abs_error": 0.41, "count": 12}, ...],
      "size_errors": {"S & F & B": {"Length": ..., "Width": ..., "Height": ...}, ...},
      "pcc": -0.47
    }

An AP of null means no admissible ground truth at that difficulty.
"""

import csv
import io
import json
import logging
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .average_precision import PRCurve
from .statistics import SIZE_DIMENSIONS, SIZE_SECTORS, BinnedError

logger = logging.getLogger(__name__)

MISSING_CELL = "-"


class EvalReport(BaseModel):
    """Metrics of one evaluation run."""
    model_config = ConfigDict(frozen=True)

    category: str = Field(..., description="Evaluated object category.")
    difficulty: str = Field(..., description="Difficulty the error statistics were matched at.")
    iou_thresh: float = Field(..., gt=0, le=1)
    score_mode: str = Field(..., description="Ranking key: 'raw' or 'composite'.")
    ap_3d: Dict[str, Optional[float]] = Field(default_factory=dict)
    ap_bev: Dict[str, Optional[float]] = Field(default_factory=dict)
    distance_bins: List[BinnedError] = Field(default_factory=list)
    size_errors: Dict[str, Dict[str, Optional[float]]] = Field(default_factory=dict)
    pcc: Optional[float] = Field(None, ge=-1, le=1, description="PCC of relative H and h_rec errors.")

    @field_validator("ap_3d", "ap_bev")
    @classmethod
    def _check_ap(cls, value: Dict[str, Optional[float]]) -> Dict[str, Optional[float]]:
        for level, ap in value.items():
            if ap is not None and not 0.0 <= ap <= 1.0:
                raise ValueError(f"AP for {level} outside [0, 1]: {ap}")
        return value

    def to_json(self) -> str:
        """Deterministic JSON text (sorted keys, trailing newline)."""
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def pr_curve_csv(curve: PRCurve) -> str:
    """`recall,precision` rows, one per confidence threshold."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["recall", "precision"])
    for recall, precision in curve.points:
        writer.writerow([repr(float(recall)), repr(float(precision))])
    return buffer.getvalue()


def _cell(value: Optional[float]) -> str:
    return MISSING_CELL if value is None else f"{value:.3f}"


def _render(header: List[str], rows: List[List[str]]) -> str:
    widths = [max(len(row[i]) for row in [header] + rows) for i in range(len(header))]
    lines = [" | ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in [header] + rows]
    lines.insert(1, "-+-".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"


def format_size_error_table(size_errors: Dict[str, Dict[str, Optional[float]]]) -> str:
    """Rows Length/Width/Height, columns 'S & F & B', 'S', 'F & B', 3 decimals."""
    header = [""] + list(SIZE_SECTORS)
    rows = [
        [dim] + [_cell(size_errors.get(sector, {}).get(dim)) for sector in SIZE_SECTORS]
        for dim in SIZE_DIMENSIONS
    ]
    return _render(header, rows)


def format_distance_table(bins: List[BinnedError]) -> str:
    """One column per distance bin plus 'all'; mean error (m) and object count rows."""
    header = [""] + [b.label for b in bins]
    rows = [
        ["error (m)"] + [_cell(b.mean_abs_error) for b in bins],
        ["count"] + [str(b.count) for b in bins],
    ]
    return _render(header, rows)
