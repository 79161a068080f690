"""
Confidence re-scoring and detection ranking.
"""

from .confidence import (
    DetectionRecord,
    ScoreMode,
    composite_confidence,
    rank_detections,
    ranking_key,
)
