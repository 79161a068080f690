# src/mono3d/kitti/difficulty.py
"""
KITTI difficulty strata.

Thresholds follow the KITTI object devkit:

    level      min bbox height   max occlusion   max truncation
    Easy       40 px             0               0.15
    Moderate   25 px             1               0.30
    Hard       25 px             2               0.50

Objects meeting none of the rows (or lacking truncation/occlusion
annotations) are Ignored.
"""

from enum import IntEnum
from typing import NamedTuple, Tuple

from .labels import ObjectLabel


class Difficulty(IntEnum):
    """Ordered difficulty levels; IGNORED sorts after HARD."""
    EASY = 0
    MODERATE = 1
    HARD = 2
    IGNORED = 3

    @classmethod
    def from_name(cls, name: str) -> "Difficulty":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown difficulty {name!r}") from None

    @property
    def label(self) -> str:
        return self.name.lower()


class DifficultyThreshold(NamedTuple):
    level: Difficulty
    min_height: float
    max_occlusion: int
    max_truncation: float


DIFFICULTY_THRESHOLDS: Tuple[DifficultyThreshold, ...] = (
    DifficultyThreshold(Difficulty.EASY, 40.0, 0, 0.15),
    DifficultyThreshold(Difficulty.MODERATE, 25.0, 1, 0.30),
    DifficultyThreshold(Difficulty.HARD, 25.0, 2, 0.50),
)

EVALUATED_DIFFICULTIES = (Difficulty.EASY, Difficulty.MODERATE, Difficulty.HARD)


def assign_difficulty(label: ObjectLabel) -> Difficulty:
    """Easiest level whose height, occlusion and truncation limits the label meets."""
    if label.is_dontcare or label.truncation is None or label.occlusion is None:
        return Difficulty.IGNORED
    height = label.bbox_height
    for row in DIFFICULTY_THRESHOLDS:
        if (
            height >= row.min_height
            and label.occlusion <= row.max_occlusion
            and label.truncation <= row.max_truncation
        ):
            return row.level
    return Difficulty.IGNORED
