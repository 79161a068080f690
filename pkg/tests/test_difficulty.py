# tests/test_difficulty.py
"""
Tests for KITTI difficulty assignment.
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_label
from mono3d.core.structures import Box3D, CameraPoint, PhysicalSize
from mono3d.kitti.difficulty import Difficulty, assign_difficulty
from mono3d.kitti.labels import parse_label_line


def label_with(car_box, height, occlusion, truncation, category="Car"):
    return make_label(
        car_box, category=category, bbox=(100.0, 100.0, 150.0, 100.0 + height),
        occlusion=occlusion, truncation=truncation,
    )


@pytest.mark.parametrize(
    "height,occlusion,truncation,expected",
    [
        (40.0, 0, 0.15, Difficulty.EASY),
        (39.9, 0, 0.0, Difficulty.MODERATE),
        (60.0, 1, 0.0, Difficulty.MODERATE),
        (60.0, 0, 0.3, Difficulty.MODERATE),
        (25.0, 2, 0.5, Difficulty.HARD),
        (24.9, 0, 0.0, Difficulty.IGNORED),
        (60.0, 3, 0.0, Difficulty.IGNORED),
        (60.0, 0, 0.51, Difficulty.IGNORED),
    ],
)
def test_threshold_table(car_box, height, occlusion, truncation, expected):
    assert assign_difficulty(label_with(car_box, height, occlusion, truncation)) == expected


def test_unannotated_and_dontcare_are_ignored(car_box):
    assert assign_difficulty(label_with(car_box, 60.0, None, 0.0)) == Difficulty.IGNORED
    assert assign_difficulty(label_with(car_box, 60.0, 0, None)) == Difficulty.IGNORED
    dontcare = parse_label_line("DontCare -1 -1 -10 503.89 169.71 590.61 290.13 -1 -1 -1 -1000 -1000 -1000 -10")
    assert assign_difficulty(dontcare) == Difficulty.IGNORED


def test_levels_are_ordered():
    assert Difficulty.EASY < Difficulty.MODERATE < Difficulty.HARD < Difficulty.IGNORED


def test_from_name():
    assert Difficulty.from_name(" Moderate ") == Difficulty.MODERATE
    assert Difficulty.HARD.label == "hard"
    with pytest.raises(ValueError):
        Difficulty.from_name("extreme")


# --- Monotonicity ---

BOX = Box3D(CameraPoint(2.0, 1.0, 20.0), PhysicalSize(W=1.6, H=1.5, L=3.9), ry=0.3)
heights = st.floats(1.0, 120.0)
occlusions = st.integers(0, 3)
truncations = st.floats(0.0, 1.0)


@given(heights, occlusions, truncations, heights, occlusions, truncations)
def test_worse_attributes_never_improve_difficulty(h1, o1, t1, h2, o2, t2):
    # The second label is at least as small, occluded and truncated as the first.
    easier = label_with(BOX, max(h1, h2), min(o1, o2), min(t1, t2))
    harder = label_with(BOX, min(h1, h2), max(o1, o2), max(t1, t2))
    assert assign_difficulty(harder) >= assign_difficulty(easier)
