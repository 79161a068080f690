# tests/test_statistics.py
"""
Tests for distance-binned errors, yaw-sector size errors and factor-error PCC.
"""

import math

import numpy as np
import pytest
from scipy import stats

from conftest import make_label
from mono3d.core.distance import decompose_distance
from mono3d.core.structures import Box3D, CameraPoint, PhysicalSize
from mono3d.eval.average_precision import EvalDetection, MatchedPair
from mono3d.eval.statistics import (
    SECTOR_ALL,
    SECTOR_FRONT_BACK,
    SECTOR_SIDE,
    bin_label,
    bin_ranges,
    distance_binned_error,
    factor_error_correlation,
    factor_relative_errors,
    match_distance_pairs,
    match_size_pairs,
    pearson,
    yaw_sector,
    yaw_sector_size_error,
)
from mono3d.exceptions import DegenerateSequence

FOCAL = 700.0


# --- Distance bins ---

def test_bin_ranges_and_labels():
    assert bin_ranges([0, 20, 40]) == [(0.0, 20.0), (20.0, 40.0), (40.0, math.inf)]
    assert [bin_label(lo, hi) for lo, hi in bin_ranges([0, 12.5])] == ["0-12.5", "12.5-inf"]


@pytest.mark.parametrize("edges", [[], [0, 20, 20], [10, 5], [-1, 10], [0, math.inf]])
def test_invalid_bin_edges(edges):
    with pytest.raises(ValueError):
        bin_ranges(edges)


def test_distance_binned_error():
    pairs = [(10.0, 10.5), (19.99, 19.0), (20.0, 22.0), (55.0, 54.0)]
    bins = distance_binned_error(pairs)
    assert [b.label for b in bins] == ["0-20", "20-40", "40-inf", "all"]
    assert [b.count for b in bins] == [2, 1, 1, 4]
    assert bins[0].mean_abs_error == pytest.approx((0.5 + 0.99) / 2)
    assert bins[1].mean_abs_error == pytest.approx(2.0)
    assert bins[3].mean_abs_error == pytest.approx((0.5 + 0.99 + 2.0 + 1.0) / 4)
    assert bins[2].hi is None and bins[3].lo == 0.0


def test_total_covers_objects_below_first_edge():
    bins = distance_binned_error([(5.0, 6.0), (15.0, 15.5), (25.0, 27.0)], edges=[10, 20])
    assert [b.label for b in bins] == ["10-20", "20-inf", "all"]
    assert [b.count for b in bins] == [1, 1, 3]
    total = bins[-1]
    assert total.lo == 0.0 and total.hi is None
    assert total.mean_abs_error == pytest.approx((1.0 + 0.5 + 2.0) / 3)


def test_empty_bins_report_null():
    bins = distance_binned_error([(5.0, 5.0)], edges=[0, 20, 40])
    assert bins[0].mean_abs_error == 0.0
    assert bins[1].mean_abs_error is None and bins[1].count == 0
    assert distance_binned_error([])[-1].mean_abs_error is None


# --- Size errors ---

@pytest.mark.parametrize(
    "alpha,sector",
    [(0.0, SECTOR_FRONT_BACK), (math.pi, SECTOR_FRONT_BACK), (-0.7, SECTOR_FRONT_BACK),
     (math.pi / 2, SECTOR_SIDE), (-2.0, SECTOR_SIDE), (2.5, SECTOR_FRONT_BACK), (7.0, SECTOR_FRONT_BACK)],
)
def test_yaw_sectors(alpha, sector):
    assert yaw_sector(alpha) == sector


def test_yaw_sector_size_error():
    gt = PhysicalSize(W=1.6, H=1.5, L=4.0)
    pairs = [
        (gt, PhysicalSize(W=1.7, H=1.5, L=3.0), math.pi / 2),
        (gt, PhysicalSize(W=1.6, H=1.3, L=4.2), 0.1),
    ]
    table = yaw_sector_size_error(pairs)
    assert table[SECTOR_SIDE]["Length"] == pytest.approx(1.0)
    assert table[SECTOR_FRONT_BACK]["Height"] == pytest.approx(0.2)
    assert table[SECTOR_ALL]["Length"] == pytest.approx(0.6)
    assert table[SECTOR_ALL]["Width"] == pytest.approx(0.05)


def test_size_error_with_empty_sector():
    gt = PhysicalSize(W=1.6, H=1.5, L=4.0)
    table = yaw_sector_size_error([(gt, gt, 0.0)])
    assert table[SECTOR_SIDE] == {"Length": None, "Width": None, "Height": None}
    assert table[SECTOR_FRONT_BACK]["Length"] == 0.0


# --- Pearson ---

def test_pearson_matches_scipy():
    rng = np.random.default_rng(4)
    for _ in range(50):
        x = rng.normal(size=30)
        y = 0.6 * x + rng.normal(size=30)
        assert pearson(x, y) == pytest.approx(stats.pearsonr(x, y)[0], abs=1e-10)


def test_pearson_perfect_correlation_is_clamped():
    x = np.linspace(0.0, 1.0, 11)
    assert pearson(x, 3.0 * x + 1.0) == pytest.approx(1.0)
    assert -1.0 <= pearson(x, -x) <= 1.0


def test_pearson_degenerate():
    with pytest.raises(DegenerateSequence):
        pearson([1.0], [2.0])
    with pytest.raises(DegenerateSequence):
        pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        pearson([1.0, 2.0], [1.0, 2.0, 3.0])


# --- Matches ---

def matched(gt_box: Box3D, H: float, h_rec: float, pred_z=None, pred_size=None) -> MatchedPair:
    label = make_label(gt_box)
    center = CameraPoint(gt_box.center.x, gt_box.center.y, gt_box.center.z if pred_z is None else pred_z)
    box = Box3D(center, pred_size or gt_box.size, gt_box.ry)
    detection = EvalDetection("Car", box, 0.9, H=H, h_rec=h_rec)
    return MatchedPair("000001", detection, label, 0.8)


def test_match_pairs(car_box):
    m = matched(car_box, 1.5, 0.02, pred_z=21.0)
    assert match_distance_pairs([m]) == [(20.0, 21.0)]
    gt_size, pred_size, alpha = match_size_pairs([m])[0]
    assert gt_size == car_box.size == pred_size
    assert alpha == pytest.approx(m.label.alpha)


def test_factor_relative_errors(car_box):
    gt = decompose_distance(FOCAL, car_box.size.H, car_box.center.z)
    m = matched(car_box, gt.H * 1.1, gt.h_rec * 0.95)
    err_H, err_hrec = factor_relative_errors([m], {"000001": FOCAL})
    assert err_H == pytest.approx([0.1])
    assert err_hrec == pytest.approx([-0.05])
    assert factor_relative_errors([m], {}) == ([], [])


def test_factor_error_correlation(car_box):
    gt = decompose_distance(FOCAL, car_box.size.H, car_box.center.z)
    rng = np.random.default_rng(8)
    errors = rng.normal(scale=0.05, size=(40, 2))
    matches = [matched(car_box, gt.H * (1 + a), gt.h_rec * (1 + b)) for a, b in errors]
    expected = stats.pearsonr(errors[:, 0], errors[:, 1])[0]
    assert factor_error_correlation(matches, {"000001": FOCAL}) == pytest.approx(expected, abs=1e-9)
    assert factor_error_correlation(matches[:1], {"000001": FOCAL}) is None
