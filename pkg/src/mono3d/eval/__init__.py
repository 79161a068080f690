"""
Evaluation metrics: rotated BEV / 3D IoU, AP|R40, distance-binned and
yaw-sector errors, factor-error correlation and the report model.
"""

from .iou import bev_intersection_area, bev_iou, bev_polygon, clip_polygon, iou_3d, polygon_area
from .average_precision import (
    DEFAULT_IOU_THRESHOLD,
    R40_SAMPLES,
    APResult,
    EvalDetection,
    MatchedPair,
    PRCurve,
    ap_r40,
    evaluate_ap,
    sample_precisions,
)
from .statistics import (
    DEFAULT_DISTANCE_BINS,
    BinnedError,
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
from .report import EvalReport, format_distance_table, format_size_error_table, pr_curve_csv
