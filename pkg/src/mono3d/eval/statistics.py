# src/mono3d/eval/statistics.py
"""
Error statistics over true-positive matches: distance-binned mean error,
yaw-sector size error and the Pearson correlation of factor errors.
"""

import logging
import math
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.boxes import wrap_angle
from ..core.distance import decompose_distance
from ..core.structures import PhysicalSize
from ..exceptions import DegenerateSequence
from .average_precision import MatchedPair

logger = logging.getLogger(__name__)

DEFAULT_DISTANCE_BINS: Tuple[float, ...] = (0.0, 20.0, 40.0)
TOTAL_BIN_LABEL = "all"

SECTOR_ALL = "S & F & B"
SECTOR_SIDE = "S"
SECTOR_FRONT_BACK = "F & B"
SIZE_SECTORS = (SECTOR_ALL, SECTOR_SIDE, SECTOR_FRONT_BACK)
SIZE_DIMENSIONS = ("Length", "Width", "Height")
# Half-width of the front/back band around alpha = 0 and alpha = pi.
FRONT_BACK_HALF_WIDTH = math.pi / 4.0

BinRange = Tuple[float, float]


def bin_ranges(edges: Sequence[float]) -> List[BinRange]:
    """[e0, e1), [e1, e2), ..., [e_last, inf) from strictly increasing edges."""
    edges = [float(e) for e in edges]
    if not edges:
        raise ValueError("at least one bin edge is required")
    if any(e < 0 or not math.isfinite(e) for e in edges):
        raise ValueError(f"bin edges must be finite and non-negative: {edges}")
    if any(b <= a for a, b in zip(edges, edges[1:])):
        raise ValueError(f"bin edges must be strictly increasing: {edges}")
    return list(zip(edges, edges[1:] + [math.inf]))


def bin_label(lo: float, hi: float) -> str:
    """`0-20`, `40-inf`; integral edges are printed without a decimal point."""
    def fmt(value: float) -> str:
        if math.isinf(value):
            return "inf"
        return str(int(value)) if float(value).is_integer() else f"{value:g}"
    return f"{fmt(lo)}-{fmt(hi)}"


class BinnedError(BaseModel):
    """Mean absolute distance error of the matches whose GT distance falls in [lo, hi)."""
    model_config = ConfigDict(frozen=True)

    label: str = Field(..., description="Column label, e.g. '0-20' or 'all'.")
    lo: float = Field(..., ge=0)
    hi: Optional[float] = Field(None, description="Upper edge; None means unbounded.")
    mean_abs_error: Optional[float] = Field(None, ge=0, description="Meters; None for an empty bin.")
    count: int = Field(0, ge=0)


def _binned(values: Sequence[Tuple[float, float]], edges: Sequence[float]) -> List[BinnedError]:
    """Bin (key, value) pairs by key; the last entry is the [0, inf) total."""
    ranges = bin_ranges(edges)
    ranges_with_total = ranges + [(0.0, math.inf)]
    result = []
    for index, (lo, hi) in enumerate(ranges_with_total):
        selected = [v for key, v in values if lo <= key < hi]
        result.append(BinnedError(
            label=TOTAL_BIN_LABEL if index == len(ranges) else bin_label(lo, hi),
            lo=lo,
            hi=None if math.isinf(hi) else hi,
            mean_abs_error=float(np.mean(selected)) if selected else None,
            count=len(selected),
        ))
    return result


def distance_binned_error(
    pairs: Sequence[Tuple[float, float]], edges: Sequence[float] = DEFAULT_DISTANCE_BINS
) -> List[BinnedError]:
    """
    Mean |Z_pred - Z_gt| per GT-distance bin, followed by the total over every bin.

    `pairs` are (gt Z, predicted Z) of recalled objects. Empty bins report
    count 0 and a null error.
    """
    return _binned([(gt, abs(pred - gt)) for gt, pred in pairs], edges)


def match_distance_pairs(matches: Sequence[MatchedPair]) -> List[Tuple[float, float]]:
    """(gt Z, predicted Z) of each true positive."""
    return [(m.label.location[2], m.detection.box.center.z) for m in matches]


def yaw_sector(alpha: float) -> str:
    """'F & B' when alpha lies within pi/4 of 0 or pi, 'S' otherwise."""
    a = abs(wrap_angle(alpha))
    return SECTOR_FRONT_BACK if min(a, math.pi - a) <= FRONT_BACK_HALF_WIDTH else SECTOR_SIDE


def yaw_sector_size_error(
    pairs: Sequence[Tuple[PhysicalSize, PhysicalSize, float]]
) -> Dict[str, Dict[str, Optional[float]]]:
    """
    Mean |delta| of length, width and height per yaw sector.

    `pairs` are (gt size, predicted size, gt alpha). Returns
    {sector: {dimension: mean error or None}} for the sectors
    'S & F & B' (all), 'S' and 'F & B'.
    """
    errors: Dict[str, List[Tuple[float, float, float]]] = {sector: [] for sector in SIZE_SECTORS}
    for gt, pred, alpha in pairs:
        delta = (abs(pred.L - gt.L), abs(pred.W - gt.W), abs(pred.H - gt.H))
        errors[SECTOR_ALL].append(delta)
        errors[yaw_sector(alpha)].append(delta)

    table: Dict[str, Dict[str, Optional[float]]] = {}
    for sector, deltas in errors.items():
        if deltas:
            means = np.mean(np.asarray(deltas), axis=0)
            table[sector] = {dim: float(m) for dim, m in zip(SIZE_DIMENSIONS, means)}
        else:
            table[sector] = {dim: None for dim in SIZE_DIMENSIONS}
    return table


def match_size_pairs(matches: Sequence[MatchedPair]) -> List[Tuple[PhysicalSize, PhysicalSize, float]]:
    return [(m.label.size, m.detection.box.size, m.label.alpha) for m in matches]


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient, clamped to [-1, 1]."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"pearson needs two equal-length 1-D sequences, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise DegenerateSequence(f"pearson needs at least 2 samples, got {x.size}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSequence("pearson is undefined for a constant sequence")
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def factor_relative_errors(
    matches: Sequence[MatchedPair], focals: Mapping[str, float]
) -> Tuple[List[float], List[float]]:
    """
    Relative errors of H and h_rec for matches whose detection carries factors.

    The ground-truth h_rec follows from Z = f * H * h_rec with the GT height
    and distance and the image's focal length.
    """
    err_H, err_hrec = [], []
    for m in matches:
        det = m.detection
        if det.H is None or det.h_rec is None or m.image_id not in focals:
            continue
        gt = decompose_distance(focals[m.image_id], m.label.size.H, m.label.location[2])
        err_H.append((det.H - gt.H) / gt.H)
        err_hrec.append((det.h_rec - gt.h_rec) / gt.h_rec)
    return err_H, err_hrec


def factor_error_correlation(
    matches: Sequence[MatchedPair], focals: Mapping[str, float]
) -> Optional[float]:
    """PCC between the relative H and h_rec errors; None when it is undefined."""
    err_H, err_hrec = factor_relative_errors(matches, focals)
    try:
        return pearson(err_H, err_hrec)
    except DegenerateSequence as e:
        logger.debug(f"Factor error PCC not reported: {e}")
        return None
