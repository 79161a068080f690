# src/mono3d/eval/average_precision.py
"""
AP|R40 with KITTI-style greedy matching.

Detections of one category are sorted globally by their ranking key
(descending, ties broken by image order then input order). Walking that order,
each detection is matched to the unmatched ground truth of the same image with
the highest IoU at or above the threshold.

Ground-truth pool for a requested difficulty: every label of the category whose
difficulty is at or easier than the request. Other labels of the category
(harder or Ignored) are not counted as misses; a detection that only overlaps
one of them is discarded (neither TP nor FP). DontCare regions carry no 3D box
and are left out of matching.

AP = mean over r in {1/40, ..., 40/40} of the interpolated precision
max{precision at recall >= r} (0 when the recall is never reached).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..core.structures import Box3D
from ..exceptions import EmptyGroundTruth
from ..kitti.difficulty import Difficulty, assign_difficulty
from ..kitti.labels import ObjectLabel

logger = logging.getLogger(__name__)

R40_SAMPLES = 40
DEFAULT_IOU_THRESHOLD = 0.7
DEFAULT_CATEGORY = "Car"
# Slack when comparing a recall to a sampled recall level.
RECALL_TOLERANCE = 1e-12

IoUFunction = Callable[[Box3D, Box3D], float]


@dataclass(frozen=True)
class EvalDetection:
    """
    A detection as seen by the evaluator.

    `key` is the ranking key (raw score or composite confidence). The optional
    factors are only used for error-correlation statistics.
    """
    category: str
    box: Box3D
    key: float
    H: Optional[float] = None
    h_rec: Optional[float] = None

    @classmethod
    def from_label(cls, label: ObjectLabel, key: Optional[float] = None) -> "EvalDetection":
        score = label.score if label.score is not None else 1.0
        return cls(category=label.category, box=label.box3d, key=score if key is None else key)


@dataclass(frozen=True)
class MatchedPair:
    """A true positive: the detection and the ground truth it was assigned."""
    image_id: str
    detection: EvalDetection
    label: ObjectLabel
    iou: float


class MatchOutcome(str, Enum):
    TP = "tp"
    FP = "fp"
    IGNORED = "ignored"


class PRCurve(BaseModel):
    """Precision/recall at every confidence threshold, plus the 40 sampled precisions."""
    model_config = ConfigDict(frozen=True)

    points: List[Tuple[float, float]] = Field(default_factory=list, description="(recall, precision) per threshold.")
    sampled_precisions: List[float] = Field(..., description="Interpolated precision at recall k/40, k=1..40.")

    @property
    def recall_levels(self) -> List[float]:
        return [k / R40_SAMPLES for k in range(1, R40_SAMPLES + 1)]


@dataclass
class APResult:
    ap: float
    curve: PRCurve
    matches: List[MatchedPair] = field(default_factory=list)
    num_gt: int = 0
    num_tp: int = 0
    num_fp: int = 0


@dataclass
class _ImageMatch:
    outcomes: Dict[int, MatchOutcome]
    pairs: Dict[int, MatchedPair]
    num_gt: int


def _split_ground_truth(
    labels: Sequence[ObjectLabel], category: str, difficulty: Difficulty
) -> Tuple[List[ObjectLabel], List[ObjectLabel]]:
    pool, ignored = [], []
    for label in labels:
        if label.is_dontcare or label.category != category:
            continue
        level = assign_difficulty(label)
        if level is not Difficulty.IGNORED and level <= difficulty:
            pool.append(label)
        else:
            ignored.append(label)
    return pool, ignored


def _match_image(
    image_id: str,
    ranked: Sequence[Tuple[int, EvalDetection]],
    labels: Sequence[ObjectLabel],
    category: str,
    difficulty: Difficulty,
    iou_fn: IoUFunction,
    iou_thresh: float,
) -> _ImageMatch:
    """Greedy matching within one image; `ranked` is in global rank order."""
    pool, ignored = _split_ground_truth(labels, category, difficulty)
    pool_boxes = [label.box3d for label in pool]
    ignored_boxes = [label.box3d for label in ignored]
    matched = [False] * len(pool)
    outcomes: Dict[int, MatchOutcome] = {}
    pairs: Dict[int, MatchedPair] = {}

    for rank, det in ranked:
        best_iou, best_index = -1.0, -1
        for index, gt_box in enumerate(pool_boxes):
            if matched[index]:
                continue
            iou = iou_fn(det.box, gt_box)
            if iou > best_iou:
                best_iou, best_index = iou, index
        if best_index >= 0 and best_iou >= iou_thresh:
            matched[best_index] = True
            outcomes[rank] = MatchOutcome.TP
            pairs[rank] = MatchedPair(image_id, det, pool[best_index], best_iou)
        elif any(iou_fn(det.box, gt_box) >= iou_thresh for gt_box in ignored_boxes):
            outcomes[rank] = MatchOutcome.IGNORED
        else:
            outcomes[rank] = MatchOutcome.FP
    return _ImageMatch(outcomes, pairs, len(pool))


def sample_precisions(points: Sequence[Tuple[float, float]]) -> List[float]:
    """Interpolated precision at the 40 recall levels."""
    sampled = []
    for k in range(1, R40_SAMPLES + 1):
        level = k / R40_SAMPLES
        reached = [p for r, p in points if r >= level - RECALL_TOLERANCE]
        sampled.append(max(reached) if reached else 0.0)
    return sampled


def evaluate_ap(
    dets: Mapping[str, Sequence[EvalDetection]],
    gts: Mapping[str, Sequence[ObjectLabel]],
    iou_fn: IoUFunction,
    iou_thresh: float = DEFAULT_IOU_THRESHOLD,
    difficulty: Difficulty = Difficulty.MODERATE,
    category: str = DEFAULT_CATEGORY,
    workers: int = 1,
) -> APResult:
    """
    AP|R40 with the PR curve and the true-positive matches.

    Per-image matching runs on up to `workers` threads; the result does not
    depend on the number of workers.
    """
    if difficulty is Difficulty.IGNORED:
        raise ValueError("AP is only defined for easy, moderate or hard")
    image_ids = sorted(set(dets) | set(gts))

    flat = []
    for image_index, image_id in enumerate(image_ids):
        for det_index, det in enumerate(dets.get(image_id, ())):
            if det.category == category:
                flat.append((-det.key, image_index, det_index, det))
    flat.sort(key=lambda item: item[:3])

    per_image: Dict[str, List[Tuple[int, EvalDetection]]] = {image_id: [] for image_id in image_ids}
    for rank, (_, image_index, _, det) in enumerate(flat):
        per_image[image_ids[image_index]].append((rank, det))

    def run(image_id: str) -> _ImageMatch:
        return _match_image(
            image_id, per_image[image_id], gts.get(image_id, ()),
            category, difficulty, iou_fn, iou_thresh,
        )

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        results = list(executor.map(run, image_ids))

    num_gt = sum(result.num_gt for result in results)
    if num_gt == 0:
        raise EmptyGroundTruth(
            f"no {category} ground truth at difficulty {difficulty.label} or easier"
        )

    outcomes: Dict[int, MatchOutcome] = {}
    pairs: Dict[int, MatchedPair] = {}
    for result in results:
        outcomes.update(result.outcomes)
        pairs.update(result.pairs)

    tp = fp = 0
    points: List[Tuple[float, float]] = []
    matches: List[MatchedPair] = []
    for rank in range(len(flat)):
        outcome = outcomes[rank]
        if outcome is MatchOutcome.IGNORED:
            continue
        if outcome is MatchOutcome.TP:
            tp += 1
            matches.append(pairs[rank])
        else:
            fp += 1
        points.append((tp / num_gt, tp / (tp + fp)))

    sampled = sample_precisions(points)
    ap = sum(sampled) / R40_SAMPLES
    logger.debug(
        f"AP|R40 {category}/{difficulty.label} @ {iou_thresh}: {ap:.4f} "
        f"(gt={num_gt}, tp={tp}, fp={fp})"
    )
    return APResult(
        ap=ap,
        curve=PRCurve(points=points, sampled_precisions=sampled),
        matches=matches,
        num_gt=num_gt,
        num_tp=tp,
        num_fp=fp,
    )


def ap_r40(
    dets: Mapping[str, Sequence[EvalDetection]],
    gts: Mapping[str, Sequence[ObjectLabel]],
    iou_fn: IoUFunction,
    iou_thresh: float = DEFAULT_IOU_THRESHOLD,
    difficulty: Difficulty = Difficulty.MODERATE,
    category: str = DEFAULT_CATEGORY,
    workers: int = 1,
) -> Tuple[float, PRCurve]:
    """AP|R40 and its PR curve; raises EmptyGroundTruth when AP is undefined."""
    result = evaluate_ap(dets, gts, iou_fn, iou_thresh, difficulty, category, workers)
    return result.ap, result.curve
