# src/mono3d/losses/regression.py
"""
Regression losses for the distance factors and the 3D attributes.

- Uncertainty-aware L1 for H and h_rec:  |pred - gt| / sigma + lambda * ln(sigma)
- Plain L1 (mean over components) for size, yaw encoding and keypoints
- Keypoint normalization by the proposal box
- The weighted total over all detection-head terms

Uncertainties are stored directly as sigma (not log sigma).
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import minimize_scalar

from ..core.structures import Box2D, Keypoint
from ..exceptions import LengthMismatch, LossError, NonPositiveSigma


class LossWeights(BaseModel):
    """Weights of the overall detection-head loss; defaults are the reference training values."""
    model_config = ConfigDict(frozen=True)

    lambda_cls: float = Field(1.0, ge=0, description="Weight of the classification loss.")
    lambda_bbox: float = Field(1.0, ge=0, description="Weight of the 2D box regression loss.")
    lambda_size: float = Field(3.0, ge=0, description="Weight of the physical size loss.")
    lambda_yaw: float = Field(5.0, ge=0, description="Weight of the yaw encoding loss.")
    lambda_kpt: float = Field(5.0, ge=0, description="Weight of the keypoint loss.")
    # The two below live inside the uncertainty losses, not in the weighted sum.
    lambda_H: float = Field(0.25, ge=0, description="Uncertainty balance term of the H loss.")
    lambda_hrec: float = Field(1.0, ge=0, description="Uncertainty balance term of the h_rec loss.")


DEFAULT_LOSS_WEIGHTS = LossWeights()


@dataclass(frozen=True)
class UncertainScalar:
    """A predicted value with its learnable positive uncertainty."""
    value: float
    sigma: float

    def __post_init__(self):
        _require_sigma(self.sigma)


@dataclass(frozen=True)
class NormalizedKeypoint:
    """Keypoint in proposal-relative coordinates; may fall outside [0, 1]."""
    t1: float
    t2: float


@dataclass(frozen=True)
class LossParts:
    """Per-term losses entering total_loss."""
    cls: float = 0.0
    bbox: float = 0.0
    size: float = 0.0
    yaw: float = 0.0
    kpt: float = 0.0
    H: float = 0.0
    hrec: float = 0.0


def _require_sigma(sigma: float) -> None:
    if not sigma > 0.0:
        raise NonPositiveSigma(f"sigma must be positive, got {sigma}")


def _require_lambda(lam: float) -> None:
    if not lam > 0.0:
        raise LossError(f"lambda must be positive, got {lam}")


# --- Uncertainty-aware L1 ---


def uncertainty_l1_loss(pred: float, gt: float, sigma: float, lam: float) -> float:
    """|pred - gt| / sigma + lam * ln(sigma)."""
    _require_sigma(sigma)
    _require_lambda(lam)
    return abs(pred - gt) / sigma + lam * math.log(sigma)


def uncertainty_l1_grad(pred: float, gt: float, sigma: float, lam: float) -> Tuple[float, float]:
    """
    Analytic gradient (d/dpred, d/dsigma) of uncertainty_l1_loss.

    The subgradient at pred == gt is taken as 0.
    """
    _require_sigma(sigma)
    _require_lambda(lam)
    residual = pred - gt
    d_pred = math.copysign(1.0, residual) / sigma if residual != 0.0 else 0.0
    d_sigma = -abs(residual) / sigma**2 + lam / sigma
    return d_pred, d_sigma


def optimal_sigma(residual: float, lam: float) -> float:
    """Closed-form minimizer over sigma of the uncertainty loss for a fixed residual: |r| / lam."""
    _require_lambda(lam)
    return abs(residual) / lam


def numeric_optimal_sigma(residual: float, lam: float, upper: Optional[float] = None) -> float:
    """Golden-section search for the sigma minimizer; cross-checks optimal_sigma."""
    _require_lambda(lam)
    r = abs(residual)
    if r == 0.0:
        raise LossError("the sigma minimizer is not attained for a zero residual")
    hi = upper if upper is not None else 10.0 * r / lam
    result = minimize_scalar(
        lambda s: uncertainty_l1_loss(r, 0.0, s, lam),
        bracket=(1e-3 * r / lam, r / lam, hi),
        method="golden",
        tol=1e-12,
    )
    return float(result.x)


# --- Plain L1 ---


def l1_vector_loss(pred: Sequence[float], gt: Sequence[float]) -> float:
    """Mean absolute error across components."""
    if len(pred) != len(gt):
        raise LengthMismatch(f"prediction has {len(pred)} components, target has {len(gt)}")
    if len(pred) == 0:
        raise LengthMismatch("cannot take the L1 loss of empty vectors")
    return sum(abs(a - b) for a, b in zip(pred, gt)) / len(pred)


# --- Keypoints ---


def normalize_keypoint(proposal: Box2D, kpt: Keypoint) -> NormalizedKeypoint:
    """Express a keypoint relative to its proposal: ((u - x1) / w, (v - y1) / h)."""
    return NormalizedKeypoint(
        (kpt.u - proposal.x1) / proposal.width,
        (kpt.v - proposal.y1) / proposal.height,
    )


def denormalize_keypoint(proposal: Box2D, t: NormalizedKeypoint) -> Keypoint:
    """Inverse of normalize_keypoint."""
    return Keypoint(
        proposal.x1 + t.t1 * proposal.width,
        proposal.y1 + t.t2 * proposal.height,
    )


def keypoint_loss(
    proposal: Box2D, pred: Sequence[Keypoint], gt: Sequence[Keypoint]
) -> float:
    """
    L1 over proposal-normalized keypoints.

    With only the projected center this is the center keypoint loss; passing
    center plus the eight projected corners adds the auxiliary corner terms.
    """
    if len(pred) != len(gt):
        raise LengthMismatch(f"{len(pred)} predicted keypoints vs {len(gt)} targets")
    pred_t, gt_t = [], []
    for p, g in zip(pred, gt):
        tp, tg = normalize_keypoint(proposal, p), normalize_keypoint(proposal, g)
        pred_t.extend((tp.t1, tp.t2))
        gt_t.extend((tg.t1, tg.t2))
    return l1_vector_loss(pred_t, gt_t)


# --- Total ---


def total_loss(parts: LossParts, w: LossWeights = DEFAULT_LOSS_WEIGHTS) -> float:
    """Weighted sum; the uncertainty losses L_H and L_hrec enter unweighted."""
    return (
        w.lambda_cls * parts.cls
        + w.lambda_bbox * parts.bbox
        + w.lambda_size * parts.size
        + w.lambda_yaw * parts.yaw
        + w.lambda_kpt * parts.kpt
        + parts.H
        + parts.hrec
    )
