# src/mono3d/simulate/experiments.py
"""
Monte-Carlo experiments around the distance decomposition.

- Expectation consistency: since Z has the same distribution for every class,
  H * E[h_rec | class] = E[Z] / f for every class.
- Self-consistency: anticorrelated relative errors in H and h_rec partially
  cancel in the product f * H * h_rec, so the recovered distance is more
  accurate than with independent errors of the same size.
- Factor substitution: replacing the predicted H by its ground truth breaks
  that cancellation.
- Cross intrinsics: the same object seen through two cameras recovers the
  same distance once h_rec is rescaled by the focal ratio.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import norm

from ..core.distance import DistanceFactors, recover_distance, rescale_for_focal
from ..exceptions import InsufficientSamples
from .scene import SceneDistribution, SceneSamples, make_rng, sample_scene

logger = logging.getLogger(__name__)

# Two-sided coverage of the residual bound (3 standard errors).
CONFIDENCE_SIGMAS = 3.0
# Correlation between H and h_rec errors measured on a trained detector.
REFERENCE_FACTOR_CORRELATION = -0.472


def confidence_level(sigmas: float = CONFIDENCE_SIGMAS) -> float:
    """Two-sided normal coverage of +/- `sigmas` standard errors."""
    return float(norm.cdf(sigmas) - norm.cdf(-sigmas))


@dataclass(frozen=True)
class ErrorModel:
    """Relative Gaussian errors of H and h_rec with correlation rho."""
    std_H: float = 0.05
    std_hrec: float = 0.05
    rho: float = REFERENCE_FACTOR_CORRELATION

    def __post_init__(self):
        if self.std_H < 0.0 or self.std_hrec < 0.0:
            raise ValueError(f"standard deviations must be non-negative, got {self.std_H}, {self.std_hrec}")
        if not -1.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [-1, 1], got {self.rho}")

    def independent(self) -> "ErrorModel":
        return ErrorModel(std_H=self.std_H, std_hrec=self.std_hrec, rho=0.0)

    def first_order_relative_variance(self) -> float:
        """var(dZ/Z) ~ std_H^2 + std_hrec^2 + 2 rho std_H std_hrec."""
        return self.std_H**2 + self.std_hrec**2 + 2.0 * self.rho * self.std_H * self.std_hrec


def correlated_errors(em: ErrorModel, normals: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Map standard normals of shape (n, 2) to relative errors (eps_H, eps_hrec)
    through the Cholesky factor of the 2x2 correlation matrix.
    """
    rho = em.rho
    # Written out so rho = +/-1 (a singular correlation matrix) still works.
    cholesky = np.array([[1.0, 0.0], [rho, math.sqrt(max(0.0, 1.0 - rho * rho))]])
    unit = normals @ cholesky.T
    return em.std_H * unit[:, 0], em.std_hrec * unit[:, 1]


def perturbed_distances(samples: SceneSamples, em: ErrorModel, normals: np.ndarray) -> np.ndarray:
    """Recovered Z from multiplicatively perturbed factors."""
    eps_H, eps_hrec = correlated_errors(em, normals)
    return samples.f * (samples.H * (1.0 + eps_H)) * (samples.h_rec * (1.0 + eps_hrec))


def _rmse(estimate: np.ndarray, truth: np.ndarray) -> float:
    return float(np.sqrt(np.mean((estimate - truth) ** 2)))


# --- Expectation consistency ---


class ClassConsistency(BaseModel):
    model_config = ConfigDict(frozen=True)

    H: float
    count: int = Field(..., ge=2)
    mean_h_rec: float
    product: float = Field(..., description="H * mean(h_rec | class).")
    residual: float = Field(..., ge=0, description="|H * mean(h_rec | class) - mean(Z) / f|.")
    bound: float = Field(..., ge=0, description="3 standard errors of the residual.")
    within_bound: bool


class ConsistencyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean_distance_over_f: float
    classes: List[ClassConsistency]
    cross_class_spread: Optional[float] = Field(
        None, description="max - min of H * mean(h_rec) across classes; None for a single class."
    )
    notice: Optional[str] = None
    confidence: float = Field(..., description="Normal coverage of the residual bound.")
    passed: bool


def expectation_consistency_check(samples: SceneSamples) -> ConsistencyReport:
    """
    Per-class residual of H * E[h_rec] = E[Z] / f.

    The residual equals |mean(Z | class) - mean(Z)| / f; its standard error is
    bounded by std(Z) / f * sqrt(1/n_class + 1/n).
    """
    n = len(samples)
    if n < 2:
        raise InsufficientSamples(f"need at least 2 samples, got {n}")
    f = samples.f
    target = float(np.mean(samples.Z)) / f
    std_Z = float(np.std(samples.Z, ddof=1))

    classes = []
    for class_id in np.unique(samples.class_index):
        mask = samples.class_index == class_id
        count = int(np.count_nonzero(mask))
        if count < 2:
            raise InsufficientSamples(f"class {int(class_id)} has {count} sample(s); need at least 2")
        H = float(samples.H[mask][0])
        mean_h_rec = float(np.mean(samples.h_rec[mask]))
        product = H * mean_h_rec
        residual = abs(product - target)
        bound = CONFIDENCE_SIGMAS * std_Z / f * math.sqrt(1.0 / count + 1.0 / n)
        classes.append(ClassConsistency(
            H=H, count=count, mean_h_rec=mean_h_rec, product=product,
            residual=residual, bound=bound, within_bound=residual < bound,
        ))

    spread, notice = None, None
    if len(classes) >= 2:
        products = [c.product for c in classes]
        spread = max(products) - min(products)
    else:
        notice = "single class present; cross-class constancy not checked"
        logger.warning(notice)

    return ConsistencyReport(
        mean_distance_over_f=target,
        classes=classes,
        cross_class_spread=spread,
        notice=notice,
        confidence=confidence_level(),
        passed=all(c.within_bound for c in classes),
    )


# --- Self-consistency under correlated errors ---


class SelfConsistencyResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    rho: float
    rmse_correlated: float = Field(..., ge=0)
    rmse_independent: float = Field(..., ge=0)
    predicted_correlated: float = Field(..., ge=0, description="First-order RMSE prediction with correlation.")
    predicted_independent: float = Field(..., ge=0, description="First-order RMSE prediction without correlation.")

    @property
    def correlation_helps(self) -> bool:
        return self.rmse_correlated < self.rmse_independent


def self_consistency_experiment(d: SceneDistribution, em: ErrorModel, n: int) -> SelfConsistencyResult:
    """
    Recovered-Z RMSE with correlated factor errors against independent errors
    of equal marginal spread. Both runs share the same scene and normals.
    """
    rng = make_rng(d.seed)
    samples = sample_scene(d, n, rng)
    normals = rng.standard_normal((n, 2))
    z_correlated = perturbed_distances(samples, em, normals)
    z_independent = perturbed_distances(samples, em.independent(), normals)
    rms_Z = math.sqrt(float(np.mean(samples.Z**2)))
    result = SelfConsistencyResult(
        rho=em.rho,
        rmse_correlated=_rmse(z_correlated, samples.Z),
        rmse_independent=_rmse(z_independent, samples.Z),
        predicted_correlated=rms_Z * math.sqrt(max(0.0, em.first_order_relative_variance())),
        predicted_independent=rms_Z * math.sqrt(em.independent().first_order_relative_variance()),
    )
    logger.info(
        f"Self-consistency (rho={em.rho}): RMSE {result.rmse_correlated:.4f} m correlated vs "
        f"{result.rmse_independent:.4f} m independent"
    )
    return result


# --- Factor substitution ---


class FactorSubstitutionResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    rho: float
    rmse_predicted: float = Field(..., ge=0, description="Both factors predicted.")
    rmse_gt_H: float = Field(..., ge=0, description="Ground-truth H with predicted h_rec.")
    rmse_gt_hrec: float = Field(..., ge=0, description="Predicted H with ground-truth h_rec.")

    @property
    def substitution_hurts(self) -> bool:
        return self.rmse_gt_H > self.rmse_predicted


def factor_substitution_experiment(d: SceneDistribution, em: ErrorModel, n: int) -> FactorSubstitutionResult:
    """
    RMSE of the recovered distance when one predicted factor is replaced by its
    ground truth. To first order the ground-truth H is worse than the predicted
    one exactly when rho < -std_H / (2 std_hrec).
    """
    rng = make_rng(d.seed)
    samples = sample_scene(d, n, rng)
    eps_H, eps_hrec = correlated_errors(em, rng.standard_normal((n, 2)))
    H_pred = samples.H * (1.0 + eps_H)
    h_pred = samples.h_rec * (1.0 + eps_hrec)
    f = samples.f
    return FactorSubstitutionResult(
        rho=em.rho,
        rmse_predicted=_rmse(f * H_pred * h_pred, samples.Z),
        rmse_gt_H=_rmse(f * samples.H * h_pred, samples.Z),
        rmse_gt_hrec=_rmse(f * H_pred * samples.h_rec, samples.Z),
    )


# --- Cross intrinsics ---


class CrossIntrinsicsResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    f_from: float
    f_to: float
    count: int
    max_relative_distance_error: float = Field(..., ge=0)
    max_relative_scale_error: float = Field(..., ge=0, description="Worst |h_rec_to / h_rec_from - f_from / f_to| relative.")


def cross_intrinsics_check(d: SceneDistribution, f_to: float, n: int = 1000) -> CrossIntrinsicsResult:
    """Rescale every sample's factors to focal `f_to` and recover Z with both cameras."""
    samples = sample_scene(d, n)
    expected_scale = d.f / f_to
    worst_z, worst_scale = 0.0, 0.0
    for H, Z, h_rec in samples.as_triples():
        source = DistanceFactors(H=H, h_rec=h_rec)
        target = rescale_for_focal(source, d.f, f_to)
        z_to = recover_distance(f_to, target)
        worst_z = max(worst_z, abs(z_to - Z) / Z)
        worst_scale = max(worst_scale, abs(target.h_rec / source.h_rec - expected_scale) / expected_scale)
    return CrossIntrinsicsResult(
        f_from=d.f,
        f_to=f_to,
        count=n,
        max_relative_distance_error=worst_z,
        max_relative_scale_error=worst_scale,
    )
