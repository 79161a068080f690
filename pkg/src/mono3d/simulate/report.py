# src/mono3d/simulate/report.py
"""
One-shot simulation run: every Monte-Carlo experiment with its pass/fail
assertion, collected into a JSON-serializable report.
"""

import json
import logging
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .experiments import (
    ConsistencyReport,
    CrossIntrinsicsResult,
    ErrorModel,
    FactorSubstitutionResult,
    SelfConsistencyResult,
    cross_intrinsics_check,
    expectation_consistency_check,
    factor_substitution_experiment,
    self_consistency_experiment,
)
from .fitting import fit_uncertainty
from .scene import SceneDistribution, sample_scene
from .uncertainty import UncertaintyBin, synthetic_uncertainty_records, uncertainty_vs_distance_report

logger = logging.getLogger(__name__)

DEFAULT_FIT_SAMPLES = (0.0, 1.0, 2.0, 3.0, 4.0)
FIT_TOLERANCE = 0.01
CROSS_INTRINSICS_TOLERANCE = 1e-12
DEFAULT_SECOND_FOCAL = 1000.0


class FitSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    lam: float
    value: float
    sigma: float
    expected_value: float = Field(..., description="Sample median.")
    expected_sigma: float = Field(..., description="mean |x - median| / lambda.")
    within_tolerance: bool


class SimulationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int
    n: int
    shards: int = Field(1, ge=1, description="Sampling substreams; runs are single-threaded.")
    consistency: ConsistencyReport
    self_consistency: SelfConsistencyResult
    factor_substitution: FactorSubstitutionResult
    cross_intrinsics: CrossIntrinsicsResult
    fit: FitSummary
    uncertainty_profile: List[UncertaintyBin]
    failures: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        payload = self.model_dump(mode="json")
        payload["passed"] = self.passed
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def fit_summary(samples: Sequence[float], lam: float) -> FitSummary:
    result = fit_uncertainty(samples, lam=lam)
    x = np.asarray(samples, dtype=float)
    median = float(np.median(x))
    expected_sigma = float(np.mean(np.abs(x - median))) / lam
    scale = max(abs(median), float(np.mean(np.abs(x))), 1e-12)
    within = abs(result.value - median) <= FIT_TOLERANCE * scale and (
        abs(result.sigma - expected_sigma) <= FIT_TOLERANCE * max(expected_sigma, 1e-12)
        or expected_sigma == 0.0
    )
    return FitSummary(
        lam=lam, value=result.value, sigma=result.sigma,
        expected_value=median, expected_sigma=expected_sigma, within_tolerance=within,
    )


def run_simulation(
    d: SceneDistribution,
    em: ErrorModel,
    n: int,
    f_to: float = DEFAULT_SECOND_FOCAL,
    fit_samples: Sequence[float] = DEFAULT_FIT_SAMPLES,
    lam: float = 1.0,
    uncertainty_edges: Optional[Sequence[float]] = None,
) -> SimulationReport:
    """Run every experiment with the same distribution and seed; record failed checks."""
    failures: List[str] = []

    consistency = expectation_consistency_check(sample_scene(d, n))
    if not consistency.passed:
        failures.append("expectation consistency residual exceeds its bound")

    self_consistency = self_consistency_experiment(d, em, n)
    if em.rho < 0.0 and em.std_H > 0.0 and em.std_hrec > 0.0 and not self_consistency.correlation_helps:
        failures.append("anticorrelated errors did not reduce the distance RMSE")

    substitution = factor_substitution_experiment(d, em, n)

    cross = cross_intrinsics_check(d, f_to, n=min(n, 1000))
    if max(cross.max_relative_distance_error, cross.max_relative_scale_error) > CROSS_INTRINSICS_TOLERANCE:
        failures.append("rescaled factors do not reproduce the distance across cameras")

    fit = fit_summary(fit_samples, lam)
    if not fit.within_tolerance:
        failures.append("uncertainty fit did not reach its stationary point")

    records = synthetic_uncertainty_records(d, n)
    profile = (
        uncertainty_vs_distance_report(records)
        if uncertainty_edges is None
        else uncertainty_vs_distance_report(records, uncertainty_edges)
    )

    for failure in failures:
        logger.warning(f"Simulation check failed: {failure}")
    return SimulationReport(
        seed=d.seed,
        n=n,
        consistency=consistency,
        self_consistency=self_consistency,
        factor_substitution=substitution,
        cross_intrinsics=cross,
        fit=fit,
        uncertainty_profile=profile,
        failures=failures,
    )
