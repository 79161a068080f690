"""
Monte-Carlo scenes and experiments that exercise the distance decomposition
without a trained network.
"""

from .scene import SceneDistribution, SceneSamples, make_rng, sample_scene
from .experiments import (
    REFERENCE_FACTOR_CORRELATION,
    ConsistencyReport,
    CrossIntrinsicsResult,
    ErrorModel,
    FactorSubstitutionResult,
    SelfConsistencyResult,
    correlated_errors,
    cross_intrinsics_check,
    expectation_consistency_check,
    factor_substitution_experiment,
    self_consistency_experiment,
)
from .fitting import SIGMA_FLOOR, FitResult, fit_uncertainty
from .uncertainty import (
    UncertaintyBin,
    UncertaintyRecord,
    UncertaintyShape,
    synthetic_uncertainty_records,
    uncertainty_csv,
    uncertainty_vs_distance_report,
)
from .report import SimulationReport, run_simulation
