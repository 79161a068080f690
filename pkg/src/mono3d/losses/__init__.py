"""
Loss functions of the detection heads and their gradient checks.
"""

from .regression import (
    DEFAULT_LOSS_WEIGHTS,
    LossParts,
    LossWeights,
    NormalizedKeypoint,
    UncertainScalar,
    denormalize_keypoint,
    keypoint_loss,
    l1_vector_loss,
    normalize_keypoint,
    numeric_optimal_sigma,
    optimal_sigma,
    total_loss,
    uncertainty_l1_grad,
    uncertainty_l1_loss,
)
from .gradcheck import (
    GradientTarget,
    GradientTrialReport,
    finite_difference_check,
    random_uncertainty_points,
    run_gradient_trials,
    uncertainty_l1_target,
)
