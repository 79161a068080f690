# src/mono3d/losses/gradcheck.py
"""
Finite-difference verification of analytic loss gradients.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ..exceptions import GradientCheckError
from .regression import uncertainty_l1_grad, uncertainty_l1_loss

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-6
# Gradient magnitudes below this are compared absolutely rather than relatively.
DEFAULT_FLOOR = 1e-3


@dataclass(frozen=True)
class GradientTarget:
    """
    A differentiable function of a flat parameter vector.

    `kink_distance` returns how far a point is from the nearest
    non-differentiable location (None means smooth everywhere).
    """
    fn: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    kink_distance: Optional[Callable[[np.ndarray], float]] = None


def uncertainty_l1_target(gt: float, lam: float) -> GradientTarget:
    """The uncertainty L1 loss as a function of (pred, sigma) for fixed gt and lambda."""
    return GradientTarget(
        fn=lambda x: uncertainty_l1_loss(x[0], gt, x[1], lam),
        grad=lambda x: np.array(uncertainty_l1_grad(x[0], gt, x[1], lam)),
        kink_distance=lambda x: abs(x[0] - gt),
    )


def finite_difference_check(
    target: GradientTarget,
    point: Sequence[float],
    step: float = DEFAULT_STEP,
    floor: float = DEFAULT_FLOOR,
) -> float:
    """
    Worst component-wise relative error between the analytic gradient and
    central differences at `point`.

    The step for component i is step * max(1, |x_i|). Raises
    GradientCheckError when the point is within 10 steps of a kink.
    """
    x = np.asarray(point, dtype=float)
    steps = step * np.maximum(1.0, np.abs(x))
    if target.kink_distance is not None:
        distance = target.kink_distance(x)
        if distance <= 10.0 * float(np.max(steps)):
            raise GradientCheckError(
                f"point {x.tolist()} is {distance:.3g} from a kink; "
                f"need more than {10.0 * float(np.max(steps)):.3g}"
            )

    analytic = np.asarray(target.grad(x), dtype=float)
    numeric = np.empty_like(x)
    for i in range(x.size):
        forward, backward = x.copy(), x.copy()
        forward[i] += steps[i]
        backward[i] -= steps[i]
        numeric[i] = (target.fn(forward) - target.fn(backward)) / (2.0 * steps[i])

    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    worst = float(np.max(np.abs(analytic - numeric) / denom))
    logger.debug(f"Gradient check at {x.tolist()}: max relative error {worst:.3e}")
    return worst


# --- Randomized trials ---

TRIAL_STEP = 1e-5
TRIAL_TOLERANCE = 1e-6


@dataclass(frozen=True)
class GradientTrialReport:
    trials: int
    seed: int
    step: float
    max_relative_error: float
    tolerance: float = TRIAL_TOLERANCE

    @property
    def passed(self) -> bool:
        return self.max_relative_error < self.tolerance


def random_uncertainty_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """
    Rows (gt, pred, sigma, lam) away from the kink: |pred - gt| in [0.1, 1],
    sigma in [1, 3], lam in [0.5, 1.5].
    """
    gt = rng.uniform(-1.0, 1.0, n)
    residual = rng.uniform(0.1, 1.0, n) * rng.choice([-1.0, 1.0], n)
    sigma = rng.uniform(1.0, 3.0, n)
    lam = rng.uniform(0.5, 1.5, n)
    return np.column_stack([gt, gt + residual, sigma, lam])


def run_gradient_trials(n: int = 1000, seed: int = 0, step: float = TRIAL_STEP) -> GradientTrialReport:
    """Worst finite-difference disagreement of the uncertainty L1 gradient over `n` random points."""
    if n < 1:
        raise ValueError(f"need at least one trial, got {n}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for gt, pred, sigma, lam in random_uncertainty_points(rng, n):
        target = uncertainty_l1_target(float(gt), float(lam))
        worst = max(worst, finite_difference_check(target, [pred, sigma], step=step))
    logger.info(f"Gradient check over {n} points: max relative error {worst:.3e}")
    return GradientTrialReport(trials=n, seed=seed, step=step, max_relative_error=worst)
