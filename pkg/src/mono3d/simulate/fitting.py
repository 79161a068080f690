# src/mono3d/simulate/fitting.py
"""
Fitting a value and its uncertainty to noisy observations by gradient descent
on the uncertainty-aware L1 objective

    L(p, sigma) = sum_i |x_i - p| / sigma + n * lam * ln(sigma)

The stationary point is p* = median(x) and sigma* = mean|x_i - p*| / lam,
i.e. the learned sigma tracks the residual scale.

Optimization runs over (p, s = ln sigma) so sigma stays positive. Both
gradients are preconditioned: the p-step is scaled by sigma^2 / n and the
s-step by 1 / n, so p moves at most step_size * sigma per step.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..exceptions import Divergence, InsufficientSamples, LossError

logger = logging.getLogger(__name__)

SIGMA_FLOOR = 1e-6
DEFAULT_STEPS = 5000
DEFAULT_STEP_SIZE = 0.05
# Consecutive loss increases tolerated before giving up.
DIVERGENCE_PATIENCE = 100
# Largest ln(sigma) before exp() overflows.
MAX_LOG_SIGMA = 700.0


@dataclass(frozen=True)
class FitResult:
    value: float
    sigma: float
    loss: float
    steps: int


def objective(samples: np.ndarray, p: float, sigma: float, lam: float) -> float:
    return float(np.sum(np.abs(samples - p)) / sigma + samples.size * lam * math.log(sigma))


def fit_uncertainty(
    samples: Sequence[float],
    lam: float = 1.0,
    steps: int = DEFAULT_STEPS,
    step_size: float = DEFAULT_STEP_SIZE,
    sigma_floor: float = SIGMA_FLOOR,
    patience: int = DIVERGENCE_PATIENCE,
) -> FitResult:
    """
    Jointly fit (p, sigma) from p = mean(samples), sigma = 1.

    Sigma never drops below `sigma_floor`. Raises Divergence when sigma
    overflows or the loss stops being finite. It is also raised after the loss
    rises for `patience` consecutive steps.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise InsufficientSamples(f"need at least 2 samples, got {x.size}")
    if not lam > 0.0:
        raise LossError(f"lambda must be positive, got {lam}")
    if not step_size > 0.0 or steps < 1:
        raise ValueError(f"need positive step size and step count, got {step_size}, {steps}")

    n = x.size
    s_min = math.log(sigma_floor)
    p, s = float(np.mean(x)), 0.0
    previous = objective(x, p, math.exp(s), lam)
    rising = 0

    for step in range(1, steps + 1):
        sigma = math.exp(s)
        residuals = x - p
        grad_p = -float(np.sum(np.sign(residuals))) / sigma
        grad_s = -float(np.sum(np.abs(residuals))) / sigma + n * lam
        p -= step_size * grad_p * sigma * sigma / n
        s = max(s_min, s - step_size * grad_s / n)
        if not s <= MAX_LOG_SIGMA:
            raise Divergence(f"sigma overflowed at step {step}")

        loss = objective(x, p, math.exp(s), lam)
        if not math.isfinite(loss):
            raise Divergence(f"loss became {loss} at step {step}")
        rising = rising + 1 if loss > previous else 0
        if rising >= patience:
            raise Divergence(f"loss increased for {patience} consecutive steps (step {step})")
        previous = loss

    sigma = math.exp(s)
    logger.debug(f"Fitted p={p:.6f}, sigma={sigma:.6f} after {steps} steps (lambda={lam})")
    return FitResult(value=p, sigma=sigma, loss=previous, steps=steps)
