# tests/test_gradcheck.py
"""
Tests for the finite-difference gradient harness.
"""

import numpy as np
import pytest

from mono3d.exceptions import GradientCheckError
from mono3d.losses.gradcheck import (
    GradientTarget,
    finite_difference_check,
    random_uncertainty_points,
    run_gradient_trials,
    uncertainty_l1_target,
)


def test_smooth_quadratic():
    target = GradientTarget(fn=lambda x: float(x @ x), grad=lambda x: 2.0 * x)
    assert finite_difference_check(target, [1.0, -2.0, 3.0]) < 1e-7


def test_wrong_gradient_is_detected():
    target = GradientTarget(fn=lambda x: float(x @ x), grad=lambda x: 3.0 * x)
    assert finite_difference_check(target, [1.0, 2.0]) > 0.1


def test_uncertainty_loss_gradient_at_single_point():
    target = uncertainty_l1_target(gt=0.5, lam=1.0)
    assert finite_difference_check(target, [1.2, 1.5], step=1e-5) < 1e-6


def test_point_at_kink_is_refused():
    target = uncertainty_l1_target(gt=0.5, lam=1.0)
    with pytest.raises(GradientCheckError):
        finite_difference_check(target, [0.5, 1.0])


def test_random_points_avoid_the_kink():
    points = random_uncertainty_points(np.random.default_rng(0), 500)
    residuals = np.abs(points[:, 1] - points[:, 0])
    assert residuals.min() >= 0.1 - 1e-12
    assert points[:, 2].min() >= 1.0


def test_thousand_random_trials():
    report = run_gradient_trials(1000, seed=0)
    assert report.trials == 1000
    assert report.max_relative_error < 1e-6
    assert report.passed


def test_trials_are_deterministic():
    assert run_gradient_trials(50, seed=3) == run_gradient_trials(50, seed=3)
