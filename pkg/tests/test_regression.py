# tests/test_regression.py
"""
Tests for the uncertainty-aware L1 loss, keypoint normalization and the
weighted total loss.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mono3d.core.structures import Box2D, Keypoint
from mono3d.exceptions import LengthMismatch, LossError, NonPositiveSigma
from mono3d.losses.regression import (
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


# --- Uncertainty L1 ---

def test_loss_value():
    assert uncertainty_l1_loss(2.0, 1.0, 0.5, 1.0) == pytest.approx(2.0 + math.log(0.5))
    assert uncertainty_l1_loss(1.0, 1.0, 1.0, 0.25) == 0.0


def test_gradient_value():
    d_pred, d_sigma = uncertainty_l1_grad(0.0, 1.0, 2.0, 1.0)
    assert d_pred == pytest.approx(-0.5)
    assert d_sigma == pytest.approx(-1.0 / 4.0 + 1.0 / 2.0)


def test_gradient_at_kink_is_zero_in_pred():
    d_pred, d_sigma = uncertainty_l1_grad(1.0, 1.0, 2.0, 1.0)
    assert d_pred == 0.0
    assert d_sigma == pytest.approx(0.5)


@pytest.mark.parametrize("sigma", [0.0, -1.0])
def test_non_positive_sigma(sigma):
    with pytest.raises(NonPositiveSigma):
        uncertainty_l1_loss(1.0, 0.0, sigma, 1.0)
    with pytest.raises(NonPositiveSigma):
        UncertainScalar(1.0, sigma)


def test_non_positive_lambda():
    with pytest.raises(LossError):
        uncertainty_l1_loss(1.0, 0.0, 1.0, 0.0)


def test_optimal_sigma_closed_form():
    assert optimal_sigma(0.6, 0.25) == pytest.approx(2.4)
    assert optimal_sigma(-0.6, 1.0) == pytest.approx(0.6)


@given(residual=st.floats(1e-3, 10.0), lam=st.floats(0.05, 5.0))
def test_numeric_minimizer_agrees_with_closed_form(residual, lam):
    assert numeric_optimal_sigma(residual, lam) == pytest.approx(optimal_sigma(residual, lam), rel=1e-5)


def test_numeric_minimizer_needs_a_residual():
    with pytest.raises(LossError):
        numeric_optimal_sigma(0.0, 1.0)


@given(residual=st.floats(1e-2, 5.0), lam=st.floats(0.1, 2.0), scale=st.floats(0.2, 5.0))
def test_optimal_sigma_minimizes_loss(residual, lam, scale):
    best = optimal_sigma(residual, lam)
    assert uncertainty_l1_loss(residual, 0.0, best, lam) <= uncertainty_l1_loss(residual, 0.0, best * scale, lam) + 1e-12


@pytest.mark.parametrize("residual,lam", [(0.6, 0.25), (-0.6, 1.0), (3.0, 0.5), (1e-3, 2.0)])
def test_sigma_gradient_changes_sign_once_at_minimizer(residual, lam):
    best = abs(residual) / lam
    # An even point count keeps sigma = |r| / lam itself off the grid.
    grid = np.geomspace(best * 1e-3, best * 1e3, 2000)
    signs = np.sign([uncertainty_l1_grad(residual, 0.0, s, lam)[1] for s in grid])
    changes = np.flatnonzero(np.diff(signs) != 0)
    assert len(changes) == 1
    i = changes[0]
    assert grid[i] <= best <= grid[i + 1]
    assert signs[0] < 0 < signs[-1]


# --- Plain L1 and keypoints ---

def test_l1_vector_loss():
    assert l1_vector_loss([1.0, 2.0, 3.0], [1.0, 0.0, 6.0]) == pytest.approx(5.0 / 3.0)
    with pytest.raises(LengthMismatch):
        l1_vector_loss([1.0], [1.0, 2.0])
    with pytest.raises(LengthMismatch):
        l1_vector_loss([], [])


def test_keypoint_normalization():
    proposal = Box2D(100.0, 50.0, 300.0, 150.0)
    t = normalize_keypoint(proposal, Keypoint(200.0, 100.0))
    assert (t.t1, t.t2) == pytest.approx((0.5, 0.5))
    # Keypoints outside the proposal stay representable.
    outside = normalize_keypoint(proposal, Keypoint(350.0, 40.0))
    assert (outside.t1, outside.t2) == pytest.approx((1.25, -0.1))
    back = denormalize_keypoint(proposal, NormalizedKeypoint(outside.t1, outside.t2))
    assert (back.u, back.v) == pytest.approx((350.0, 40.0))


@given(
    x1=st.floats(-500.0, 1500.0),
    y1=st.floats(-200.0, 500.0),
    w=st.floats(1.0, 800.0),
    h=st.floats(1.0, 400.0),
    u=st.floats(-500.0, 2500.0),
    v=st.floats(-200.0, 1000.0),
)
def test_keypoint_normalization_round_trip(x1, y1, w, h, u, v):
    proposal = Box2D(x1, y1, x1 + w, y1 + h)
    back = denormalize_keypoint(proposal, normalize_keypoint(proposal, Keypoint(u, v)))
    # A few ulps of pixel coordinates below 4096.
    assert back.u == pytest.approx(u, rel=1e-12, abs=1e-11)
    assert back.v == pytest.approx(v, rel=1e-12, abs=1e-11)


def test_keypoint_loss_single_and_multi():
    proposal = Box2D(0.0, 0.0, 100.0, 50.0)
    pred = [Keypoint(10.0, 10.0), Keypoint(60.0, 20.0)]
    gt = [Keypoint(20.0, 10.0), Keypoint(60.0, 30.0)]
    assert keypoint_loss(proposal, pred[:1], gt[:1]) == pytest.approx(0.05)
    assert keypoint_loss(proposal, pred, gt) == pytest.approx((0.1 + 0.0 + 0.0 + 0.2) / 4.0)
    with pytest.raises(LengthMismatch):
        keypoint_loss(proposal, pred, gt[:1])


# --- Total ---

def test_default_weights():
    w = DEFAULT_LOSS_WEIGHTS
    assert (w.lambda_cls, w.lambda_bbox, w.lambda_size, w.lambda_yaw, w.lambda_kpt) == (1.0, 1.0, 3.0, 5.0, 5.0)
    assert (w.lambda_H, w.lambda_hrec) == (0.25, 1.0)


def test_total_loss_weighting():
    parts = LossParts(cls=1.0, bbox=1.0, size=1.0, yaw=1.0, kpt=1.0, H=1.0, hrec=1.0)
    assert total_loss(parts) == pytest.approx(1 + 1 + 3 + 5 + 5 + 1 + 1)
    assert total_loss(parts, LossWeights(lambda_yaw=0.0)) == pytest.approx(12.0)
