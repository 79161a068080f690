# tests/test_confidence.py
"""
Tests for composite confidence and detection ranking.
"""

import dataclasses

import numpy as np
import pytest

from mono3d.core.distance import DistanceFactors
from mono3d.core.structures import Box2D, Keypoint, PhysicalSize, YawEncoding
from mono3d.exceptions import InvalidFactor
from mono3d.scoring.confidence import (
    DetectionRecord,
    ScoreMode,
    composite_confidence,
    rank_detections,
    ranking_key,
)


def make_detection(score=0.9, H=1.5, sigma_hrec=1e-4, focal=700.0, cls="Car") -> DetectionRecord:
    return DetectionRecord(
        cls=cls,
        score=score,
        box2d=Box2D(0.0, 0.0, 10.0, 10.0),
        center_kpt=Keypoint(5.0, 5.0),
        size=PhysicalSize(W=1.6, H=H, L=3.9),
        yaw=YawEncoding(0.0, 1.0),
        factors=DistanceFactors(H=H, h_rec=0.02),
        sigma_H=0.05,
        sigma_hrec=sigma_hrec,
        focal=focal,
    )


def test_composite_value():
    assert composite_confidence(0.9, 700.0, 1.5, 1e-4) == pytest.approx(0.9 / (700.0 * 1.5 * 1e-4))


@pytest.mark.parametrize("f,H,sigma", [(0.0, 1.5, 1e-4), (700.0, -1.0, 1e-4), (700.0, 1.5, 0.0)])
def test_composite_rejects_non_positive_inputs(f, H, sigma):
    with pytest.raises(InvalidFactor):
        composite_confidence(0.9, f, H, sigma)


def test_record_validation():
    with pytest.raises(ValueError):
        make_detection(score=1.5)
    with pytest.raises(InvalidFactor):
        make_detection(sigma_hrec=0.0)
    with pytest.raises(InvalidFactor):
        make_detection(focal=None).composite()


def test_composite_reorders_uncertain_detections():
    confident_but_uncertain = make_detection(score=0.95, sigma_hrec=1e-3)
    modest_but_certain = make_detection(score=0.6, sigma_hrec=1e-4)
    dets = [confident_but_uncertain, modest_but_certain]
    assert rank_detections(dets, ScoreMode.RAW)[0] is confident_but_uncertain
    assert rank_detections(dets, ScoreMode.COMPOSITE)[0] is modest_but_certain
    assert ranking_key(modest_but_certain, "composite") == pytest.approx(modest_but_certain.composite())


def test_ranking_is_stable_on_ties():
    a, b, c = make_detection(score=0.5), make_detection(score=0.5), make_detection(score=0.7)
    assert rank_detections([a, b, c]) == [c, a, b]
    assert rank_detections([a, b, c])[1] is a


def test_composite_ranking_invariant_to_global_sigma_scaling():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        size = int(rng.integers(2, 8))
        dets = [
            make_detection(
                score=float(rng.uniform(0.05, 1.0)),
                H=float(rng.uniform(1.0, 3.5)),
                sigma_hrec=float(rng.uniform(1e-5, 1e-3)),
                focal=float(rng.choice([700.0, 721.5377])),
            )
            for _ in range(size)
        ]
        scale = float(rng.uniform(0.1, 10.0))
        scaled = [dataclasses.replace(d, sigma_hrec=d.sigma_hrec * scale) for d in dets]
        order = [dets.index(d) for d in rank_detections(dets, ScoreMode.COMPOSITE)]
        scaled_order = [scaled.index(d) for d in rank_detections(scaled, ScoreMode.COMPOSITE)]
        assert order == scaled_order
