# tests/test_scene.py
"""
Tests for synthetic scene sampling.
"""

import numpy as np
import pytest

from mono3d.simulate.scene import SceneDistribution, make_rng, sample_scene
from mono3d.exceptions import InsufficientSamples


def test_defaults():
    d = SceneDistribution()
    assert d.z_range == (10.0, 50.0)
    assert list(d.heights) == [1.5, 3.0]
    assert d.mean_distance == 30.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"z_range": (0.0, 50.0)},
        {"z_range": (50.0, 10.0)},
        {"height_classes": ()},
        {"height_classes": ((1.5, 0.7), (3.0, 0.7))},
        {"height_classes": ((-1.5, 1.0),)},
        {"f": 0.0},
    ],
)
def test_invalid_distributions(kwargs):
    with pytest.raises(ValueError):
        SceneDistribution(**kwargs)


def test_equal_weights():
    d = SceneDistribution.equal_weights((1.0, 1.5, 3.0))
    assert d.weights == pytest.approx([1 / 3] * 3)


def test_samples_satisfy_the_decomposition():
    d = SceneDistribution(seed=5)
    samples = sample_scene(d, 10_000)
    assert len(samples) == 10_000
    assert samples.Z.min() >= 10.0 and samples.Z.max() < 50.0
    assert set(np.unique(samples.H)) == {1.5, 3.0}
    np.testing.assert_allclose(d.f * samples.H * samples.h_rec, samples.Z, rtol=1e-12)
    H, Z, h_rec = samples.as_triples()[0]
    assert H == samples.H[0] and Z == samples.Z[0] and h_rec == samples.h_rec[0]


def test_same_seed_same_samples():
    a = sample_scene(SceneDistribution(seed=9), 500)
    b = sample_scene(SceneDistribution(seed=9), 500)
    c = sample_scene(SceneDistribution(seed=10), 500)
    np.testing.assert_array_equal(a.Z, b.Z)
    np.testing.assert_array_equal(a.class_index, b.class_index)
    assert not np.array_equal(a.Z, c.Z)


def test_explicit_generator_is_used():
    d = SceneDistribution(seed=1)
    first = sample_scene(d, 100, make_rng(42))
    again = sample_scene(d, 100, make_rng(42))
    np.testing.assert_array_equal(first.Z, again.Z)
    assert not np.array_equal(first.Z, sample_scene(d, 100).Z)


def test_mixture_weights_are_respected():
    d = SceneDistribution(height_classes=((1.5, 0.8), (3.0, 0.2)), seed=2)
    samples = sample_scene(d, 100_000)
    assert np.mean(samples.class_index == 0) == pytest.approx(0.8, abs=0.01)


def test_needs_samples():
    with pytest.raises(InsufficientSamples):
        sample_scene(SceneDistribution(), 0)
