# tests/test_simulation_report.py
"""
Tests for the combined simulation run.
"""

import json

import pytest

from mono3d.simulate.experiments import ErrorModel
from mono3d.simulate.report import fit_summary, run_simulation
from mono3d.simulate.scene import SceneDistribution


@pytest.fixture(scope="module")
def report():
    return run_simulation(SceneDistribution(seed=0), ErrorModel(), n=20_000)


def test_default_run_passes(report):
    assert report.failures == []
    assert report.passed
    assert report.seed == 0 and report.n == 20_000 and report.shards == 1
    assert report.self_consistency.correlation_helps
    assert report.fit.within_tolerance
    assert report.cross_intrinsics.count == 1000


def test_json_payload(report):
    payload = json.loads(report.to_json())
    assert payload["passed"] is True
    assert list(payload) == sorted(payload)
    assert payload["fit"]["expected_sigma"] == pytest.approx(1.2)
    assert [b["label"] for b in payload["uncertainty_profile"]][0] == "0-10"


def test_run_is_deterministic(report):
    again = run_simulation(SceneDistribution(seed=0), ErrorModel(), n=20_000)
    assert again.to_json() == report.to_json()


def test_custom_uncertainty_bins():
    result = run_simulation(SceneDistribution(seed=1), ErrorModel(), n=2_000, uncertainty_edges=[0, 30])
    assert [b.label for b in result.uncertainty_profile] == ["0-30", "30-inf"]


def test_positive_correlation_is_not_a_failure():
    result = run_simulation(SceneDistribution(seed=2), ErrorModel(rho=0.5), n=2_000)
    assert not result.self_consistency.correlation_helps
    assert result.passed


def test_fit_summary():
    summary = fit_summary([0.0, 1.0, 2.0, 3.0, 4.0], lam=0.5)
    assert summary.expected_value == 2.0
    assert summary.expected_sigma == pytest.approx(2.4)
    assert summary.within_tolerance
