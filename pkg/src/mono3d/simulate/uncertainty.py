# src/mono3d/simulate/uncertainty.py
"""
Uncertainty-versus-distance profiles.

`synthetic_uncertainty_records` stands in for a trained network: predicted
uncertainties are inflated for near objects (often truncated) and grow again
for far objects (few pixels). `uncertainty_vs_distance_report` bins any such
records by distance and emits plot data.
"""

import csv
import io
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..eval.statistics import bin_label, bin_ranges
from ..exceptions import InsufficientSamples
from .scene import SceneDistribution, make_rng, sample_scene

logger = logging.getLogger(__name__)

DEFAULT_UNCERTAINTY_BINS = (0.0, 10.0, 20.0, 30.0, 40.0, 50.0)


@dataclass(frozen=True)
class UncertaintyRecord:
    """Distance of one object and the uncertainties predicted for its factors."""
    Z: float
    sigma_H: float
    sigma_hrec: float


@dataclass(frozen=True)
class UncertaintyShape:
    """
    Relative uncertainty as a function of distance:

        rel(Z) = base * (1 + near_gain * exp(-(Z - z_lo) / near_scale) + far_gain * u^2)

    with u = (Z - z_lo) / (z_hi - z_lo), multiplied by log-normal noise.
    """
    base_H: float = 0.03
    base_hrec: float = 0.03
    near_gain: float = 1.5
    near_scale: float = 4.0
    far_gain: float = 2.0
    noise: float = 0.1

    def __post_init__(self):
        if min(self.base_H, self.base_hrec, self.near_scale) <= 0.0:
            raise ValueError("base uncertainties and near_scale must be positive")
        if min(self.near_gain, self.far_gain, self.noise) < 0.0:
            raise ValueError("gains and noise must be non-negative")


def synthetic_uncertainty_records(
    d: SceneDistribution, n: int, shape: UncertaintyShape = UncertaintyShape()
) -> List[UncertaintyRecord]:
    """
    Deterministic (seeded by `d.seed`) records with sigma_H in meters and
    sigma_hrec in 1/pixels.
    """
    rng = make_rng(d.seed)
    samples = sample_scene(d, n, rng)
    lo, hi = d.z_range
    u = (samples.Z - lo) / (hi - lo)
    profile = 1.0 + shape.near_gain * np.exp(-(samples.Z - lo) / shape.near_scale) + shape.far_gain * u**2
    jitter = np.exp(shape.noise * rng.standard_normal((n, 2)))
    sigma_H = shape.base_H * profile * jitter[:, 0] * samples.H
    sigma_hrec = shape.base_hrec * profile * jitter[:, 1] * samples.h_rec
    return [
        UncertaintyRecord(Z=float(z), sigma_H=float(sh), sigma_hrec=float(sr))
        for z, sh, sr in zip(samples.Z, sigma_H, sigma_hrec)
    ]


class UncertaintyBin(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    lo: float = Field(..., ge=0)
    hi: Optional[float] = Field(None, description="Upper edge; None means unbounded.")
    count: int = Field(0, ge=0)
    mean_sigma_H: Optional[float] = Field(None, description="None for an empty bin.")
    mean_sigma_hrec: Optional[float] = Field(None, description="None for an empty bin.")


def uncertainty_vs_distance_report(
    records: Sequence[UncertaintyRecord], edges: Sequence[float] = DEFAULT_UNCERTAINTY_BINS
) -> List[UncertaintyBin]:
    """Mean sigma_H and sigma_hrec per distance bin [lo, hi)."""
    if not records:
        raise InsufficientSamples("no uncertainty records to bin")
    Z = np.array([r.Z for r in records])
    sigma_H = np.array([r.sigma_H for r in records])
    sigma_hrec = np.array([r.sigma_hrec for r in records])

    bins = []
    for lo, hi in bin_ranges(edges):
        mask = (Z >= lo) & (Z < hi)
        count = int(np.count_nonzero(mask))
        bins.append(UncertaintyBin(
            label=bin_label(lo, hi),
            lo=lo,
            hi=None if math.isinf(hi) else hi,
            count=count,
            mean_sigma_H=float(np.mean(sigma_H[mask])) if count else None,
            mean_sigma_hrec=float(np.mean(sigma_hrec[mask])) if count else None,
        ))
    return bins


def uncertainty_csv(bins: Sequence[UncertaintyBin]) -> str:
    """`bin,count,mean_sigma_H,mean_sigma_hrec` rows; empty bins leave the means blank."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["bin", "count", "mean_sigma_H", "mean_sigma_hrec"])
    for b in bins:
        writer.writerow([
            b.label,
            b.count,
            "" if b.mean_sigma_H is None else repr(b.mean_sigma_H),
            "" if b.mean_sigma_hrec is None else repr(b.mean_sigma_hrec),
        ])
    return buffer.getvalue()
