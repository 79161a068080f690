# src/mono3d/simulate/scene.py
"""
Synthetic scenes for the Monte-Carlo checks.

A scene draws an object class (physical height H) from a mixture and,
independently, a distance Z from one distribution shared by every class. The
visual-height factor then follows from Z = f * H * h_rec.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import InsufficientSamples

logger = logging.getLogger(__name__)

DEFAULT_Z_RANGE = (10.0, 50.0)
DEFAULT_HEIGHT_CLASSES = ((1.5, 0.5), (3.0, 0.5))
DEFAULT_FOCAL = 700.0
WEIGHT_TOLERANCE = 1e-9


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class SceneDistribution:
    """
    Distance distribution D = Uniform[z_lo, z_hi] plus a height-class mixture.

    `height_classes` holds (H meters, mixture weight) pairs; weights must be
    positive and sum to 1.
    """
    z_range: Tuple[float, float] = DEFAULT_Z_RANGE
    height_classes: Tuple[Tuple[float, float], ...] = DEFAULT_HEIGHT_CLASSES
    f: float = DEFAULT_FOCAL
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.z_range
        if not (0.0 < lo < hi and math.isfinite(hi)):
            raise ValueError(f"distance support must satisfy 0 < lo < hi, got {self.z_range}")
        if not self.height_classes:
            raise ValueError("at least one height class is required")
        for H, weight in self.height_classes:
            if not (H > 0.0 and weight > 0.0):
                raise ValueError(f"height and weight must be positive, got H={H}, weight={weight}")
        total = sum(weight for _, weight in self.height_classes)
        if abs(total - 1.0) > WEIGHT_TOLERANCE:
            raise ValueError(f"class weights must sum to 1, got {total}")
        if not (self.f > 0.0 and math.isfinite(self.f)):
            raise ValueError(f"focal length must be positive, got {self.f}")

    @property
    def heights(self) -> np.ndarray:
        return np.array([H for H, _ in self.height_classes], dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.height_classes], dtype=float)

    @property
    def mean_distance(self) -> float:
        return sum(self.z_range) / 2.0

    @classmethod
    def equal_weights(
        cls, heights: Tuple[float, ...], z_range: Tuple[float, float] = DEFAULT_Z_RANGE,
        f: float = DEFAULT_FOCAL, seed: int = 0,
    ) -> "SceneDistribution":
        weight = 1.0 / len(heights)
        return cls(z_range=z_range, height_classes=tuple((H, weight) for H in heights), f=f, seed=seed)


@dataclass(frozen=True)
class SceneSamples:
    """Column-wise samples; row i is one object."""
    class_index: np.ndarray
    H: np.ndarray
    Z: np.ndarray
    h_rec: np.ndarray
    f: float

    def __len__(self) -> int:
        return int(self.Z.shape[0])

    def as_triples(self) -> List[Tuple[float, float, float]]:
        """(H, Z, h_rec) per object."""
        return [(float(H), float(Z), float(h)) for H, Z, h in zip(self.H, self.Z, self.h_rec)]


def sample_scene(
    d: SceneDistribution, n: int, rng: Optional[np.random.Generator] = None
) -> SceneSamples:
    """
    Draw `n` objects. Without an explicit generator the distribution's seed is
    used, so the same distribution always yields the same samples.
    """
    if n < 1:
        raise InsufficientSamples(f"need at least one sample, got n={n}")
    rng = make_rng(d.seed) if rng is None else rng
    class_index = rng.choice(len(d.height_classes), size=n, p=d.weights)
    Z = rng.uniform(d.z_range[0], d.z_range[1], size=n)
    H = d.heights[class_index]
    h_rec = Z / (d.f * H)
    logger.debug(f"Sampled {n} objects over {len(d.height_classes)} class(es), seed={d.seed}")
    return SceneSamples(class_index=class_index, H=H, Z=Z, h_rec=h_rec, f=d.f)
