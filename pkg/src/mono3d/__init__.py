"""
mono3d: geometry-based distance decomposition for monocular 3D object
detection, with KITTI-style I/O, evaluation and Monte-Carlo checks.

The distance of an object is recovered as Z = f * H * h_rec from its physical
height H and the reciprocal h_rec of its projected visual height.
"""

__version__ = "0.1.0"
