# src/mono3d/eval/iou.py
"""
Rotated bird's-eye-view and 3D intersection-over-union.

Each box is projected onto the ground plane (x, z) as a rotated rectangle.
The intersection polygon is found by sequential cutting (Sutherland-Hodgman):
start from one rectangle and clip it against every edge of the other. Both
rectangles are convex, so the result is convex and its area follows from the
shoelace formula.
"""

from typing import List, Tuple

import numpy as np

from ..core.boxes import rotation_y
from ..core.structures import Box3D

Point = Tuple[float, float]

# Vertex classification slack; points on an edge (collinear) count as inside.
CLIP_EPSILON = 1e-9

_FOOTPRINT_SIGNS = np.array([[1, 0, 1], [-1, 0, 1], [-1, 0, -1], [1, 0, -1]], dtype=float)


def bev_polygon(box: Box3D) -> List[Point]:
    """Ground-plane footprint (x, z) of a box, counterclockwise in the (x, z) plane."""
    size = box.size
    offsets = _FOOTPRINT_SIGNS * np.array([size.L / 2.0, 0.0, size.W / 2.0])
    corners = offsets @ rotation_y(box.ry).T
    polygon = [(float(x) + box.center.x, float(z) + box.center.z) for x, _, z in corners]
    if _signed_area(polygon) < 0.0:
        polygon.reverse()
    return polygon


def _signed_area(polygon: List[Point]) -> float:
    total = 0.0
    for (x0, y0), (x1, y1) in zip(polygon, polygon[1:] + polygon[:1]):
        total += x0 * y1 - x1 * y0
    return total / 2.0


def polygon_area(polygon: List[Point]) -> float:
    """Absolute shoelace area (0 for fewer than three vertices)."""
    if len(polygon) < 3:
        return 0.0
    return abs(_signed_area(polygon))


def _side(a: Point, b: Point, p: Point) -> float:
    """Cross product of (b - a) and (p - a); positive when p is left of a->b."""
    return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])


def _intersect(s: Point, e: Point, a: Point, b: Point) -> Point:
    """Intersection of segment s->e with the infinite line through a and b."""
    ds, de = _side(a, b, s), _side(a, b, e)
    t = ds / (ds - de)
    return (s[0] + t * (e[0] - s[0]), s[1] + t * (e[1] - s[1]))


def clip_polygon(subject: List[Point], clip: List[Point]) -> List[Point]:
    """
    Clip `subject` by the convex counterclockwise polygon `clip`.

    Returns the (possibly empty) intersection polygon.
    """
    output = list(subject)
    for a, b in zip(clip, clip[1:] + clip[:1]):
        if not output:
            break
        candidates, output = output, []
        s = candidates[-1]
        for e in candidates:
            e_in = _side(a, b, e) >= -CLIP_EPSILON
            s_in = _side(a, b, s) >= -CLIP_EPSILON
            if e_in:
                if not s_in:
                    output.append(_intersect(s, e, a, b))
                output.append(e)
            elif s_in:
                output.append(_intersect(s, e, a, b))
            s = e
    return output


def bev_intersection_area(a: Box3D, b: Box3D) -> float:
    return polygon_area(clip_polygon(bev_polygon(a), bev_polygon(b)))


def bev_iou(a: Box3D, b: Box3D) -> float:
    """IoU of the ground-plane rectangles of two boxes."""
    inter = bev_intersection_area(a, b)
    area_a = a.size.L * a.size.W
    area_b = b.size.L * b.size.W
    return _clamp_unit(inter / (area_a + area_b - inter))


def vertical_overlap(a: Box3D, b: Box3D) -> float:
    """Length of the overlap of the boxes' y-intervals [yc - H/2, yc + H/2]."""
    top = max(a.center.y - a.size.H / 2.0, b.center.y - b.size.H / 2.0)
    bottom = min(a.center.y + a.size.H / 2.0, b.center.y + b.size.H / 2.0)
    return max(0.0, bottom - top)


def iou_3d(a: Box3D, b: Box3D) -> float:
    """Volumetric IoU: BEV intersection area times vertical overlap over the union volume."""
    overlap = vertical_overlap(a, b)
    if overlap == 0.0:
        return 0.0
    inter = bev_intersection_area(a, b) * overlap
    vol_a = a.size.L * a.size.W * a.size.H
    vol_b = b.size.L * b.size.W * b.size.H
    return _clamp_unit(inter / (vol_a + vol_b - inter))


def _clamp_unit(value: float) -> float:
    return min(1.0, max(0.0, value))
