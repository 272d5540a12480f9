"""Planar convex hulls and point-in-polygon tests for rate regions."""

from __future__ import annotations

import numpy as np


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points, tol=1e-12):
    """Counter-clockwise hull vertices (monotone chain), collinear points dropped.

    Degenerate inputs are fine: one distinct point gives a single vertex,
    collinear points give the two extremes.
    """
    pts = sorted({(float(x), float(y)) for x, y in points})
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= tol:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= tol:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) > 1 else lower[:1]


def polygon_area(vertices):
    if len(vertices) < 3:
        return 0.0
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def in_convex_polygon(point, vertices, tol=1e-9):
    """True if ``point`` lies in the CCW convex polygon, within ``tol``."""
    n = len(vertices)
    if n == 0:
        return False
    if n == 1:
        return np.hypot(point[0] - vertices[0][0], point[1] - vertices[0][1]) <= tol
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        edge = np.hypot(b[0] - a[0], b[1] - a[1])
        if _cross(a, b, point) < -tol * max(edge, 1.0):
            return False
    if n == 2:
        lo = np.minimum(vertices[0], vertices[1]) - tol
        hi = np.maximum(vertices[0], vertices[1]) + tol
        return bool(np.all(np.asarray(point) >= lo) and np.all(np.asarray(point) <= hi))
    return True
