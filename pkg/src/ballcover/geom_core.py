"""Planar primitives: points, unit directions, circles, oriented angles,
and circle intersections.

All functions are pure and operate on immutable values, so they are safe
to call from parallel sweeps.
"""

from __future__ import annotations

import math
from typing import NamedTuple

TWO_PI = 2.0 * math.pi

# Canonicalization snaps angles this close to 2*pi back to 0, so identity
# checks do not see 2*pi - eps artifacts.
ANGLE_SNAP = 1e-12


class GeometryError(ValueError):
    """Invalid argument to a geometric primitive."""


class Point2(NamedTuple):
    x: float
    y: float

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def scaled(self, k: float) -> "Point2":
        return Point2(self.x * k, self.y * k)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


class UnitDir(NamedTuple):
    ux: float
    uy: float

    @staticmethod
    def from_vector(vx: float, vy: float) -> "UnitDir":
        n = math.hypot(vx, vy)
        if n == 0.0 or not math.isfinite(n):
            raise GeometryError("cannot normalize a zero or non-finite vector")
        return UnitDir(vx / n, vy / n)

    @staticmethod
    def from_angle(theta: float) -> "UnitDir":
        return UnitDir(math.cos(theta), math.sin(theta))

    def perp_ccw(self) -> "UnitDir":
        return UnitDir(-self.uy, self.ux)

    def negated(self) -> "UnitDir":
        return UnitDir(-self.ux, -self.uy)


class Circle(NamedTuple):
    center: Point2
    radius: float


def canonical_angle(theta: float) -> float:
    """Reduce an angle into [0, 2*pi), snapping near-2*pi values to 0."""
    t = math.remainder(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI - ANGLE_SNAP or t <= ANGLE_SNAP:
        return 0.0
    return t


def oriented_angle(ux: float, uy: float, vx: float, vy: float) -> float:
    """Counterclockwise angle in [0, 2*pi) rotating direction u onto v."""
    if (ux == 0.0 and uy == 0.0) or (vx == 0.0 and vy == 0.0):
        raise GeometryError("oriented_angle requires nonzero vectors")
    au = math.atan2(uy, ux)
    av = math.atan2(vy, vx)
    return canonical_angle(av - au)


def angle_at(a: Point2, b: Point2, c: Point2) -> float:
    """Oriented angle at b, turning from ray b->a to ray b->c."""
    if a == b or c == b:
        raise GeometryError("angle_at requires a != b and c != b")
    return oriented_angle(a.x - b.x, a.y - b.y, c.x - b.x, c.y - b.y)


def interior_angle(a: Point2, b: Point2, c: Point2) -> float:
    """Unoriented angle at b between rays b->a and b->c, in [0, pi]."""
    t = angle_at(a, b, c)
    return min(t, TWO_PI - t)


def circle_circle_intersection(c1: Circle, c2: Circle) -> list[Point2]:
    """Intersection points of two circles via the radical-line formulation.

    Returns 0, 1 (tangency) or 2 points; concentric circles give [].
    """
    r1, r2 = c1.radius, c2.radius
    dx = c2.center.x - c1.center.x
    dy = c2.center.y - c1.center.y
    d = math.hypot(dx, dy)
    rmax = max(r1, r2)
    tol = 1e-12 * rmax * rmax
    if d == 0.0:
        return []
    # signed distance from c1.center to the radical line, along (dx, dy)/d
    a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
    h2 = r1 * r1 - a * a
    ex, ey = dx / d, dy / d
    px, py = c1.center.x + a * ex, c1.center.y + a * ey
    if abs(h2) <= tol:
        return [Point2(px, py)]
    if h2 < 0.0:
        return []
    h = math.sqrt(h2)
    return [
        Point2(px - h * ey, py + h * ex),
        Point2(px + h * ey, py - h * ex),
    ]


def circle_line_intersection(c: Circle, p: Point2, dx: float, dy: float) -> list[Point2]:
    """Intersection of a circle with the line through p with direction (dx, dy)."""
    n = math.hypot(dx, dy)
    if n == 0.0:
        raise GeometryError("line direction must be nonzero")
    ex, ey = dx / n, dy / n
    # foot of perpendicular from center onto the line
    t0 = (c.center.x - p.x) * ex + (c.center.y - p.y) * ey
    fx, fy = p.x + t0 * ex, p.y + t0 * ey
    h2 = c.radius * c.radius - ((fx - c.center.x) ** 2 + (fy - c.center.y) ** 2)
    tol = 1e-12 * c.radius * c.radius
    if abs(h2) <= tol:
        return [Point2(fx, fy)]
    if h2 < 0.0:
        return []
    h = math.sqrt(h2)
    return [Point2(fx - h * ex, fy - h * ey), Point2(fx + h * ex, fy + h * ey)]


def second_intersection(points: list[Point2], excluded: Point2) -> Point2 | None:
    """Pick the intersection point farthest from `excluded`.

    Ties break by lexicographic (x, y) order. Returns None for an empty list.
    """
    if not points:
        return None
    best = None
    best_key = None
    for q in points:
        key = (-q.dist(excluded), q.x, q.y)
        if best_key is None or key < best_key:
            best, best_key = q, key
    return best
