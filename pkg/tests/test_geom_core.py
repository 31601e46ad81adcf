import math

import pytest
from hypothesis import given, settings, strategies as st

from ballcover.geom_core import (
    Circle,
    GeometryError,
    Point2,
    UnitDir,
    angle_at,
    canonical_angle,
    circle_circle_intersection,
    circle_line_intersection,
    interior_angle,
    oriented_angle,
    second_intersection,
)

TWO_PI = 2.0 * math.pi


class TestCanonicalAngle:
    def test_identity_on_range(self):
        assert canonical_angle(1.0) == pytest.approx(1.0, abs=1e-15)

    def test_wraps_negative(self):
        assert canonical_angle(-math.pi / 2) == pytest.approx(3 * math.pi / 2)

    def test_snaps_two_pi_to_zero(self):
        assert canonical_angle(TWO_PI - 1e-15) == 0.0
        assert canonical_angle(TWO_PI) == 0.0
        assert canonical_angle(1e-15) == 0.0


class TestOrientedAngle:
    def test_quarter_turn_ccw(self):
        assert oriented_angle(1, 0, 0, 1) == pytest.approx(math.pi / 2)

    def test_quarter_turn_cw(self):
        assert oriented_angle(0, 1, 1, 0) == pytest.approx(3 * math.pi / 2)

    def test_zero_vector_rejected(self):
        with pytest.raises(GeometryError):
            oriented_angle(0, 0, 1, 0)

    @settings(derandomize=True, deadline=None)
    @given(st.floats(0.01, TWO_PI - 0.01), st.floats(0.01, TWO_PI - 0.01))
    def test_sum_with_reverse_is_full_turn(self, a, b):
        u, v = UnitDir.from_angle(a), UnitDir.from_angle(b)
        f = oriented_angle(u.ux, u.uy, v.ux, v.uy)
        g = oriented_angle(v.ux, v.uy, u.ux, u.uy)
        total = canonical_angle(f + g)
        assert total == pytest.approx(0.0, abs=1e-9)


class TestInteriorAngle:
    def test_right_angle(self):
        a, b, c = Point2(1, 0), Point2(0, 0), Point2(0, 1)
        assert interior_angle(a, b, c) == pytest.approx(math.pi / 2)

    def test_symmetric(self):
        a, b, c = Point2(1, 0.3), Point2(0, 0), Point2(-0.5, 1)
        assert interior_angle(a, b, c) == pytest.approx(interior_angle(c, b, a))

    def test_at_most_pi(self):
        a, b, c = Point2(1, 0), Point2(0, 0), Point2(1, -0.01)
        assert 0.0 <= interior_angle(a, b, c) <= math.pi

    def test_coincident_rejected(self):
        with pytest.raises(GeometryError):
            angle_at(Point2(0, 0), Point2(0, 0), Point2(1, 0))


class TestCircleCircle:
    def test_two_unit_circles(self):
        c1 = Circle(Point2(0, 0), 1.0)
        c2 = Circle(Point2(1, 0), 1.0)
        pts = circle_circle_intersection(c1, c2)
        assert len(pts) == 2
        ys = sorted(p.y for p in pts)
        assert ys[0] == pytest.approx(-math.sqrt(3) / 2)
        assert ys[1] == pytest.approx(math.sqrt(3) / 2)
        assert all(p.x == pytest.approx(0.5) for p in pts)

    def test_external_tangency(self):
        pts = circle_circle_intersection(
            Circle(Point2(0, 0), 1.0), Circle(Point2(2, 0), 1.0))
        assert len(pts) == 1
        assert pts[0] == pytest.approx((1.0, 0.0))

    def test_disjoint(self):
        assert circle_circle_intersection(
            Circle(Point2(0, 0), 1.0), Circle(Point2(5, 0), 1.0)) == []

    def test_concentric(self):
        assert circle_circle_intersection(
            Circle(Point2(0, 0), 1.0), Circle(Point2(0, 0), 2.0)) == []

    def test_points_lie_on_both_circles(self):
        c1 = Circle(Point2(0.3, -0.2), 1.1)
        c2 = Circle(Point2(-0.4, 0.5), 0.8)
        for p in circle_circle_intersection(c1, c2):
            assert p.dist(c1.center) == pytest.approx(c1.radius, abs=1e-12)
            assert p.dist(c2.center) == pytest.approx(c2.radius, abs=1e-12)


class TestCircleLine:
    def test_diameter(self):
        pts = circle_line_intersection(Circle(Point2(0, 0), 1.0), Point2(0, 0), 1, 0)
        assert sorted(p.x for p in pts) == pytest.approx([-1.0, 1.0])

    def test_tangent(self):
        pts = circle_line_intersection(Circle(Point2(0, 0), 1.0), Point2(0, 1), 1, 0)
        assert len(pts) == 1
        assert pts[0] == pytest.approx((0.0, 1.0))

    def test_miss(self):
        assert circle_line_intersection(Circle(Point2(0, 0), 1.0), Point2(0, 2), 1, 0) == []

    def test_zero_direction_rejected(self):
        with pytest.raises(GeometryError):
            circle_line_intersection(Circle(Point2(0, 0), 1.0), Point2(0, 0), 0, 0)


class TestSecondIntersection:
    def test_picks_farthest(self):
        pts = [Point2(0, 0), Point2(2, 0)]
        assert second_intersection(pts, Point2(0, 0)) == Point2(2, 0)

    def test_tie_breaks_lexicographically(self):
        pts = [Point2(1, 0), Point2(-1, 0)]
        assert second_intersection(pts, Point2(0, 0)) == Point2(-1, 0)

    def test_empty(self):
        assert second_intersection([], Point2(0, 0)) is None
