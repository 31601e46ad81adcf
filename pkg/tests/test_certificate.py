import math

import numpy as np
import pytest

from ballcover.certificate import (
    CONTACT_TOL_CELLS,
    DegenerateWitnessError,
    DistinctnessViolationError,
    EmptyFanError,
    InconsistentTraceError,
    NoContactError,
    NormalFan,
    build_certificate,
    check_angle_chain,
    contact_point,
    find_witness,
    grow_one_contact,
    grow_two_contact,
    normal_fan,
    project_boundary,
)
from ballcover.geom_core import Point2, UnitDir
from ballcover.morphology import edt, interior_sphere_radius
from ballcover.shape_model import Grid

from conftest import make_grid

SQRT3 = math.sqrt(3.0)


class TestFindWitness:
    def test_disk_none(self, disk_grid_256):
        assert find_witness(disk_grid_256, 0.9) is None

    def test_zero_rho_none(self, square_grid_256):
        assert find_witness(square_grid_256, 0.0) is None

    def test_square_corner_witness(self, square_grid_256):
        p = find_witness(square_grid_256, 0.25)
        assert p is not None
        assert abs(abs(p.x) - 1.0) < 0.3 and abs(abs(p.y) - 1.0) < 0.3

    def test_witness_deep_enough(self, square_grid_256):
        g = square_grid_256
        p = find_witness(g, 0.25)
        d = edt(g, to_occupied=False)
        assert float(d.sample(p.x, p.y)) > CONTACT_TOL_CELLS * g.h


class TestProjectBoundary:
    def test_disk_projection_radial(self, disk_grid_256):
        g = disk_grid_256
        x0 = Point2(0.5, 0.0)
        s0, zeta, r0 = project_boundary(g, x0)
        # nearest boundary lies along +x, inward direction points back to x0
        assert s0.x == pytest.approx(1.0, abs=3 * g.h)
        assert abs(s0.y) <= 3 * g.h
        assert zeta.ux == pytest.approx(-1.0, abs=0.05)
        assert r0 == pytest.approx(0.5, abs=3 * g.h)

    def test_witness_on_boundary_rejected(self, disk_grid_256):
        g = disk_grid_256
        from ballcover.shape_model import boundary_mask
        iy, ix = map(int, np.argwhere(boundary_mask(g))[0])
        with pytest.raises(DegenerateWitnessError):
            project_boundary(g, g.cell_center(ix, iy))

    def test_no_boundary_rejected(self):
        g = Grid(h=1.0, origin=Point2(0, 0), occupancy=np.ones((8, 8), dtype=bool))
        from ballcover.certificate import TraceError
        with pytest.raises(TraceError):
            project_boundary(g, Point2(3.0, 3.0))


class TestGrowOneContact:
    def test_disk_grows_to_full_radius(self, disk_grid_256):
        g = disk_grid_256
        s0 = Point2(1.0, 0.0)
        r1, x1, clipped = grow_one_contact(g, s0, UnitDir(-1.0, 0.0))
        assert not clipped
        assert r1 == pytest.approx(1.0, abs=4 * g.h)
        assert x1.x == pytest.approx(0.0, abs=4 * g.h)

    def test_square_edge_grows_to_half_side(self, square_grid_256):
        g = square_grid_256
        r1, x1, clipped = grow_one_contact(g, Point2(1.0, 0.0), UnitDir(-1.0, 0.0))
        assert not clipped
        assert r1 == pytest.approx(1.0, abs=4 * g.h)

    def test_infeasible_start_rejected(self, disk_grid_256):
        with pytest.raises(InconsistentTraceError):
            grow_one_contact(disk_grid_256, Point2(1.0, 0.0), UnitDir(-1.0, 0.0),
                             t_start=1.5)

    def test_clipped_on_unbounded_occupancy(self):
        # no unoccupied cells at all: clearance is unbounded and the growth
        # runs into the raster-domain cap
        g = Grid(h=0.1, origin=Point2(0.05, 0.05),
                 occupancy=np.ones((32, 32), dtype=bool))
        r1, _, clipped = grow_one_contact(g, Point2(0.15, 1.6), UnitDir(1.0, 0.0))
        assert clipped

    def test_maximality(self, stadium_grid_256):
        # the grown ball's center depth matches its radius within tolerance
        g = stadium_grid_256
        s0, zeta, _ = project_boundary(g, Point2(1.0, 0.3))
        r1, x1, _ = grow_one_contact(g, s0, zeta)
        d = edt(g, to_occupied=False)
        assert float(d.sample(x1.x, x1.y)) == pytest.approx(r1, abs=2 * g.h)


class TestContactPoint:
    def test_disk_inscribed_ball_touches_everywhere(self, disk_grid_256):
        g = disk_grid_256
        # radius of the measured maximal ball at the center, so the circle
        # genuinely grazes the raster boundary
        d = edt(g, to_occupied=False)
        r = float(d.sample(0.0, 0.0)) - 0.5 * g.h
        p = contact_point(g, Point2(0.0, 0.0), r, [])
        assert p.norm() == pytest.approx(r, abs=1e-12)

    def test_interior_circle_has_no_contact(self, disk_grid_256):
        with pytest.raises(NoContactError):
            contact_point(disk_grid_256, Point2(0.0, 0.0), 0.3, [])

    def test_exclusion_forces_second_contact(self, stadium_grid_256):
        g = stadium_grid_256
        # maximal ball at the origin touches top and bottom edges
        d = edt(g, to_occupied=False)
        r = float(d.sample(0.0, 0.0)) - 0.5 * g.h
        p1 = contact_point(g, Point2(0.0, 0.0), r, [])
        p2 = contact_point(g, Point2(0.0, 0.0), r, [(p1, 0.5)])
        assert p1.dist(p2) > 0.5
        assert abs(p2.y) == pytest.approx(r, abs=4 * g.h)

    def test_everything_excluded_rejected(self, stadium_grid_256):
        g = stadium_grid_256
        d = edt(g, to_occupied=False)
        r = float(d.sample(0.0, 0.0)) - 0.5 * g.h
        with pytest.raises(DistinctnessViolationError):
            contact_point(g, Point2(0.0, 0.0), r,
                          [(Point2(0.0, 1.0), 3.0), (Point2(0.0, -1.0), 3.0)])

    def test_rejects_nonpositive_radius(self, disk_grid_256):
        with pytest.raises(ValueError):
            contact_point(disk_grid_256, Point2(0, 0), 0.0, [])


class TestGrowTwoContact:
    def test_antipodal_contacts_in_disk(self, disk_grid_256):
        g = disk_grid_256
        s0 = Point2(0.0, 1.0 - 2 * g.h)
        s0p = Point2(0.0, -(1.0 - 2 * g.h))
        r2, x2, zeta1 = grow_two_contact(g, s0, s0p, side_hint=Point2(0.1, 0.0))
        # the family center moves along +x until the circle meets the rim
        assert x2.dist(s0) == pytest.approx(r2, abs=1e-12)
        assert x2.dist(s0p) == pytest.approx(r2, abs=1e-12)
        assert zeta1.ux == pytest.approx(1.0, abs=1e-12)
        assert r2 <= 1.0 + 4 * g.h

    def test_side_hint_flips_direction(self, disk_grid_256):
        g = disk_grid_256
        s0 = Point2(0.0, 0.5)
        s0p = Point2(0.0, -0.5)
        _, xa, za = grow_two_contact(g, s0, s0p, side_hint=Point2(0.1, 0.0))
        _, xb, zb = grow_two_contact(g, s0, s0p, side_hint=Point2(-0.1, 0.0))
        assert za.ux > 0 and zb.ux < 0
        assert xa.x > 0 and xb.x < 0

    def test_coincident_contacts_rejected(self, disk_grid_256):
        from ballcover.certificate import TraceError
        with pytest.raises(TraceError):
            grow_two_contact(disk_grid_256, Point2(0, 0.5), Point2(0, 0.5),
                             side_hint=Point2(1, 0))


class TestNormalFan:
    def test_disk_boundary_fan_is_narrow(self, disk_grid_256):
        g = disk_grid_256
        r, _ = interior_sphere_radius(g)
        fan = normal_fan(g, Point2(1.0 - g.h, 0.0), 0.9 * r, 256)
        assert not fan.full_circle
        assert len(fan.directions) >= 1
        # all feasible directions point inward (-x half)
        assert all(u.ux < 0.2 for u in fan.directions)
        assert fan.arc_angle < math.pi / 2

    def test_interior_point_full_circle(self, disk_grid_256):
        fan = normal_fan(disk_grid_256, Point2(0.0, 0.0), 0.3, 128)
        assert fan.full_circle
        assert fan.arc_angle == pytest.approx(2 * math.pi)

    def test_outside_point_empty(self, disk_grid_256):
        with pytest.raises(EmptyFanError):
            normal_fan(disk_grid_256, Point2(2.0, 2.0), 0.5, 128)

    def test_square_corner_quarter_fan(self, square_grid_256):
        g = square_grid_256
        fan = normal_fan(g, Point2(1.0 - 0.02, 1.0 - 0.02), 0.05, 512)
        # tangent balls must avoid both walls: roughly a quarter arc around
        # the inward diagonal, widened by the sampling tolerance
        assert fan.arc_angle < 0.75 * math.pi
        mid = UnitDir.from_vector(-1.0, -1.0)
        assert all(u.ux * mid.ux + u.uy * mid.uy > 0.2 for u in fan.directions)

    def test_matches_brute_force(self, stadium_grid_256):
        g = stadium_grid_256
        s = Point2(0.3, 1.0 - g.h)
        r = 0.2
        n = 256
        fan = normal_fan(g, s, r, n)
        field = edt(g, to_occupied=False)
        theta = 2 * math.pi / n * np.arange(n)
        d = np.asarray(field.sample(s.x + r * np.cos(theta), s.y + r * np.sin(theta)))
        ok = d >= r - CONTACT_TOL_CELLS * g.h
        assert len(fan.directions) == int(ok.sum())

    def test_doubling_samples_stable(self, stadium_grid_256):
        g = stadium_grid_256
        s = Point2(0.3, 1.0 - g.h)
        f1 = normal_fan(g, s, 0.2, 256)
        f2 = normal_fan(g, s, 0.2, 512)
        assert f2.arc_angle == pytest.approx(f1.arc_angle, abs=2 * f1.step)

    def test_sample_floor(self, disk_grid_256):
        with pytest.raises(ValueError):
            normal_fan(disk_grid_256, Point2(0, 0), 0.3, 32)


def synthetic_fan(angles_deg, n=720, s=Point2(0, 0), r=1.0):
    """Fan whose feasible set is the sampled directions at the given angles."""
    step = 2 * math.pi / n
    dirs = tuple(UnitDir.from_angle(math.radians(a)) for a in sorted(angles_deg))
    lo = UnitDir.from_angle(math.radians(min(angles_deg)))
    hi = UnitDir.from_angle(math.radians(max(angles_deg)))
    sep = math.radians(max(angles_deg) - min(angles_deg))
    sep = min(sep, 2 * math.pi - sep)
    return NormalFan(s=s, r=r, step=step, directions=dirs,
                     extremal_lo=lo, extremal_hi=hi,
                     extremal_separation=sep, full_circle=False)


class TestCheckLemma32:
    def test_antipodal_pair_saturates_chain(self):
        """Extremals at 150 and 330 degrees with the inward direction at
        60 degrees: a1 = pi/2 and a2 = 3pi/2, so the chain slacks are
        (pi/2 - c, 0, pi/2 - c) with c = acos(r0/2r)."""
        fan = synthetic_fan([150.0, 330.0])
        zeta = UnitDir.from_angle(math.radians(60.0))
        rep = check_angle_chain(fan, zeta, r0=0.5, r=1.0)
        assert rep.applicable
        c = math.acos(0.25)
        assert rep.a1 == pytest.approx(math.pi / 2)
        assert rep.a2 == pytest.approx(3 * math.pi / 2)
        assert rep.slacks[0] == pytest.approx(math.pi / 2 - c)
        assert rep.slacks[1] == pytest.approx(0.0, abs=1e-12)
        assert rep.slacks[2] == pytest.approx(math.pi / 2 - c)
        assert rep.min_slack == pytest.approx(0.0, abs=1e-12)

    def test_small_tangent_ball_raises_threshold(self):
        # as r0 -> 0 the threshold c -> pi/2 and the chain tightens
        fan = synthetic_fan([150.0, 330.0])
        zeta = UnitDir.from_angle(math.radians(60.0))
        rep = check_angle_chain(fan, zeta, r0=1e-9, r=1.0)
        assert rep.threshold == pytest.approx(math.pi / 2)
        assert rep.min_slack == pytest.approx(0.0, abs=1e-6)

    def test_narrow_fan_violates(self):
        # a regular-looking two-direction fan far from antipodal cannot
        # satisfy the a2 - pi >= a1 leg
        fan = synthetic_fan([170.0, 190.0])
        zeta = UnitDir.from_angle(0.0)
        rep = check_angle_chain(fan, zeta, r0=0.5, r=1.0)
        assert rep.applicable
        assert rep.min_slack < 0.0

    def test_full_circle_not_applicable(self):
        fan = synthetic_fan([0.0, 90.0])
        fan = NormalFan(s=fan.s, r=fan.r, step=fan.step, directions=fan.directions,
                        extremal_lo=fan.extremal_lo, extremal_hi=fan.extremal_hi,
                        extremal_separation=2 * math.pi, full_circle=True)
        rep = check_angle_chain(fan, UnitDir(1.0, 0.0), 0.5, 1.0)
        assert not rep.applicable
        assert math.isnan(rep.min_slack)

    def test_single_direction_not_applicable(self):
        fan = synthetic_fan([180.0])
        rep = check_angle_chain(fan, UnitDir(1.0, 0.0), 0.5, 1.0)
        assert not rep.applicable

    def test_radius_hypothesis_enforced(self):
        fan = synthetic_fan([150.0, 330.0])
        with pytest.raises(ValueError):
            check_angle_chain(fan, UnitDir(1.0, 0.0), 2.5, 1.0)


class TestBuildCertificate:
    def test_disk_covered(self, disk_grid_256):
        res = build_certificate(disk_grid_256, 0.9)
        assert res.covered
        assert res.certificate is None

    def test_square_trace_invariants(self, square_grid_256):
        g = square_grid_256
        res = build_certificate(g, 0.25, direction_samples=256)
        assert not res.covered
        cert = res.certificate
        assert cert is not None
        # two-contact circle passes through both contacts exactly
        assert cert.x2.dist(cert.s0) == pytest.approx(cert.r2, abs=1e-12)
        assert cert.x2.dist(cert.s0p) == pytest.approx(cert.r2, abs=1e-12)
        # triangle angle sum
        assert sum(cert.triangle_angles) == pytest.approx(math.pi, abs=1e-9)
        # radii grow monotonically up to contact tolerance
        assert cert.r0 <= cert.r1 + 2 * g.h
        assert cert.r1 <= cert.r2 + 2 * g.h
        # contacts pairwise distinct
        assert cert.s0.dist(cert.s0p) > 2 * g.h
        assert cert.s0.dist(cert.s0pp) > 2 * g.h
        assert cert.s0p.dist(cert.s0pp) > 2 * g.h
        # grown balls are maximal: center depth matches radius
        d = edt(g, to_occupied=False)
        assert float(d.sample(cert.x1.x, cert.x1.y)) == pytest.approx(cert.r1, abs=2 * g.h)
        assert float(d.sample(cert.x2.x, cert.x2.y)) == pytest.approx(cert.r2, abs=2 * g.h)
        # interior ball slightly shrunk from r1 lies inside the occupancy
        shrink = cert.r1 - 4 * g.h
        if shrink > 0:
            assert float(d.sample(cert.x1.x, cert.x1.y)) >= shrink

    def test_square_fans_present(self, square_grid_256):
        res = build_certificate(square_grid_256, 0.25, direction_samples=256)
        assert set(res.fans) <= {"s0", "s0p", "s0pp"}
        assert len(res.fans) >= 1
        assert set(res.lemma_slacks) == set(res.fans)

    def test_fan_radius_is_interior_sphere_radius(self, square_grid_256):
        g = square_grid_256
        res = build_certificate(g, 0.25, direction_samples=256)
        r, _ = interior_sphere_radius(g)
        assert res.fan_radius == pytest.approx(r)
