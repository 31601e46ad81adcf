"""Proof-trace extraction on occupancy grids.

Starting from an uncovered witness cell, the trace projects to the
boundary, grows a maximal tangent ball (one contact), grows a maximal
two-contact ball pinned to the first two contacts, and locates a third
contact, yielding the contact triangle whose angles sum to pi. At each
contact a fan of feasible interior-ball directions is sampled and tested
against the cos^-1(r0/2r) angle-chain inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geom_core import Point2, UnitDir, interior_angle, oriented_angle
from .morphology import (
    DistanceField,
    covered_mask,
    edt,
    interior_sphere_radius,
)
from .shape_model import Grid, boundary_mask

TWO_PI = 2.0 * math.pi

# Arc or field samples within this many cells of the unoccupied phase
# count as touching the boundary.
CONTACT_TOL_CELLS = 2.0

# Ball growth stops when the sampled clearance drops below the radius
# minus this slack. Kept strictly below the contact tolerance so the
# grown circle always passes within contact range of the boundary.
GROW_TOL_CELLS = 1.0

# Minimum separation between distinct contacts, in cells.
DISTINCT_SEP_CELLS = 4.0

# Ball-growth bisection stops at this bracket width, in cells.
GROW_RES_CELLS = 1.0 / 16.0


class TraceError(RuntimeError):
    """A stage of the proof trace failed; the stage name is in args."""


class DegenerateWitnessError(TraceError):
    """The witness cell is itself a boundary cell (projection radius 0)."""


class InconsistentTraceError(TraceError):
    """A growth stage is infeasible at its guaranteed starting radius."""


class NoContactError(TraceError):
    """No point of the circle is near the complement (ball not maximal)."""


class DistinctnessViolationError(TraceError):
    """Every near-contact arc point falls inside an exclusion zone."""


class EmptyFanError(TraceError):
    """No sampled direction admits an interior ball at the base point."""


@dataclass(frozen=True)
class Certificate:
    x0: Point2
    s0: Point2
    r0: float
    zeta: UnitDir
    r1: float
    x1: Point2
    s0p: Point2
    m: Point2
    zeta1: UnitDir
    r2: float
    x2: Point2
    s0pp: Point2
    triangle_angles: tuple[float, float, float]


@dataclass(frozen=True)
class NormalFan:
    """Sampled directions u with the r-ball tangent at s contained in S.

    The feasible directions may form several circular arcs (a tangency
    pinch yields two nearly antipodal islands); extremal_lo/extremal_hi
    are the pair of feasible directions at maximal angular separation,
    taken over the arc endpoints, with lo preceding hi counterclockwise.
    """

    s: Point2
    r: float
    step: float  # angular sampling step (radians)
    directions: tuple[UnitDir, ...]  # all feasible directions, angle-sorted
    extremal_lo: UnitDir
    extremal_hi: UnitDir
    extremal_separation: float  # unoriented angle between the extremals
    full_circle: bool

    @property
    def arc_angle(self) -> float:
        """Angular spread between the extremal directions."""
        if self.full_circle:
            return TWO_PI
        return self.extremal_separation

    @property
    def single_direction(self) -> bool:
        return not self.full_circle and len(self.directions) == 1


@dataclass(frozen=True)
class SlackReport:
    """Slacks of the chain cos^-1(r0/2r) <= a1 <= a2 - pi <= pi - cos^-1(r0/2r)
    with a1 = angle(zeta, zeta0) and a2 = angle(zeta, xi0).

    Nonnegative slacks verify the chain. Not applicable for fans without
    two distinct extremal directions (regular points) and for full-circle
    fans (no extremal pair exists).
    """

    applicable: bool
    reason: str = ""
    slacks: tuple[float, float, float] = (math.nan, math.nan, math.nan)
    a1: float = math.nan
    a2: float = math.nan
    threshold: float = math.nan

    @property
    def min_slack(self) -> float:
        return min(self.slacks) if self.applicable else math.nan


@dataclass
class TraceResult:
    covered: bool
    certificate: Certificate | None = None
    fan_radius: float = math.nan
    fans: dict[str, NormalFan] = field(default_factory=dict)
    lemma_slacks: dict[str, SlackReport] = field(default_factory=dict)
    anomalies: list[str] = field(default_factory=list)


def find_witness(grid: Grid, rho: float) -> Point2 | None:
    """Deepest occupied cell not covered by the rho-opening, or None.

    Cells within the 2h boundary band are ignored; losing them to center
    sampling does not witness genuine uncoverage.
    """
    if rho <= 0.0:
        return None
    from . import _kernels

    d_un_sq = _kernels.edt_squared_cells(~grid.occupancy)
    lost = grid.occupancy & ~covered_mask(grid, rho, d_un_sq)
    lost &= d_un_sq > CONTACT_TOL_CELLS * CONTACT_TOL_CELLS
    if not lost.any():
        return None
    depth = np.where(lost, d_un_sq, -np.inf)
    iy, ix = np.unravel_index(int(np.argmax(depth)), depth.shape)
    return grid.cell_center(int(ix), int(iy))


def project_boundary(grid: Grid, x0: Point2) -> tuple[Point2, UnitDir, float]:
    """Nearest boundary cell to x0 (ties lexicographic), with the unit
    direction from it to x0 and the projection radius."""
    bmask = boundary_mask(grid)
    if not bmask.any():
        raise TraceError("project_boundary: grid has no boundary cells")
    iy, ix = np.nonzero(bmask)
    xs = grid.origin.x + grid.h * ix
    ys = grid.origin.y + grid.h * iy
    d2 = (xs - x0.x) ** 2 + (ys - x0.y) ** 2
    order = np.lexsort((ys, xs, d2))
    k = order[0]
    s0 = Point2(float(xs[k]), float(ys[k]))
    r0 = s0.dist(x0)
    if r0 <= 0.0:
        raise DegenerateWitnessError("project_boundary: witness lies on the boundary")
    return s0, UnitDir.from_vector(x0.x - s0.x, x0.y - s0.y), r0


def _grow_sup(field_un: DistanceField, center_of, t_lo: float, h: float) -> tuple[float, bool]:
    """Largest t with clearance(center_of(t)) >= t - tol, given feasibility
    at t_lo. Returns (t, clipped); clipped means the domain cap bound."""
    tol = GROW_TOL_CELLS * h
    ny, nx = field_un.values.shape
    t_hi = math.hypot(nx * h, ny * h)

    def feasible(t: float) -> bool:
        c = center_of(t)
        return float(field_un.sample(c.x, c.y)) >= t - tol

    if not feasible(t_lo):
        raise InconsistentTraceError(
            f"growth infeasible at its starting radius {t_lo:.6g}"
        )
    if feasible(t_hi):
        return t_hi, True
    a, b = t_lo, t_hi
    while b - a > GROW_RES_CELLS * h:
        mid = 0.5 * (a + b)
        if feasible(mid):
            a = mid
        else:
            b = mid
    return a, False


def grow_one_contact(grid: Grid, s0: Point2, zeta: UnitDir,
                     t_start: float | None = None) -> tuple[float, Point2, bool]:
    """Maximal t with the ball of radius t centered at s0 + t*zeta inside
    the grid. Returns (r1, x1, clipped)."""
    field_un = edt(grid, to_occupied=False)
    t_lo = grid.h if t_start is None else t_start

    def center_of(t: float) -> Point2:
        return Point2(s0.x + t * zeta.ux, s0.y + t * zeta.uy)

    r1, clipped = _grow_sup(field_un, center_of, t_lo, grid.h)
    return r1, center_of(r1), clipped


def contact_point(grid: Grid, center: Point2, radius: float,
                  exclusions: list[tuple[Point2, float]]) -> Point2:
    """Point of the circle around center that minimizes distance to the
    unoccupied phase, skipping exclusion neighborhoods.

    The circle is sampled at arc-step <= h/2. The minimizer must lie
    within 2h of the complement (the ball is maximal); if only excluded
    points do, the contacts are not distinct.
    """
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    h = grid.h
    count = max(64, int(math.ceil(TWO_PI * radius / (0.5 * h))))
    theta = np.linspace(0.0, TWO_PI, count, endpoint=False)
    px = center.x + radius * np.cos(theta)
    py = center.y + radius * np.sin(theta)
    field_un = edt(grid, to_occupied=False)
    d = np.asarray(field_un.sample(px, py), dtype=float)
    near = d <= CONTACT_TOL_CELLS * h
    if not near.any():
        raise NoContactError(
            "contact_point: no circle point within tolerance of the complement"
        )
    allowed = np.ones(count, dtype=bool)
    for q, sep in exclusions:
        allowed &= (px - q.x) ** 2 + (py - q.y) ** 2 > sep * sep
    if not (near & allowed).any():
        raise DistinctnessViolationError(
            "contact_point: every near-contact point falls in an exclusion zone"
        )
    masked = np.where(allowed, d, np.inf)
    k = int(np.argmin(masked))
    return Point2(float(px[k]), float(py[k]))


def grow_two_contact(grid: Grid, s0: Point2, s0p: Point2, side_hint: Point2,
                     t_start: float | None = None) -> tuple[float, Point2, UnitDir]:
    """Maximal t for the ball family through both s0 and s0p with center
    on the perpendicular bisector, on side_hint's side.

    t_start is a radius known feasible (the radius of the maximal ball
    that produced both contacts); the default starts at the half-chord,
    whose midpoint ball can poke outside by the contact tolerance when
    the contacts straddle a corner.

    Returns (r2, x2, zeta1) with ||x2 - s0|| = ||x2 - s0p|| = r2 exactly.
    """
    if s0 == s0p:
        raise TraceError("grow_two_contact: contacts coincide")
    m = Point2(0.5 * (s0.x + s0p.x), 0.5 * (s0.y + s0p.y))
    w = s0.dist(m)
    chord = UnitDir.from_vector(s0p.x - s0.x, s0p.y - s0.y)
    zeta1 = chord.perp_ccw()
    side = (side_hint.x - m.x) * zeta1.ux + (side_hint.y - m.y) * zeta1.uy
    if side < 0.0:
        zeta1 = zeta1.negated()

    def center_of(t: float) -> Point2:
        off = math.sqrt(max(t * t - w * w, 0.0))
        return Point2(m.x + off * zeta1.ux, m.y + off * zeta1.uy)

    t_lo = w if t_start is None else max(t_start, w)
    field_un = edt(grid, to_occupied=False)
    r2, _ = _grow_sup(field_un, center_of, t_lo, grid.h)
    return r2, center_of(r2), zeta1


def normal_fan(grid: Grid, s: Point2, r: float, direction_samples: int) -> NormalFan:
    """Fan of sampled directions whose tangent r-ball at s stays inside.

    An empty fan means the interior-sphere condition fails locally at s.
    """
    if direction_samples < 64:
        raise ValueError("direction_samples must be >= 64")
    if r <= 0.0:
        raise ValueError("r must be positive")
    step = TWO_PI / direction_samples
    theta = step * np.arange(direction_samples)
    px = s.x + r * np.cos(theta)
    py = s.y + r * np.sin(theta)
    field_un = edt(grid, to_occupied=False)
    d = np.asarray(field_un.sample(px, py), dtype=float)
    ok = d >= r - CONTACT_TOL_CELLS * grid.h
    if not ok.any():
        raise EmptyFanError(
            f"normal_fan: no feasible direction at ({s.x:.6g}, {s.y:.6g})"
        )
    dirs = tuple(UnitDir.from_angle(float(t)) for t in theta[ok])
    if ok.all():
        return NormalFan(s=s, r=r, step=step, directions=dirs,
                         extremal_lo=dirs[0], extremal_hi=dirs[-1],
                         extremal_separation=TWO_PI, full_circle=True)
    i, j = _extremal_pair(ok)
    if direction_samples % 2 == 0:
        # an antipodal feasible pair saturates the separation at pi; the
        # endpoint scan below cannot see pairs interior to two arcs
        anti = ok & np.roll(ok, direction_samples // 2)
        if anti.any():
            runs = np.nonzero(anti)[0]
            i = int(runs[runs.size // 2])
            j = (i + direction_samples // 2) % direction_samples
    lo, hi = float(theta[i]), float(theta[j])
    sep = abs(hi - lo)
    sep = min(sep, TWO_PI - sep)
    return NormalFan(s=s, r=r, step=step, directions=dirs,
                     extremal_lo=UnitDir.from_angle(lo),
                     extremal_hi=UnitDir.from_angle(hi),
                     extremal_separation=sep, full_circle=False)


def _extremal_pair(ok: np.ndarray) -> tuple[int, int]:
    """Index pair of feasible samples at maximal angular separation.

    The extremes are endpoints of the circular runs of True values, so
    only endpoints are compared. Ties break at the smallest index pair.
    """
    n = ok.size
    endpoint = ok & (~np.roll(ok, 1) | ~np.roll(ok, -1))
    cand = np.nonzero(endpoint)[0].tolist()
    best = (0.0, cand[0], cand[0])
    step = TWO_PI / n
    for a in range(len(cand)):
        for b in range(a, len(cand)):
            sep = abs(cand[b] - cand[a]) * step
            sep = min(sep, TWO_PI - sep)
            if sep > best[0] + 1e-15:
                best = (sep, cand[a], cand[b])
    return best[1], best[2]


def check_angle_chain(fan: NormalFan, zeta: UnitDir, r0: float, r: float) -> SlackReport:
    """Slacks of cos^-1(r0/2r) <= a1 <= a2 - pi <= pi - cos^-1(r0/2r) at
    the fan's extremal directions.

    The extremal pair is tried in both orientations (which extreme plays
    zeta0) and the orientation with the smaller total violation is kept.
    """
    if not 0.0 < r0 < 2.0 * r:
        raise ValueError("check_angle_chain requires 0 < r0 < 2r")
    if fan.full_circle:
        return SlackReport(applicable=False, reason="full-circle fan has no extremal pair")
    if fan.single_direction:
        return SlackReport(applicable=False, reason="single-direction fan (regular point)")
    c = math.acos(min(1.0, max(-1.0, r0 / (2.0 * r))))
    best = None
    for z0, x0 in ((fan.extremal_lo, fan.extremal_hi), (fan.extremal_hi, fan.extremal_lo)):
        a1 = interior_angle(Point2(z0.ux, z0.uy), Point2(0.0, 0.0), Point2(zeta.ux, zeta.uy))
        a2 = oriented_angle(zeta.ux, zeta.uy, x0.ux, x0.uy)
        # the chain needs angle(zeta, xi0) measured past pi; take the
        # representative on the far side of zeta
        if a2 < math.pi:
            a2 = TWO_PI - a2
        slacks = (a1 - c, (a2 - math.pi) - a1, (math.pi - c) - (a2 - math.pi))
        violation = sum(min(v, 0.0) for v in slacks)
        cand = SlackReport(applicable=True, slacks=slacks, a1=a1, a2=a2, threshold=c)
        if best is None or violation > best_violation:
            best, best_violation = cand, violation
    return best


def build_certificate(grid: Grid, rho: float,
                      direction_samples: int = 1024) -> TraceResult:
    """Run the full trace at level rho and annex per-contact fans.

    Returns a covered result when the rho-opening loses nothing beyond
    the boundary band. Fans are computed at the grid's interior-sphere
    radius; fan or chain failures are recorded as anomalies, not raised.
    """
    x0 = find_witness(grid, rho)
    if x0 is None:
        return TraceResult(covered=True)
    s0, zeta, r0 = project_boundary(grid, x0)
    r1, x1, clipped1 = grow_one_contact(grid, s0, zeta, t_start=r0)
    result = TraceResult(covered=False)
    if clipped1:
        result.anomalies.append("one-contact growth clipped by the raster domain")
    sep = DISTINCT_SEP_CELLS * grid.h
    s0p = contact_point(grid, x1, r1, [(s0, sep)])
    r2, x2, zeta1 = grow_two_contact(grid, s0, s0p, side_hint=x1, t_start=r1)
    s0pp = contact_point(grid, x2, r2, [(s0, sep), (s0p, sep)])
    angles = (
        interior_angle(s0p, s0, s0pp),
        interior_angle(s0, s0p, s0pp),
        interior_angle(s0, s0pp, s0p),
    )
    m = Point2(0.5 * (s0.x + s0p.x), 0.5 * (s0.y + s0p.y))
    result.certificate = Certificate(
        x0=x0, s0=s0, r0=r0, zeta=zeta, r1=r1, x1=x1, s0p=s0p,
        m=m, zeta1=zeta1, r2=r2, x2=x2, s0pp=s0pp, triangle_angles=angles,
    )
    r_fan, _ = interior_sphere_radius(grid)
    result.fan_radius = r_fan
    contacts = {
        "s0": (s0, UnitDir.from_vector(x1.x - s0.x, x1.y - s0.y), r1),
        "s0p": (s0p, UnitDir.from_vector(x1.x - s0p.x, x1.y - s0p.y), r1),
        "s0pp": (s0pp, UnitDir.from_vector(x2.x - s0pp.x, x2.y - s0pp.y), r2),
    }
    for name, (pt, inward, ball_r) in contacts.items():
        try:
            fan = normal_fan(grid, pt, r_fan, direction_samples)
        except EmptyFanError as exc:
            result.anomalies.append(f"{name}: {exc}")
            continue
        result.fans[name] = fan
        if ball_r < 2.0 * r_fan:
            result.lemma_slacks[name] = check_angle_chain(fan, inward, ball_r, r_fan)
        else:
            result.lemma_slacks[name] = SlackReport(
                applicable=False,
                reason="tangent-ball radius at least the fan diameter",
            )
    return result
