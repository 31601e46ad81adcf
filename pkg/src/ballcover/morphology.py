"""Disk-structuring-element morphology on occupancy grids.

Distances are exact Euclidean cell-center distances. The discrete ball
convention is B(c; rho) = cells whose centers lie within rho of c's
center; erosion keeps a cell iff its distance to the unoccupied phase is
>= rho, dilation keeps cells within rho of the occupied phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geom_core import Point2
from .shape_model import Grid, boundary_mask

SQRT3 = math.sqrt(3.0)

BISECT_ITERS = 40


class UndefinedRadiusError(RuntimeError):
    """The grid has no boundary, so the radius estimators are undefined."""


@dataclass
class DistanceField:
    h: float
    origin: Point2
    values: np.ndarray  # distances in physical units; np.inf when unreachable

    def sample(self, x, y):
        """Bilinear sample at physical coordinates (clamped to the grid)."""
        v = self.values
        fx = np.clip((np.asarray(x, dtype=float) - self.origin.x) / self.h, 0.0, v.shape[1] - 1.0)
        fy = np.clip((np.asarray(y, dtype=float) - self.origin.y) / self.h, 0.0, v.shape[0] - 1.0)
        ix = np.minimum(fx.astype(np.int64), v.shape[1] - 2) if v.shape[1] > 1 else np.zeros_like(fx, dtype=np.int64)
        iy = np.minimum(fy.astype(np.int64), v.shape[0] - 2) if v.shape[0] > 1 else np.zeros_like(fy, dtype=np.int64)
        tx = fx - ix
        ty = fy - iy
        if v.shape[1] == 1:
            tx = np.zeros_like(tx)
        if v.shape[0] == 1:
            ty = np.zeros_like(ty)
        v00 = v[iy, ix]
        v10 = v[iy, np.minimum(ix + 1, v.shape[1] - 1)]
        v01 = v[np.minimum(iy + 1, v.shape[0] - 1), ix]
        v11 = v[np.minimum(iy + 1, v.shape[0] - 1), np.minimum(ix + 1, v.shape[1] - 1)]
        out = 0.0
        # zero-weight corners are skipped so infinite (unreachable) values
        # do not produce inf * 0 = nan
        for vv, wt in (
            (v00, (1 - tx) * (1 - ty)),
            (v10, tx * (1 - ty)),
            (v01, (1 - tx) * ty),
            (v11, tx * ty),
        ):
            out = out + np.where(wt > 0.0, vv, 0.0) * wt
        return out


@dataclass
class VerificationReport:
    shape_id: str
    h: float
    r_max: float
    r_max_bracket: float
    rho_star: float
    rho_star_bracket: float
    ratio: float
    bound: float
    tolerance: float
    verdict: str  # "pass" | "fail" | "not-applicable"
    uncovered_witness: Point2 | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def edt(grid: Grid, to_occupied: bool) -> DistanceField:
    """Exact distance to the nearest cell of the target polarity."""
    target = grid.occupancy if to_occupied else ~grid.occupancy
    sq = _kernels.edt_squared_cells(target)
    vals = np.sqrt(sq) * grid.h
    vals[_kernels.is_unreachable(sq)] = np.inf
    return DistanceField(h=grid.h, origin=grid.origin, values=vals)


def _dist_to_unoccupied_sq_cells(grid: Grid) -> np.ndarray:
    return _kernels.edt_squared_cells(~grid.occupancy)


# Extra slack (in cells) on the coverage radius. Kept at zero: raster
# boundary cells always sit at least one cell from the unoccupied phase,
# which already absorbs center quantization; nonzero slack inflates
# corner radius estimates past the not-applicable cutoff.
COVER_SLACK_CELLS = 0.0


def covered_mask(grid: Grid, rho: float, d_un_sq: np.ndarray | None = None) -> np.ndarray:
    """Cells lying in some ball of radius >= rho contained in the grid.

    This is opening-by-rho membership computed through maximal inscribed
    balls: cell b is covered iff a center c with inscribed radius
    d(c) >= rho has |b - c| <= d(c) (plus half-cell slack). Monotone
    decreasing in rho by construction.
    """
    if rho <= 0.0:
        return grid.occupancy.copy()
    if d_un_sq is None:
        d_un_sq = _dist_to_unoccupied_sq_cells(grid)
    r_cells = rho / grid.h
    sources = grid.occupancy & (d_un_sq >= r_cells * r_cells)
    if not sources.any():
        return np.zeros_like(grid.occupancy)
    p = _kernels.power_transform(d_un_sq, sources)
    s = COVER_SLACK_CELLS
    # the 0.25 term covers the worst half-cell lateral offset of a source
    # center from the analytic inscribed-ball center (squared cell units)
    thresh = 2.0 * s * r_cells + s * s + 0.25
    return p <= thresh


def erode(grid: Grid, rho: float) -> Grid:
    if rho < 0.0:
        raise ValueError("rho must be >= 0")
    if rho == 0.0:
        return grid.with_occupancy(grid.occupancy.copy())
    d = edt(grid, to_occupied=False)
    return grid.with_occupancy(grid.occupancy & (d.values >= rho))


def dilate(grid: Grid, rho: float) -> Grid:
    if rho < 0.0:
        raise ValueError("rho must be >= 0")
    if rho == 0.0:
        return grid.with_occupancy(grid.occupancy.copy())
    if not grid.occupancy.any():
        return grid.with_occupancy(grid.occupancy.copy())
    d = edt(grid, to_occupied=True)
    return grid.with_occupancy(d.values <= rho)


def opening(grid: Grid, rho: float) -> Grid:
    return dilate(erode(grid, rho), rho)


def _bisect_sup(feasible, lo: float, hi: float) -> tuple[float, float]:
    """Largest x in [lo, hi] with feasible(x), for monotone feasibility.

    Assumes feasible(lo). Returns (midpoint, bracket width) of the final
    interval [last-feasible, first-infeasible].
    """
    if feasible(hi):
        return hi, 0.0
    a, b = lo, hi
    for _ in range(BISECT_ITERS):
        m = 0.5 * (a + b)
        if feasible(m):
            a = m
        else:
            b = m
    return 0.5 * (a + b), b - a


def interior_sphere_radius(grid: Grid) -> tuple[float, float]:
    """Largest r (within the raster) such that every boundary cell lies in
    the opening by a radius-r disk. Returns (r, bracket width)."""
    bmask = boundary_mask(grid)
    if not bmask.any():
        raise UndefinedRadiusError("grid has no boundary cells")
    d_un_sq = _dist_to_unoccupied_sq_cells(grid)
    d_max = math.sqrt(float(d_un_sq[grid.occupancy].max())) * grid.h

    def feasible(r: float) -> bool:
        if r == 0.0:
            return True
        return bool(covered_mask(grid, r, d_un_sq)[bmask].all())

    return _bisect_sup(feasible, 0.0, d_max)


def ball_union_radius(grid: Grid) -> tuple[float, float]:
    """Largest rho (within the raster) such that the rho-opening equals the
    grid up to the one-cell boundary band. Returns (rho, bracket width)."""
    if not boundary_mask(grid).any():
        raise UndefinedRadiusError("grid has no boundary cells")
    d_un_sq = _dist_to_unoccupied_sq_cells(grid)
    d_max = math.sqrt(float(d_un_sq[grid.occupancy].max())) * grid.h
    band_sq_cells = 4.0  # cells deeper than 2h must stay covered

    def feasible(rho: float) -> bool:
        if rho == 0.0:
            return True
        lost = grid.occupancy & ~covered_mask(grid, rho, d_un_sq)
        return bool((d_un_sq[lost] <= band_sq_cells).all())

    return _bisect_sup(feasible, 0.0, d_max)


def uncovered_cell(grid: Grid, rho: float) -> Point2 | None:
    """Deepest occupied cell not covered by the rho-opening, if any.

    Cells in the one-band boundary layer (depth <= 2h) are ignored; they
    are lost to center sampling, not to genuine uncoverage.
    """
    d_un_sq = _dist_to_unoccupied_sq_cells(grid)
    lost = grid.occupancy & ~covered_mask(grid, rho, d_un_sq)
    lost &= d_un_sq > 4.0
    if not lost.any():
        return None
    depth = np.where(lost, d_un_sq, -np.inf)
    iy, ix = np.unravel_index(int(np.argmax(depth)), depth.shape)
    return grid.cell_center(int(ix), int(iy))


def verify_theorem(grid: Grid, shape_id: str = "", tolerance_c: float = 4.0) -> VerificationReport:
    """Check that the ball-union radius is at least the interior-sphere
    radius divided by sqrt(3), at raster tolerance."""
    h = grid.h
    tol = tolerance_c * h
    r_max, r_br = interior_sphere_radius(grid)
    if r_max <= tol:
        return VerificationReport(
            shape_id=shape_id, h=h, r_max=r_max, r_max_bracket=r_br,
            rho_star=0.0, rho_star_bracket=0.0, ratio=0.0,
            bound=1.0 / SQRT3, tolerance=tol, verdict="not-applicable",
        )
    rho_star, rho_br = ball_union_radius(grid)
    ratio = rho_star / r_max
    ok = rho_star >= r_max / SQRT3 - tol
    witness = None
    if not ok:
        witness = uncovered_cell(grid, r_max / SQRT3 - tol)
    return VerificationReport(
        shape_id=shape_id, h=h, r_max=r_max, r_max_bracket=r_br,
        rho_star=rho_star, rho_star_bracket=rho_br, ratio=ratio,
        bound=1.0 / SQRT3, tolerance=tol,
        verdict="pass" if ok else "fail", uncovered_witness=witness,
    )
