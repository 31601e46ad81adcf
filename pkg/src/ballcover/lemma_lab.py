"""Three-circle configuration lab.

Builds the configuration of two equal circles through the origin placed
symmetrically about the y-axis plus a third smaller circle through the
origin, and checks the angle identity and the pi/3 bound that drive the
sharp r/sqrt(3) covering constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom_core import (
    Circle,
    Point2,
    circle_circle_intersection,
    circle_line_intersection,
    interior_angle,
    second_intersection,
)

ORIGIN = Point2(0.0, 0.0)

# Second intersection points closer to O than this (relative) are treated
# as a collapsed tangency.
DEGENERACY_TOL = 1e-9


class ConstraintError(ValueError):
    """A hypothesis inequality of the configuration fails."""


class DegenerateConfigurationError(ValueError):
    """The construction collapses (tangency, coincident points)."""


@dataclass(frozen=True)
class LemmaConfig:
    r: float
    r0: float
    alpha: float
    beta: float
    A: Point2
    B: Point2
    C: Point2
    O: Point2
    D: Point2
    E: Point2
    F: Point2
    S_A: Circle
    S_B: Circle
    S_C: Circle
    angle_EOD: float
    angle_CAB: float


@dataclass(frozen=True)
class LemmaSweepReport:
    trials: int
    max_identity_residual: float
    max_angle_EOD: float
    violations: int


def build_config(r: float, r0: float, alpha: float, beta: float) -> LemmaConfig:
    """Construct the full configuration, validating the hypotheses."""
    if r <= 0.0:
        raise ConstraintError("r > 0 fails")
    if r0 <= 0.0:
        raise ConstraintError("r0 > 0 fails")
    if not 0.0 < alpha < math.pi:
        raise ConstraintError("alpha in (0, pi) fails")
    if not 0.0 <= beta <= alpha:
        raise ConstraintError("0 <= beta <= alpha fails")
    if alpha > math.pi - beta:
        raise ConstraintError("alpha <= pi - beta fails")
    if r0 * math.sin(alpha) < r * math.sin(beta):
        raise ConstraintError("r0*sin(alpha) >= r*sin(beta) fails")

    A = Point2(r0 * math.cos(alpha), r0 * math.sin(alpha))
    B = Point2(r * math.cos(beta), r * math.sin(beta))
    C = Point2(-r * math.cos(beta), r * math.sin(beta))
    if B.dist(C) <= DEGENERACY_TOL * r:
        raise DegenerateConfigurationError("B and C coincide")
    S_A = Circle(A, r0)
    S_B = Circle(B, r)
    S_C = Circle(C, r)

    scale = max(r, r0)
    D = _second_point(circle_circle_intersection(S_A, S_C), scale, "S_A and S_C")
    E = _second_point(circle_circle_intersection(S_A, S_B), scale, "S_A and S_B")
    F = _second_point(circle_line_intersection(S_A, ORIGIN, 0.0, 1.0), scale, "S_A and the y-axis")

    angle_EOD = interior_angle(E, ORIGIN, D)
    angle_CAB = interior_angle(C, A, B)
    return LemmaConfig(
        r=r, r0=r0, alpha=alpha, beta=beta,
        A=A, B=B, C=C, O=ORIGIN, D=D, E=E, F=F,
        S_A=S_A, S_B=S_B, S_C=S_C,
        angle_EOD=angle_EOD, angle_CAB=angle_CAB,
    )


def _second_point(points: list[Point2], scale: float, what: str) -> Point2:
    q = second_intersection(points, ORIGIN)
    if q is None or q.norm() <= DEGENERACY_TOL * scale:
        raise DegenerateConfigurationError(
            f"second intersection of {what} collapses onto the origin"
        )
    return q


def cos_angle_CAB(config: LemmaConfig) -> float:
    """cos of the angle at A in triangle ABC, from the closed-form side lengths."""
    r, r0, a, b = config.r, config.r0, config.alpha, config.beta
    ab2 = r * r + r0 * r0 - 2.0 * r * r0 * (math.sin(b) * math.sin(a) + math.cos(b) * math.cos(a))
    ac2 = r * r + r0 * r0 - 2.0 * r * r0 * (math.sin(b) * math.sin(a) - math.cos(b) * math.cos(a))
    bc2 = 4.0 * r * r * math.cos(b) ** 2
    if ab2 <= 0.0 or ac2 <= 0.0 or bc2 <= 0.0:
        raise DegenerateConfigurationError("triangle ABC collapses")
    val = (ab2 + ac2 - bc2) / (2.0 * math.sqrt(ab2 * ac2))
    return max(-1.0, min(1.0, val))


def check_angle_identity(config: LemmaConfig) -> float:
    """Residual of angle(EOD) = pi - angle(CAB), both measured geometrically."""
    return abs(config.angle_EOD - (math.pi - config.angle_CAB))


def check_pi3_bound(config: LemmaConfig) -> tuple[bool, float]:
    """Check the sub-threshold angle bound; returns (pass, slack in radians).

    Requires r0 < r/sqrt(3). Asserts both the cosine inequality
    cos(CAB) <= (r0^2 - r^2)/(r0^2 + r^2) and angle(EOD) < pi/3.
    """
    r, r0 = config.r, config.r0
    if r0 >= r / math.sqrt(3.0):
        raise ConstraintError("r0 < r/sqrt(3) fails")
    cos_bound = (r0 * r0 - r * r) / (r0 * r0 + r * r)
    cos_ok = cos_angle_CAB(config) <= cos_bound + 1e-12
    slack = math.pi / 3.0 - config.angle_EOD
    return (cos_ok and slack > 0.0), slack


def max_angle_outside(config: LemmaConfig, sample_count: int) -> float:
    """Largest angle at O spanned by sampled points of S_A outside both big circles.

    Samples S_A uniformly in arc length. Returns 0.0 when no sampled point
    lies strictly outside both circles (empty arc).
    """
    if sample_count < 3:
        raise ValueError("sample_count must be >= 3")
    theta = np.linspace(0.0, 2.0 * math.pi, sample_count, endpoint=False)
    px = config.A.x + config.r0 * np.cos(theta)
    py = config.A.y + config.r0 * np.sin(theta)
    outside = (
        (np.hypot(px - config.B.x, py - config.B.y) > config.r)
        & (np.hypot(px - config.C.x, py - config.C.y) > config.r)
    )
    # points at the origin have no direction from O
    rad = np.hypot(px, py)
    keep = outside & (rad > 1e-12 * max(config.r, config.r0))
    if not np.any(keep):
        return 0.0
    phi = np.sort(np.arctan2(py[keep], px[keep]))
    if phi.size == 1:
        return 0.0
    # The kept directions form a few circular arcs; the extreme pair is an
    # arc-endpoint pair, so only endpoints need pairwise comparison.
    gap_thresh = 1.5 * 2.0 * math.pi / sample_count
    gaps = np.diff(phi, append=phi[0] + 2.0 * math.pi)
    cuts = np.nonzero(gaps > gap_thresh)[0]
    if cuts.size == 0:
        return math.pi  # kept directions cover the full circle
    starts = phi[(cuts + 1) % phi.size]
    ends = phi[cuts]
    # Antipodal overlap between two arcs saturates the separation at pi.
    for i in range(starts.size):
        a0, a1 = starts[i], ends[i]
        if a1 < a0:
            a1 += 2.0 * math.pi
        for j in range(starts.size):
            b0, b1 = starts[j] + math.pi, ends[j] + math.pi
            if b1 < b0:
                b1 += 2.0 * math.pi
            for shift in (-2.0 * math.pi, 0.0, 2.0 * math.pi):
                if max(a0, b0 + shift) <= min(a1, b1 + shift):
                    return math.pi
    pts = np.concatenate([starts, ends])
    diff = np.abs(pts[:, None] - pts[None, :])
    sep = np.minimum(diff, 2.0 * math.pi - diff)
    return float(sep.max())


def sample_hypotheses(rng: np.random.Generator) -> tuple[float, float, float, float]:
    """Draw one (r, r0, alpha, beta) tuple satisfying the constraint chain,
    with r = 1 and r0 < r/sqrt(3)."""
    eps = 1e-3
    while True:
        alpha = rng.uniform(eps, math.pi - eps)
        beta = rng.uniform(0.0, min(alpha, math.pi - alpha))
        r = 1.0
        lo = r * math.sin(beta) / math.sin(alpha)
        hi = r / math.sqrt(3.0)
        if lo >= hi:
            continue
        r0 = rng.uniform(max(lo, 1e-6), hi)
        if r0 <= 0.0 or r0 >= hi:
            continue
        return r, r0, alpha, beta


def run_sweep(trials: int, seed: int, collect_rows: bool = False):
    """Randomized sweep over valid hypothesis tuples with r0 < r/sqrt(3).

    Returns (LemmaSweepReport, rows); rows is empty unless collect_rows.
    """
    rng = np.random.default_rng(seed)
    max_res = 0.0
    max_eod = 0.0
    violations = 0
    rows = []
    done = 0
    while done < trials:
        r, r0, alpha, beta = sample_hypotheses(rng)
        try:
            cfg = build_config(r, r0, alpha, beta)
        except DegenerateConfigurationError:
            continue
        res = check_angle_identity(cfg)
        ok, slack = check_pi3_bound(cfg)
        cos_geo = cos_angle_CAB(cfg)
        max_res = max(max_res, res)
        max_eod = max(max_eod, cfg.angle_EOD)
        if res >= 1e-9 or not ok:
            violations += 1
        if collect_rows:
            rows.append((r, r0, alpha, beta, math.acos(cos_geo), cfg.angle_EOD, res, slack))
        done += 1
    return LemmaSweepReport(trials, max_res, max_eod, violations), rows
