"""Analytic CSG shapes and their rasterization onto occupancy grids.

Primitives are closed sets (disks and half-planes); membership uses
center-point sampling so erosion/dilation stay exactly dual under
complement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geom_core import Point2

MAX_CELLS = 10**8


class ShapeParseError(ValueError):
    """Malformed shape-spec text."""


class ResourceError(RuntimeError):
    """Requested raster exceeds the cell budget."""


@dataclass(frozen=True)
class Disk:
    cx: float
    cy: float
    r: float

    def contains(self, x, y):
        return (x - self.cx) ** 2 + (y - self.cy) ** 2 <= self.r * self.r


@dataclass(frozen=True)
class HalfPlane:
    """Closed half-plane {p : <n, p> <= c} with unit normal n."""

    nx: float
    ny: float
    c: float

    def contains(self, x, y):
        return self.nx * x + self.ny * y <= self.c


@dataclass(frozen=True)
class Union:
    children: tuple

    def contains(self, x, y):
        out = self.children[0].contains(x, y)
        for ch in self.children[1:]:
            out = out | ch.contains(x, y)
        return out


@dataclass(frozen=True)
class Intersect:
    children: tuple

    def contains(self, x, y):
        out = self.children[0].contains(x, y)
        for ch in self.children[1:]:
            out = out & ch.contains(x, y)
        return out


@dataclass(frozen=True)
class Complement:
    child: object

    def contains(self, x, y):
        return ~np.asarray(self.child.contains(x, y))


ShapeSpec = Disk | HalfPlane | Union | Intersect | Complement


def evaluate_membership(spec: ShapeSpec, p: Point2) -> bool:
    return bool(np.asarray(spec.contains(np.float64(p.x), np.float64(p.y))))


@dataclass
class Grid:
    h: float
    origin: Point2  # center of cell (ix=0, iy=0)
    occupancy: np.ndarray = field(repr=False)  # bool, shape (height, width)

    @property
    def width(self) -> int:
        return self.occupancy.shape[1]

    @property
    def height(self) -> int:
        return self.occupancy.shape[0]

    def cell_center(self, ix: int, iy: int) -> Point2:
        return Point2(self.origin.x + ix * self.h, self.origin.y + iy * self.h)

    def nearest_cell(self, p: Point2) -> tuple[int, int]:
        ix = int(round((p.x - self.origin.x) / self.h))
        iy = int(round((p.y - self.origin.y) / self.h))
        return ix, iy

    def with_occupancy(self, occ: np.ndarray) -> "Grid":
        return Grid(h=self.h, origin=self.origin, occupancy=occ)

    def centers_mesh(self):
        xs = self.origin.x + self.h * np.arange(self.width)
        ys = self.origin.y + self.h * np.arange(self.height)
        return np.meshgrid(xs, ys)


def rasterize(spec: ShapeSpec, bbox: tuple[float, float, float, float], h: float) -> Grid:
    """Sample the spec at cell centers over bbox = (xmin, ymin, xmax, ymax)."""
    xmin, ymin, xmax, ymax = bbox
    if h <= 0.0:
        raise ValueError("spacing must be positive")
    if xmax <= xmin or ymax <= ymin:
        raise ValueError("bbox must be nonempty")
    nx = max(1, int(math.ceil((xmax - xmin) / h)))
    ny = max(1, int(math.ceil((ymax - ymin) / h)))
    if nx * ny > MAX_CELLS:
        raise ResourceError(f"raster of {nx}x{ny} cells exceeds the {MAX_CELLS} budget")
    xs = xmin + h * (np.arange(nx) + 0.5)
    ys = ymin + h * (np.arange(ny) + 0.5)
    X, Y = np.meshgrid(xs, ys)
    occ = np.asarray(spec.contains(X, Y), dtype=bool)
    return Grid(h=h, origin=Point2(xs[0], ys[0]), occupancy=occ)


def boundary_mask(grid: Grid) -> np.ndarray:
    """Occupied cells with an unoccupied 4-neighbor.

    Cells beyond the grid edge count as neither occupied nor unoccupied
    (the border is outside the domain), so clipping creates no boundary.
    """
    occ = grid.occupancy
    unocc = ~occ
    nb = np.zeros_like(occ)
    nb[:-1, :] |= unocc[1:, :]
    nb[1:, :] |= unocc[:-1, :]
    nb[:, :-1] |= unocc[:, 1:]
    nb[:, 1:] |= unocc[:, :-1]
    return occ & nb


def boundary_cells(grid: Grid) -> list[Point2]:
    iy, ix = np.nonzero(boundary_mask(grid))
    return [grid.cell_center(int(j), int(i)) for i, j in zip(iy, ix)]


# ---------------------------------------------------------------------------
# line-oriented text format:
#   disk cx cy r
#   halfplane nx ny c
#   union{ ... }   intersect{ ... }   complement{ ... }
# ---------------------------------------------------------------------------

def _tokenize(text: str) -> list[str]:
    return text.replace("{", " { ").replace("}", " } ").split()


def parse_shape(text: str) -> ShapeSpec:
    tokens = _tokenize(text)
    if not tokens:
        raise ShapeParseError("empty shape spec")
    spec, pos = _parse_node(tokens, 0)
    if pos != len(tokens):
        raise ShapeParseError(f"trailing tokens starting at {tokens[pos]!r}")
    return spec


def _parse_float(tokens: list[str], pos: int) -> tuple[float, int]:
    if pos >= len(tokens):
        raise ShapeParseError("unexpected end of spec, number expected")
    try:
        return float(tokens[pos]), pos + 1
    except ValueError:
        raise ShapeParseError(f"number expected, got {tokens[pos]!r}") from None


def _parse_node(tokens: list[str], pos: int):
    if pos >= len(tokens):
        raise ShapeParseError("unexpected end of spec")
    head = tokens[pos]
    pos += 1
    if head == "disk":
        cx, pos = _parse_float(tokens, pos)
        cy, pos = _parse_float(tokens, pos)
        r, pos = _parse_float(tokens, pos)
        if r <= 0.0:
            raise ShapeParseError("disk radius must be positive")
        return Disk(cx, cy, r), pos
    if head == "halfplane":
        nx, pos = _parse_float(tokens, pos)
        ny, pos = _parse_float(tokens, pos)
        c, pos = _parse_float(tokens, pos)
        n = math.hypot(nx, ny)
        if n == 0.0:
            raise ShapeParseError("halfplane normal must be nonzero")
        return HalfPlane(nx / n, ny / n, c / n), pos
    if head in ("union", "intersect", "complement"):
        if pos >= len(tokens) or tokens[pos] != "{":
            raise ShapeParseError(f"'{{' expected after {head}")
        pos += 1
        children = []
        while pos < len(tokens) and tokens[pos] != "}":
            child, pos = _parse_node(tokens, pos)
            children.append(child)
        if pos >= len(tokens):
            raise ShapeParseError(f"unclosed {head} block")
        pos += 1
        if head == "complement":
            if len(children) != 1:
                raise ShapeParseError("complement takes exactly one child")
            return Complement(children[0]), pos
        if not children:
            raise ShapeParseError(f"{head} needs at least one child")
        cls = Union if head == "union" else Intersect
        return cls(tuple(children)), pos
    raise ShapeParseError(f"unknown shape token {head!r}")


def _polygon_bbox(planes: list[HalfPlane]) -> tuple[float, float, float, float] | None:
    """Bounding box of an intersection of half-planes, or None if unbounded.

    Bounded iff the normals positively span the plane (largest angular
    gap below pi); the box then comes from the feasible pairwise line
    intersections.
    """
    if len(planes) < 3:
        return None
    angles = sorted(math.atan2(p.ny, p.nx) for p in planes)
    gaps = [angles[(i + 1) % len(angles)] - angles[i] for i in range(len(angles))]
    gaps[-1] += 2.0 * math.pi
    if max(gaps) >= math.pi - 1e-12:
        return None
    verts = []
    for i in range(len(planes)):
        for j in range(i + 1, len(planes)):
            a, b = planes[i], planes[j]
            det = a.nx * b.ny - a.ny * b.nx
            if abs(det) < 1e-12:
                continue
            x = (a.c * b.ny - b.c * a.ny) / det
            y = (a.nx * b.c - b.nx * a.c) / det
            if all(p.nx * x + p.ny * y <= p.c + 1e-9 for p in planes):
                verts.append((x, y))
    if not verts:
        return None
    xs, ys = zip(*verts)
    return min(xs), min(ys), max(xs), max(ys)


def _box_intersect(boxes):
    boxes = [b for b in boxes if b is not None]
    if not boxes:
        return None
    xs0, ys0, xs1, ys1 = zip(*boxes)
    b = max(xs0), max(ys0), min(xs1), min(ys1)
    return b if b[0] <= b[2] and b[1] <= b[3] else None


def finite_bbox(spec: ShapeSpec) -> tuple[float, float, float, float] | None:
    """Bounding box of the shape's finite extent, or None when unbounded.

    Positive disks and bounded half-plane intersections contribute
    boxes; complements are treated as unbounded (conservative).
    """

    def visit(node) -> tuple[float, float, float, float] | None:
        if isinstance(node, Disk):
            return node.cx - node.r, node.cy - node.r, node.cx + node.r, node.cy + node.r
        if isinstance(node, HalfPlane):
            return None
        if isinstance(node, Complement):
            return None
        if isinstance(node, Union):
            boxes = [visit(ch) for ch in node.children]
            if any(b is None for b in boxes):
                return None
            xs0, ys0, xs1, ys1 = zip(*boxes)
            return min(xs0), min(ys0), max(xs1), max(ys1)
        if isinstance(node, Intersect):
            boxes = [visit(ch) for ch in node.children]
            planes = [ch for ch in node.children if isinstance(ch, HalfPlane)]
            boxes.append(_polygon_bbox(planes))
            return _box_intersect(boxes)
        return None

    return visit(spec)
