"""SVG figure emission in physical coordinates.

A fixed 1000-unit viewport maps the grid's bounding box with a y-flip;
occupancy layers are drawn as one path of cell squares over the layer's
boundary cells, analytic elements (balls, triangles, fan arcs) as plain
SVG primitives with 1-unit strokes.
"""

from __future__ import annotations

import math

import numpy as np

from .geom_core import Point2, UnitDir
from .shape_model import Grid, boundary_mask

VIEWPORT = 1000.0


class SvgCanvas:
    def __init__(self, bbox: tuple[float, float, float, float]):
        xmin, ymin, xmax, ymax = bbox
        if xmax <= xmin or ymax <= ymin:
            raise ValueError("bbox must be nonempty")
        self.xmin, self.ymin, self.xmax, self.ymax = bbox
        self.scale = VIEWPORT / max(xmax - xmin, ymax - ymin)
        self._parts: list[str] = []

    def to_view(self, x: float, y: float) -> tuple[float, float]:
        return ((x - self.xmin) * self.scale,
                (self.ymax - y) * self.scale)

    def _fmt(self, v: float) -> str:
        return f"{v:.2f}"

    def add_grid_outline(self, grid: Grid, color: str, opacity: float = 1.0) -> None:
        """One path covering the boundary cells of the grid's occupancy."""
        mask = boundary_mask(grid)
        iy, ix = np.nonzero(mask)
        if iy.size == 0:
            return
        side = grid.h * self.scale
        cmds = []
        for i, j in zip(iy.tolist(), ix.tolist()):
            cx = grid.origin.x + j * grid.h - 0.5 * grid.h
            cy = grid.origin.y + i * grid.h + 0.5 * grid.h
            vx, vy = self.to_view(cx, cy)
            cmds.append(f"M{self._fmt(vx)} {self._fmt(vy)}h{self._fmt(side)}v{self._fmt(side)}h-{self._fmt(side)}z")
        self._parts.append(
            f'<path d="{"".join(cmds)}" fill="{color}" fill-opacity="{opacity}" stroke="none"/>'
        )

    def add_circle(self, center: Point2, radius: float, color: str,
                   fill: str = "none", width: float = 1.0) -> None:
        vx, vy = self.to_view(center.x, center.y)
        self._parts.append(
            f'<circle cx="{self._fmt(vx)}" cy="{self._fmt(vy)}" r="{self._fmt(radius * self.scale)}" '
            f'fill="{fill}" stroke="{color}" stroke-width="{width}"/>'
        )

    def add_dot(self, p: Point2, color: str, radius_px: float = 4.0) -> None:
        vx, vy = self.to_view(p.x, p.y)
        self._parts.append(
            f'<circle cx="{self._fmt(vx)}" cy="{self._fmt(vy)}" r="{radius_px}" fill="{color}" stroke="none"/>'
        )

    def add_polygon(self, points: list[Point2], color: str, width: float = 1.0) -> None:
        cmds = []
        for k, p in enumerate(points):
            vx, vy = self.to_view(p.x, p.y)
            cmds.append(f"{'M' if k == 0 else 'L'}{self._fmt(vx)} {self._fmt(vy)}")
        cmds.append("z")
        self._parts.append(
            f'<path d="{"".join(cmds)}" fill="none" stroke="{color}" stroke-width="{width}"/>'
        )

    def add_fan(self, s: Point2, r: float, lo: UnitDir, hi: UnitDir, color: str) -> None:
        """Two extremal rays and the connecting arc of a direction fan."""
        for u in (lo, hi):
            vx0, vy0 = self.to_view(s.x, s.y)
            vx1, vy1 = self.to_view(s.x + r * u.ux, s.y + r * u.uy)
            self._parts.append(
                f'<line x1="{self._fmt(vx0)}" y1="{self._fmt(vy0)}" '
                f'x2="{self._fmt(vx1)}" y2="{self._fmt(vy1)}" stroke="{color}" stroke-width="1"/>'
            )
        a0 = math.atan2(lo.uy, lo.ux)
        a1 = math.atan2(hi.uy, hi.ux)
        if a1 < a0:
            a1 += 2.0 * math.pi
        x0, y0 = self.to_view(s.x + r * math.cos(a0), s.y + r * math.sin(a0))
        x1, y1 = self.to_view(s.x + r * math.cos(a1), s.y + r * math.sin(a1))
        large = 1 if a1 - a0 > math.pi else 0
        rr = self._fmt(r * self.scale)
        # sweep=0: view coordinates are y-flipped
        self._parts.append(
            f'<path d="M{self._fmt(x0)} {self._fmt(y0)}A{rr} {rr} 0 {large} 0 '
            f'{self._fmt(x1)} {self._fmt(y1)}" fill="none" stroke="{color}" stroke-width="1"/>'
        )

    def render(self) -> str:
        w = (self.xmax - self.xmin) * self.scale
        h = (self.ymax - self.ymin) * self.scale
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {self._fmt(w)} {self._fmt(h)}" '
            f'width="{self._fmt(w)}" height="{self._fmt(h)}">'
            f'<rect width="{self._fmt(w)}" height="{self._fmt(h)}" fill="white"/>'
        )
        return head + "".join(self._parts) + "</svg>"


def write_svg(path, canvas: SvgCanvas) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(canvas.render())
        f.write("\n")
