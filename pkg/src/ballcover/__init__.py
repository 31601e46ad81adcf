"""Planar toolkit for the interior-sphere to union-of-balls covering
theorem: exact distance transforms, disk morphology, three-circle lemma
checks, and proof-trace certificates on rasterized shapes."""

from .certificate import (
    Certificate,
    NormalFan,
    SlackReport,
    TraceResult,
    build_certificate,
    find_witness,
)
from .geom_core import Circle, Point2, UnitDir
from .morphology import (
    VerificationReport,
    ball_union_radius,
    dilate,
    erode,
    interior_sphere_radius,
    opening,
    verify_theorem,
)
from .shape_model import Grid, parse_shape, rasterize

__version__ = "0.1.0"

__all__ = [
    "Certificate", "Circle", "Grid", "NormalFan", "Point2", "SlackReport",
    "TraceResult", "UnitDir", "VerificationReport", "ball_union_radius",
    "build_certificate", "dilate", "erode", "find_witness",
    "interior_sphere_radius", "opening", "parse_shape", "rasterize",
    "verify_theorem", "__version__",
]
