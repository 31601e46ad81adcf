"""Command-line interface: lemma sweeps, single-shape verification,
proof traces, and the built-in corpus run.

Reports are deterministic for a fixed configuration and seed; wall-clock
timings go to sidecar files so the main CSV/JSON outputs stay
byte-identical across runs.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import certificate as cert
from . import lemma_lab, morphology
from .corpus import builtin_corpus
from .shape_model import (
    Grid,
    ShapeParseError,
    ShapeSpec,
    finite_bbox,
    parse_shape,
    rasterize,
)
from .svg_out import SvgCanvas, write_svg

CSV_COLUMNS = [
    "shape_id", "h", "r_max", "r_max_bracket", "rho_star",
    "rho_star_bracket", "ratio", "bound", "tolerance", "verdict",
    "runtime_ms",
]

# placeholder keeping the main CSV byte-identical across runs; measured
# timings go to the *_timings.csv sidecar
RUNTIME_PLACEHOLDER = "-"

BBOX_MARGIN_FACTOR = 0.25


class InputError(ValueError):
    """Bad spec file or configuration; maps to exit code 2."""


@dataclass
class RunConfig:
    grid: int = 512
    spacing: float | None = None
    tolerance_c: float = 4.0
    dir_samples: int = 1024
    seed: int = 1
    out: Path = Path("out")

    def validate(self) -> None:
        if self.grid < 32:
            raise InputError("--grid must be >= 32")
        if self.spacing is not None and self.spacing <= 0.0:
            raise InputError("--spacing must be positive")
        if self.tolerance_c < 1.0:
            raise InputError("--tolerance-c must be >= 1")
        if self.dir_samples < 64:
            raise InputError("--dir-samples must be >= 64")


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _report_row(rep: morphology.VerificationReport) -> list[str]:
    return [
        rep.shape_id, _fmt(rep.h), _fmt(rep.r_max), _fmt(rep.r_max_bracket),
        _fmt(rep.rho_star), _fmt(rep.rho_star_bracket), _fmt(rep.ratio),
        _fmt(rep.bound), _fmt(rep.tolerance), rep.verdict,
        RUNTIME_PLACEHOLDER,
    ]


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def _report_json(rep: morphology.VerificationReport) -> dict:
    d = {
        "shape_id": rep.shape_id, "h": rep.h, "r_max": rep.r_max,
        "r_max_bracket": rep.r_max_bracket, "rho_star": rep.rho_star,
        "rho_star_bracket": rep.rho_star_bracket, "ratio": rep.ratio,
        "bound": rep.bound, "tolerance": rep.tolerance, "verdict": rep.verdict,
    }
    if rep.uncovered_witness is not None:
        d["uncovered_witness"] = [rep.uncovered_witness.x, rep.uncovered_witness.y]
    return d


def _load_spec(path: str) -> tuple[str, ShapeSpec]:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"spec file not found: {path}")
    try:
        return p.stem, parse_shape(p.read_text(encoding="utf-8"))
    except ShapeParseError as exc:
        raise InputError(f"cannot parse {path}: {exc}") from exc


def _auto_bbox(spec: ShapeSpec) -> tuple[float, float, float, float]:
    box = finite_bbox(spec)
    if box is None:
        raise InputError(
            "shape has no finite extent (only complements or unbounded "
            "half-plane regions); bound it with a disk or half-plane box"
        )
    xmin, ymin, xmax, ymax = box
    margin = BBOX_MARGIN_FACTOR * max(xmax - xmin, ymax - ymin)
    return xmin - margin, ymin - margin, xmax + margin, ymax + margin


def _make_grid(spec: ShapeSpec, bbox: tuple[float, float, float, float],
               cfg: RunConfig, halve: bool = False) -> Grid:
    if cfg.spacing is not None:
        h = cfg.spacing
    else:
        h = max(bbox[2] - bbox[0], bbox[3] - bbox[1]) / cfg.grid
    if halve:
        h *= 0.5
    return rasterize(spec, bbox, h)


def _verify_pair(spec: ShapeSpec, bbox, shape_id: str, cfg: RunConfig):
    """verify_theorem at h and h/2; returns the two reports and timings."""
    out = []
    for halve in (False, True):
        grid = _make_grid(spec, bbox, cfg, halve=halve)
        t0 = time.perf_counter()
        rep = morphology.verify_theorem(grid, shape_id, tolerance_c=cfg.tolerance_c)
        out.append((rep, (time.perf_counter() - t0) * 1e3, grid))
    return out


def _verify_svg(path: Path, grid: Grid, rep: morphology.VerificationReport) -> None:
    bbox = (grid.origin.x - 0.5 * grid.h, grid.origin.y - 0.5 * grid.h,
            grid.origin.x + grid.width * grid.h, grid.origin.y + grid.height * grid.h)
    canvas = SvgCanvas(bbox)
    canvas.add_grid_outline(grid, "#222222")
    if rep.r_max > 0.0:
        level = max(rep.r_max / morphology.SQRT3 - rep.tolerance, 0.0)
        if level > 0.0:
            canvas.add_grid_outline(morphology.erode(grid, level), "#1f77b4", 0.8)
            canvas.add_grid_outline(morphology.opening(grid, level), "#2ca02c", 0.8)
    if rep.uncovered_witness is not None:
        canvas.add_dot(rep.uncovered_witness, "#d62728")
    write_svg(path, canvas)


def cmd_lemma_sweep(args, cfg: RunConfig) -> int:
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    report, rows = lemma_lab.run_sweep(args.trials, cfg.seed, collect_rows=True)
    cfg.out.mkdir(parents=True, exist_ok=True)
    _write_csv(
        cfg.out / "lemma_sweep.csv",
        ["r", "r0", "alpha", "beta", "angle_CAB", "angle_EOD",
         "identity_residual", "pi3_slack"],
        [[_fmt(v) for v in row] for row in rows],
    )
    print(f"lemma sweep: {report.trials} trials, seed {cfg.seed}")
    print(f"  max identity residual: {report.max_identity_residual:.3e} rad")
    print(f"  max angle(EOD): {report.max_angle_EOD:.9f} (< pi/3 = {math.pi / 3.0:.9f})")
    print(f"  violations: {report.violations}")
    return 0 if report.violations == 0 else 1


def cmd_verify(args, cfg: RunConfig) -> int:
    shape_id, spec = _load_spec(args.spec)
    bbox = _auto_bbox(spec)
    pair = _verify_pair(spec, bbox, shape_id, cfg)
    cfg.out.mkdir(parents=True, exist_ok=True)
    _write_csv(cfg.out / "verify.csv", CSV_COLUMNS,
               [_report_row(rep) for rep, _, _ in pair])
    _write_csv(cfg.out / "verify_timings.csv", ["shape_id", "h", "runtime_ms"],
               [[rep.shape_id, _fmt(rep.h), _fmt(ms)] for rep, ms, _ in pair])
    _write_json(cfg.out / "verify.json",
                {"reports": [_report_json(rep) for rep, _, _ in pair]})
    _verify_svg(cfg.out / "verify.svg", pair[0][2], pair[0][0])
    for rep, _, _ in pair:
        print(f"{rep.shape_id} h={rep.h:.6g}: {rep.verdict} "
              f"(r_max={rep.r_max:.6g}, rho*={rep.rho_star:.6g}, ratio={rep.ratio:.4f})")
    verdicts = [rep.verdict for rep, _, _ in pair]
    if all(v == "fail" for v in verdicts):
        print("anomaly: theorem violation persists at both resolutions")
        return 1
    if "fail" in verdicts:
        print("warning: single-resolution failure, not persistent")
    return 0


def _fan_json(fan: cert.NormalFan) -> dict:
    return {
        "s": [fan.s.x, fan.s.y], "r": fan.r, "step": fan.step,
        "feasible_count": len(fan.directions),
        "extremal_lo": [fan.extremal_lo.ux, fan.extremal_lo.uy],
        "extremal_hi": [fan.extremal_hi.ux, fan.extremal_hi.uy],
        "extremal_separation": fan.extremal_separation,
        "full_circle": fan.full_circle,
    }


def _slack_json(rep: cert.SlackReport) -> dict:
    if not rep.applicable:
        return {"applicable": False, "reason": rep.reason}
    return {
        "applicable": True, "slacks": list(rep.slacks),
        "a1": rep.a1, "a2": rep.a2, "threshold": rep.threshold,
    }


def _trace_svg(path: Path, grid: Grid, res: cert.TraceResult) -> None:
    bbox = (grid.origin.x - 0.5 * grid.h, grid.origin.y - 0.5 * grid.h,
            grid.origin.x + grid.width * grid.h, grid.origin.y + grid.height * grid.h)
    canvas = SvgCanvas(bbox)
    canvas.add_grid_outline(grid, "#222222")
    c = res.certificate
    if c is not None:
        canvas.add_circle(c.x1, c.r1, "#1f77b4")
        canvas.add_circle(c.x2, c.r2, "#2ca02c")
        canvas.add_polygon([c.s0, c.s0p, c.s0pp], "#d62728")
        canvas.add_dot(c.x0, "#9467bd")
        for fan in res.fans.values():
            if not fan.full_circle:
                canvas.add_fan(fan.s, 0.3 * fan.r, fan.extremal_lo,
                               fan.extremal_hi, "#ff7f0e")
    write_svg(path, canvas)


def cmd_trace(args, cfg: RunConfig) -> int:
    if args.rho is None or args.rho <= 0.0:
        raise InputError("--rho must be given and positive")
    shape_id, spec = _load_spec(args.spec)
    bbox = _auto_bbox(spec)
    grid = _make_grid(spec, bbox, cfg)
    cfg.out.mkdir(parents=True, exist_ok=True)
    try:
        res = cert.build_certificate(grid, args.rho,
                                     direction_samples=cfg.dir_samples)
    except cert.TraceError as exc:
        print(f"trace anomaly: {exc}")
        return 1
    payload: dict = {"shape_id": shape_id, "rho": args.rho, "h": grid.h,
                     "covered": res.covered}
    if res.covered:
        print(f"{shape_id}: covered at rho={args.rho:.6g}, no witness")
        _write_json(cfg.out / "trace.json", payload)
        _trace_svg(cfg.out / "trace.svg", grid, res)
        return 0
    c = res.certificate
    step = 2.0 * math.pi / cfg.dir_samples
    saturated = [
        name for name, fan in res.fans.items()
        if not fan.full_circle
        and math.pi - 2.0 * step <= fan.extremal_separation <= math.pi
    ]
    payload.update({
        "x0": [c.x0.x, c.x0.y], "s0": [c.s0.x, c.s0.y], "r0": c.r0,
        "zeta": [c.zeta.ux, c.zeta.uy], "r1": c.r1, "x1": [c.x1.x, c.x1.y],
        "s0p": [c.s0p.x, c.s0p.y], "m": [c.m.x, c.m.y],
        "zeta1": [c.zeta1.ux, c.zeta1.uy], "r2": c.r2,
        "x2": [c.x2.x, c.x2.y], "s0pp": [c.s0pp.x, c.s0pp.y],
        "triangle_angles": list(c.triangle_angles),
        "fan_radius": res.fan_radius,
        "fans": {k: _fan_json(v) for k, v in res.fans.items()},
        "lemma_slacks": {k: _slack_json(v) for k, v in res.lemma_slacks.items()},
        "saturated_fans": saturated,
        "anomalies": res.anomalies,
    })
    _write_json(cfg.out / "trace.json", payload)
    _trace_svg(cfg.out / "trace.svg", grid, res)
    print(f"{shape_id}: witness at ({c.x0.x:.6g}, {c.x0.y:.6g}), "
          f"r0={c.r0:.6g} r1={c.r1:.6g} r2={c.r2:.6g}")
    print(f"  triangle angle sum - pi = {sum(c.triangle_angles) - math.pi:.3e}")
    if saturated:
        print(f"  extremal-pair separation saturates pi at: {', '.join(saturated)}")
    else:
        print("  no fan shows the pi-saturation signature")
    for note in res.anomalies:
        print(f"  anomaly: {note}")
    return 0


def cmd_corpus(args, cfg: RunConfig) -> int:
    entries = builtin_corpus(cfg.seed)
    rows: list[list[str]] = []
    timing_rows: list[list[str]] = []
    summary_entries = {}
    anomalies: list[str] = []
    min_ratio = None
    for entry in entries:
        pair = _verify_pair(entry.spec, entry.bbox, entry.id, cfg)
        for rep, ms, _ in pair:
            rows.append(_report_row(rep))
            timing_rows.append([rep.shape_id, _fmt(rep.h), _fmt(ms)])
        (rep_h, _, _), (rep_h2, _, _) = pair
        verdicts = (rep_h.verdict, rep_h2.verdict)
        if all(v == "fail" for v in verdicts):
            anomalies.append(f"{entry.id}: theorem violation at both resolutions")
        if rep_h.verdict == "pass" and rep_h2.verdict == "pass":
            drift = abs(rep_h.ratio - rep_h2.ratio)
            limit = 8.0 * rep_h.h / rep_h.r_max
            if drift > limit:
                anomalies.append(
                    f"{entry.id}: ratio drift {drift:.4g} exceeds 8h/r_max {limit:.4g}"
                )
            if min_ratio is None or rep_h2.ratio < min_ratio[1]:
                min_ratio = (entry.id, rep_h2.ratio,
                             rep_h2.bound - cfg.tolerance_c * rep_h2.h / rep_h2.r_max)
        summary_entries[entry.id] = {
            "verdicts": list(verdicts), "expected": entry.expected,
            "ratio_h": rep_h.ratio, "ratio_h2": rep_h2.ratio,
        }
        print(f"{entry.id:14s} {verdicts[0]:>14s} / {verdicts[1]:<14s} "
              f"ratio {rep_h.ratio:.4f} / {rep_h2.ratio:.4f}")
    summary = {"entries": summary_entries, "anomalies": anomalies}
    if min_ratio is not None:
        entry_id, ratio, floor = min_ratio
        summary["min_ratio"] = {"shape_id": entry_id, "ratio": ratio,
                                "bound_with_tolerance": floor}
        print(f"minimum ratio {ratio:.4f} on {entry_id} "
              f"(theorem floor {floor:.4f})")
        if ratio < floor:
            anomalies.append(
                f"minimum ratio {ratio:.4g} below theorem floor {floor:.4g}"
            )
    cfg.out.mkdir(parents=True, exist_ok=True)
    _write_csv(cfg.out / "corpus.csv", CSV_COLUMNS, rows)
    _write_csv(cfg.out / "corpus_timings.csv",
               ["shape_id", "h", "runtime_ms"], timing_rows)
    _write_json(cfg.out / "corpus_summary.json", summary)
    for note in anomalies:
        print(f"anomaly: {note}")
    return 0 if not anomalies else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ballcover",
        description="Verify the interior-sphere to union-of-balls covering "
                    "theorem on rasterized planar shapes.",
    )
    parser.add_argument("--grid", type=int, default=512,
                        help="cells across the longer bbox side (default 512)")
    parser.add_argument("--spacing", type=float, default=None,
                        help="cell spacing h (overrides --grid)")
    parser.add_argument("--tolerance-c", type=float, default=4.0,
                        help="tolerance constant C in C*h (default 4)")
    parser.add_argument("--dir-samples", type=int, default=1024,
                        help="fan direction samples (default 1024)")
    parser.add_argument("--seed", type=int, default=1, help="random seed")
    parser.add_argument("--out", type=Path, default=Path("out"),
                        help="output directory (default ./out)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lemma-sweep", help="randomized three-circle lemma sweep")
    p.add_argument("--trials", type=int, default=10000)
    p.set_defaults(func=cmd_lemma_sweep)

    p = sub.add_parser("verify", help="verify the covering theorem on a shape")
    p.add_argument("spec", help="shape spec file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trace", help="extract the proof-trace certificate")
    p.add_argument("spec", help="shape spec file")
    p.add_argument("--rho", type=float, default=None,
                   help="coverage level to find a witness at")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("corpus", help="run the built-in corpus")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(grid=args.grid, spacing=args.spacing,
                    tolerance_c=args.tolerance_c,
                    dir_samples=args.dir_samples, seed=args.seed,
                    out=args.out)
    try:
        cfg.validate()
        return args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
