"""Deterministic SVG 1.1 rendering of construction traces and curve overlays.

All geometry is emitted in world coordinates inside a single group whose
matrix maps world to screen (y up). Fixed formatting and stable element
order make byte-identical output for identical inputs. Rendering is
illustrative: floats are fine here, certified arithmetic stays in the
kernel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dsl import CompileResult

_STYLES = {
    "segment": 'stroke="#1f3a5f" stroke-width="0.006" fill="none"',
    "circle": 'stroke="#7a5c1e" stroke-width="0.006" fill="none"',
    "point": 'fill="#b03030"',
    "curve": 'stroke="#2e7d32" stroke-width="0.006" fill="none"',
}


@dataclass(frozen=True)
class RenderSpec:
    width: int = 640
    height: int = 640
    margin: float = 0.08      # fraction of world bounds added as padding
    density: float = 2.0      # curve samples per output pixel
    styles: dict = field(default_factory=lambda: dict(_STYLES))


def _f(x: float) -> str:
    return f"{x:.9f}"


def _expr_float(e) -> float:
    enc = e.eval(96)
    return float(enc.re.mid())


def _point_xy(p) -> tuple[float, float]:
    return (_expr_float(p.x), _expr_float(p.y))


def quadratrix_points(n: int, radius: float = 1.0) -> list[tuple[float, float]]:
    pts = []
    for i in range(1, n + 1):
        y = radius * i / (n + 1)
        theta = math.pi * y / (2 * radius)
        pts.append((y / math.tan(theta), y))
    return pts


def spiral_points(n: int, radius: float = 1.0) -> list[tuple[float, float]]:
    a = 2 * radius / math.pi
    pts = []
    for i in range(1, n + 1):
        t = 2 * math.pi * i / n
        pts.append((a * t * math.cos(t), a * t * math.sin(t)))
    return pts


def render_svg(result: CompileResult | None, spec: RenderSpec,
               curves: tuple[str, ...] = ()) -> str:
    drawables = []
    if result is not None:
        for step in result.trace.steps:
            drawables.extend(step.get("drawables", ()))
    curve_polys = []
    samples = int(spec.density * spec.width)
    for curve in curves:
        if curve == "quadratrix":
            curve_polys.append(("quadratrix", quadratrix_points(samples)))
        elif curve == "spiral":
            curve_polys.append(("spiral", spiral_points(samples)))
        else:
            raise ValueError(f"unknown curve overlay {curve!r}")

    xs, ys = [0.0, 1.0], [0.0, 1.0]
    for d in drawables:
        for p in d[1:]:
            if hasattr(p, "x"):
                px, py = _point_xy(p)
                xs.append(px)
                ys.append(py)
    for _, pts in curve_polys:
        xs.extend(p[0] for p in pts)
        ys.extend(p[1] for p in pts)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    pad_x = (x1 - x0 or 1.0) * spec.margin
    pad_y = (y1 - y0 or 1.0) * spec.margin
    x0, x1 = x0 - pad_x, x1 + pad_x
    y0, y1 = y0 - pad_y, y1 + pad_y
    sx = spec.width / (x1 - x0)
    sy = spec.height / (y1 - y0)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
        f'<g transform="matrix({_f(sx)} 0 0 {_f(-sy)} {_f(-x0 * sx)} {_f(y1 * sy)})">',
    ]
    for name, pts in curve_polys:
        coords = " ".join(f"{_f(px)},{_f(py)}" for px, py in pts)
        lines.append(f'<polyline class="curve {name}" {spec.styles["curve"]} points="{coords}"/>')
    for d in drawables:
        kind = d[0]
        if kind == "segment":
            (ax, ay), (bx, by) = _point_xy(d[1]), _point_xy(d[2])
            lines.append(f'<line class="segment" {spec.styles["segment"]} '
                         f'x1="{_f(ax)}" y1="{_f(ay)}" x2="{_f(bx)}" y2="{_f(by)}"/>')
        elif kind == "circle":
            (cx, cy), (tx, ty) = _point_xy(d[1]), _point_xy(d[2])
            r = math.hypot(tx - cx, ty - cy)
            lines.append(f'<circle class="circle" {spec.styles["circle"]} '
                         f'cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}"/>')
        elif kind == "point":
            px, py = _point_xy(d[1])
            lines.append(f'<circle class="point" {spec.styles["point"]} '
                         f'cx="{_f(px)}" cy="{_f(py)}" r="0.012"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
