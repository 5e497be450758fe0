"""SVG drawings of curves and covering windows with rounded corners.

One lattice step is 4 SVG units and the y axis points up (SVG y = -4 y).
Each turn is drawn as a quarter-circle arc of radius ``corner_radius``
tangent to the two segments, so a curve never touches its turning vertex.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covering import CoveringWindow, Fragment, rect_contains, vertex_level
from .lattice import Curve, Point, dir_index, edge_endpoints, sub

UNIT = 4

PALETTE: tuple[str, ...] = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
    "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#393b79", "#637939",
)


class EmptyDrawing(ValueError):
    pass


@dataclass(frozen=True)
class RenderStyle:
    corner_radius: Fraction = Fraction(1, 4)
    stroke_width: Fraction = Fraction(1, 2)
    palette: tuple[str, ...] = PALETTE
    e_level: int | None = None       # mark vertices of E_n
    show_p: bool = False             # mark vertices satisfying P
    show_uncovered: bool = False     # dashed uncovered window edges

    def __post_init__(self):
        r = Fraction(self.corner_radius)
        if not 0 < r < Fraction(1, 2):
            raise ValueError("corner radius must lie strictly between 0 and 1/2")


def _fmt(v: Fraction) -> str:
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return format(float(v), ".6g")


def _xy(p: tuple[Fraction, Fraction]) -> str:
    return f"{_fmt(p[0] * UNIT)} {_fmt(-p[1] * UNIT)}"


def _fragment_elements(points: tuple[Point, ...], r: Fraction, color: str, width: Fraction) -> list[str]:
    stroke = f'stroke="{color}" stroke-width="{_fmt(width)}" fill="none"'
    out = []
    n = len(points) - 1
    for j in range(n):
        a, b = points[j], points[j + 1]
        d = sub(b, a)
        s = (Fraction(a[0]) + (r * d[0] if j > 0 else 0), Fraction(a[1]) + (r * d[1] if j > 0 else 0))
        e = (Fraction(b[0]) - (r * d[0] if j < n - 1 else 0), Fraction(b[1]) - (r * d[1] if j < n - 1 else 0))
        out.append(f'<line x1="{_fmt(s[0] * UNIT)}" y1="{_fmt(-s[1] * UNIT)}" '
                   f'x2="{_fmt(e[0] * UNIT)}" y2="{_fmt(-e[1] * UNIT)}" {stroke}/>')
        if j < n - 1:
            c = points[j + 2]
            d2 = sub(c, b)
            left = (dir_index(d2) - dir_index(d)) % 4 == 1
            q = (Fraction(b[0]) + r * d2[0], Fraction(b[1]) + r * d2[1])
            rad = _fmt(r * UNIT)
            # the y flip turns a counterclockwise (left) turn into sweep 0
            out.append(f'<path d="M {_xy(e)} A {rad} {rad} 0 0 {0 if left else 1} {_xy(q)}" {stroke}/>')
    return out


def _marker(v: Point, color: str) -> list[str]:
    x, y = v[0] * UNIT, -v[1] * UNIT
    return [f'<line x1="{x - 1}" y1="{y - 1}" x2="{x + 1}" y2="{y + 1}" stroke="{color}" stroke-width="0.25"/>',
            f'<line x1="{x - 1}" y1="{y + 1}" x2="{x + 1}" y2="{y - 1}" stroke="{color}" stroke-width="0.25"/>']


def render_svg(target: Curve | CoveringWindow, style: RenderStyle | None = None) -> str:
    """Deterministic SVG text for ``target``."""
    style = style or RenderStyle()
    if isinstance(target, Curve):
        cov = CoveringWindow([Fragment(0, 0, target.vertices)])
    else:
        cov = target
    if not cov.fragments:
        raise EmptyDrawing("nothing to draw")
    r = Fraction(style.corner_radius)
    x0, y0, x1, y1 = cov.bbox()
    vb = (x0 * UNIT - UNIT, -y1 * UNIT - UNIT, (x1 - x0 + 2) * UNIT, (y1 - y0 + 2) * UNIT)
    body: list[str] = []
    ids = sorted(cov.curve_ids)
    colors = {c: style.palette[i % len(style.palette)] for i, c in enumerate(ids)}
    for fr in sorted(cov.fragments, key=lambda f: (f.curve, f.start, f.points)):
        body.append(f'<g id="curve-{fr.curve}-{fr.start}">')
        body.extend(_fragment_elements(fr.points, r, colors[fr.curve], Fraction(style.stroke_width)))
        body.append("</g>")
    if style.show_uncovered:
        for key in cov.uncovered():
            a, b = edge_endpoints(key)
            body.append(f'<line x1="{a[0] * UNIT}" y1="{-a[1] * UNIT}" x2="{b[0] * UNIT}" '
                        f'y2="{-b[1] * UNIT}" stroke="#000000" stroke-width="0.25" '
                        f'stroke-dasharray="0.5 0.5"/>')
    if style.e_level is not None or style.show_p:
        need = max(style.e_level or 0, 2)
        levels = vertex_level(cov, need)
        if style.e_level is not None:
            for v in sorted(levels.E(style.e_level)):
                if rect_contains(cov.window, v):
                    body.extend(_marker(v, "#000000"))
        if style.show_p:
            from .squares import predicate_p
            for v in sorted(levels.level):
                if predicate_p(cov, v, levels):
                    body.extend(_marker(v, "#ff00ff"))
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'viewBox="{vb[0]} {vb[1]} {vb[2]} {vb[3]}">')
    return "\n".join([head, *body, "</svg>"]) + "\n"


__all__ = ["UNIT", "PALETTE", "EmptyDrawing", "RenderStyle", "render_svg"]
