import math
import os
import re
from fractions import Fraction
from pathlib import Path

import pytest

from foldcover.covering import CoveringWindow, centered_rect
from foldcover.lattice import trace
from foldcover.render import EmptyDrawing, RenderStyle, UNIT, render_svg

GOLDEN = Path(__file__).parent / "golden" / "alternating_six_core.svg"

ARC = re.compile(r'<path d="M (\S+) (\S+) A (\S+) (\S+) 0 0 ([01]) (\S+) (\S+)"')


def _arc_center(x0, y0, r, sweep, x1, y1):
    """Center of the small arc in SVG coordinates, from the endpoint form."""
    mx, my = (x0 + x1) / 2, (y0 + y1) / 2
    dx, dy = x1 - x0, y1 - y0
    half = math.hypot(dx, dy) / 2
    h = math.sqrt(r * r - half * half)
    ux, uy = -dy / (2 * half), dx / (2 * half)
    cands = [(mx + h * ux, my + h * uy), (mx - h * ux, my - h * uy)]
    for cx, cy in cands:
        a0 = math.atan2(y0 - cy, x0 - cx)
        a1 = math.atan2(y1 - cy, x1 - cx)
        delta = (a1 - a0 + math.pi) % (2 * math.pi) - math.pi
        # sweep 1 means increasing angle in SVG's y-down frame
        if (delta > 0) == (sweep == 1):
            return cx, cy
    raise AssertionError("no center")


def test_single_segment_is_one_line():
    svg = render_svg(trace(()))
    assert svg.count("<line") == 1 and "<path" not in svg


@pytest.mark.parametrize("turn", [1, -1])
def test_turn_geometry(turn):
    r = Fraction(1, 4)
    svg = render_svg(trace((turn,)), RenderStyle(corner_radius=r))
    assert svg.count("<line") == 2 and svg.count("<path") == 1
    # both straight parts are shortened by r at the vertex
    lines = re.findall(r'x1="(\S+)" y1="(\S+)" x2="(\S+)" y2="(\S+)"', svg)
    for x1, y1, x2, y2 in lines:
        assert math.isclose(math.hypot(float(x2) - float(x1), float(y2) - float(y1)),
                            (1 - r) * UNIT)
    m = ARC.search(svg)
    x0, y0, rx, _, sweep, x1, y1 = m.groups()
    assert float(rx) == r * UNIT
    assert sweep == ("0" if turn > 0 else "1")
    cx, cy = _arc_center(float(x0), float(y0), float(rx), int(sweep), float(x1), float(y1))
    # the center sits inside the turn: vertex (1,0) - r*east + r*(north or south)
    expect = ((1 - r) * UNIT, -(turn * r) * UNIT)
    assert math.isclose(cx, expect[0]) and math.isclose(cy, float(expect[1]))


def test_deterministic(alt_six):
    cov = alt_six.clipped(centered_rect(4)).with_window(centered_rect(4))
    assert render_svg(cov) == render_svg(cov)


def test_golden_six_curves(alt_six):
    cov = alt_six.clipped(centered_rect(4)).with_window(centered_rect(4))
    svg = render_svg(cov)
    colors = set(re.findall(r'stroke="(#[0-9a-f]{6})"', svg))
    assert len(colors) == 6
    if os.environ.get("FOLDCOVER_REGEN_GOLDEN"):
        GOLDEN.write_text(svg)
    assert svg == GOLDEN.read_text()


def test_markers(dragon7):
    cov = dragon7.clipped(centered_rect(6)).with_window(centered_rect(6))
    plain = render_svg(cov)
    marked = render_svg(cov, RenderStyle(e_level=2, show_p=True))
    assert marked.count("<line") > plain.count("<line")


@pytest.mark.parametrize("r", [0, Fraction(1, 2), Fraction(-1, 4)])
def test_radius_bounds(r):
    with pytest.raises(ValueError):
        RenderStyle(corner_radius=r)


def test_empty_drawing():
    with pytest.raises(EmptyDrawing):
        render_svg(CoveringWindow([], (0, 0, 1, 1)))
