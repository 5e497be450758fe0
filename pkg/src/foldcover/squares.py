"""Connectivity of unit squares through rounded vertices and the predicate P.

The rounded corners of the two passages at a vertex cut off two opposite
quadrants; the two unit squares in the other diagonal pair touch through the
vertex.  Squares are named by their lower-left corner.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .covering import (CoveringWindow, Fragment, Rect, VertexLevels, shrink,
                       vertex_level)
from .lattice import Point

# squares at vertex v by quadrant: 0 NE, 1 NW, 2 SW, 3 SE
_QUAD_OFFSETS: tuple[Point, ...] = ((0, 0), (-1, 0), (-1, -1), (0, -1))

# the lattice Z(2,-2) + Z(2,2), of index 8
P_LATTICE_BASIS: tuple[Point, Point] = ((2, -2), (2, 2))
P_LATTICE_INDEX = 8


def square_at(v: Point, q: int) -> Point:
    """Lower-left corner of the unit square in quadrant ``q`` of ``v``."""
    dx, dy = _QUAD_OFFSETS[q]
    return (v[0] + dx, v[1] + dy)


def square_pairing(cov: CoveringWindow, v: Point) -> tuple[Point, Point] | None:
    """The diagonal pair of squares connected through ``v`` (``None`` when
    the two passages at ``v`` are not both known)."""
    bit = cov.pairing(v)
    if bit is None:
        return None
    # corners in NE/SW leave NW and SE connected, and conversely
    qs = (1, 3) if bit == 0 else (0, 2)
    return tuple(sorted(square_at(v, q) for q in qs))  # type: ignore[return-value]


def _square_vertices(s: Point) -> list[Point]:
    x, y = s
    return [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)]


def _e2(levels: VertexLevels, x: Point) -> bool | None:
    if x in levels.unknown and levels.level.get(x, 0) < 2:
        return None
    lv = levels.level.get(x)
    return None if lv is None else lv >= 2


def predicate_p(cov: CoveringWindow, x: Point, levels: VertexLevels | None = None) -> bool | None:
    """``X`` is in ``E_2`` and each unit square with vertex ``X`` is connected
    to exactly 2 unit squares without vertex ``X``.  ``None`` if undecidable."""
    if levels is None:
        levels = vertex_level(cov, 2, (x[0], x[1], x[0], x[1]))
    e2 = _e2(levels, x)
    if e2 is None:
        return None
    if not e2:
        return False
    for q in range(4):
        s = square_at(x, q)
        links = 0
        for u in _square_vertices(s):
            if u == x:
                continue
            pair = square_pairing(cov, u)
            if pair is None:
                return None
            links += s in pair
        if links != 2:
            return False
    return True


def predicate_p_turns(cov: CoveringWindow, x: Point, levels: VertexLevels | None = None) -> bool | None:
    """Turn-rule form of ``P``: ``X`` is in ``E_2`` and the outgoing half-curves
    turn left then right, or right then left, after their first segment."""
    if levels is None:
        levels = vertex_level(cov, 2, (x[0], x[1], x[0], x[1]))
    e2 = _e2(levels, x)
    if e2 is None:
        return None
    if not e2:
        return False
    turns = cov.walk(x, 0, 3)
    if turns is None:
        return None
    return turns[0] * turns[1] == -1


def in_p_coset(v: Point, anchor: Point) -> bool:
    dx, dy = v[0] - anchor[0], v[1] - anchor[1]
    return dx % 2 == 0 and dy % 2 == 0 and (dx + dy) % 4 == 0


@dataclass
class PLattice:
    anchor: Point | None
    verified: bool
    p_set: set[Point] = field(default_factory=set)
    unknown: set[Point] = field(default_factory=set)


def p_lattice(cov: CoveringWindow, core: Rect | None = None,
              levels: VertexLevels | None = None) -> PLattice:
    """Check that ``{X : P(X)}`` inside ``core`` is one coset of
    ``Z(2,-2) + Z(2,2)``.  Undecidable vertices make the result unverified."""
    if core is None:
        core = shrink(cov.window, 2)
    if levels is None:
        levels = vertex_level(cov, 2, core)
    pts: set[Point] = set()
    unknown: set[Point] = set()
    for x in range(core[0], core[2] + 1):
        for y in range(core[1], core[3] + 1):
            v = (x, y)
            r = predicate_p(cov, v, levels)
            if r is None:
                unknown.add(v)
            elif r:
                pts.add(v)
    if not pts:
        return PLattice(None, False, pts, unknown)
    anchor = min(pts)
    expected = {(x, y) for x in range(core[0], core[2] + 1) for y in range(core[1], core[3] + 1)
                if in_p_coset((x, y), anchor)}
    ok = not unknown and pts == expected
    return PLattice(anchor, ok, pts, unknown)


def flip_passage(cov: CoveringWindow, v: Point) -> CoveringWindow:
    """Reconnect the two passages at ``v`` the other way (a local mutation
    that keeps every edge and orientation).  Both passages must be interior
    to their fragments and belong to different fragments."""
    hits = [(fi, j) for fi, j in cov.vertex_index().get(v, ())
            if 0 < j < cov.fragments[fi].nseg]
    if len(hits) != 2 or hits[0][0] == hits[1][0]:
        raise ValueError(f"cannot flip the passages at {v}")
    (fa, ja), (fb, jb) = hits
    a, b = cov.fragments[fa], cov.fragments[fb]
    na = Fragment(a.curve, a.start, a.points[:ja] + b.points[jb:])
    nb = Fragment(b.curve, b.start, b.points[:jb] + a.points[ja:])
    frs = [f for i, f in enumerate(cov.fragments) if i not in (fa, fb)] + [na, nb]
    return CoveringWindow(frs, cov.window, None, cov.meta)


__all__ = ["square_at", "square_pairing", "predicate_p", "predicate_p_turns",
           "in_p_coset", "PLattice", "p_lattice", "flip_passage", "P_LATTICE_BASIS",
           "P_LATTICE_INDEX"]
