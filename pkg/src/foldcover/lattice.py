"""Oriented lattice curves on the Gaussian integers.

Points are ``(x, y)`` integer pairs; directions are quarter-turn counts
``q`` standing for ``i**q`` (0 = +x, 1 = +y, 2 = -x, 3 = -y).  A turn sign
``+1`` is a left turn (multiply by ``i``), ``-1`` a right turn.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Point = tuple[int, int]

DIRS: tuple[Point, ...] = ((1, 0), (0, 1), (-1, 0), (0, -1))

COORD_LIMIT = 1 << 62


def dir_index(v: Point) -> int:
    return DIRS.index(v)


def add(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1])


def sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def rot(p: Point, quarter_turns: int) -> Point:
    """Multiply ``p`` by ``i**quarter_turns``."""
    x, y = p
    for _ in range(quarter_turns % 4):
        x, y = -y, x
    return (x, y)


def cmul(p: Point, q: Point) -> Point:
    return (p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0])


def cdiv_exact(p: Point, q: Point) -> Point | None:
    """``p / q`` if it is a Gaussian integer, else ``None``."""
    n = q[0] * q[0] + q[1] * q[1]
    re = p[0] * q[0] + p[1] * q[1]
    im = p[1] * q[0] - p[0] * q[1]
    if re % n or im % n:
        return None
    return (re // n, im // n)


def parity(p: Point) -> int:
    return (p[0] + p[1]) & 1


def edge_key(a: Point, b: Point) -> tuple[int, int, int]:
    """Nonoriented unit edge as ``(x, y, axis)`` with axis 0 = R, 1 = U."""
    if a[1] == b[1]:
        return (min(a[0], b[0]), a[1], 0)
    return (a[0], min(a[1], b[1]), 1)


def edge_endpoints(key: tuple[int, int, int]) -> tuple[Point, Point]:
    x, y, axis = key
    return (x, y), ((x + 1, y) if axis == 0 else (x, y + 1))


def quadrant(d_back: int, d_out: int) -> int:
    """Quadrant (0 = NE, 1 = NW, 2 = SW, 3 = SE) between two perpendicular
    edge directions leaving a vertex."""
    if (d_back + 1) % 4 == d_out:
        return d_back
    if (d_out + 1) % 4 == d_back:
        return d_out
    raise ValueError("edges are not perpendicular")


def turns_of(points: Sequence[Point]) -> tuple[int, ...]:
    out = []
    for a, b, c in zip(points, points[1:], points[2:]):
        d1 = dir_index(sub(b, a))
        d2 = dir_index(sub(c, b))
        delta = (d2 - d1) % 4
        if delta == 1:
            out.append(1)
        elif delta == 3:
            out.append(-1)
        else:
            raise ValueError(f"non-quarter turn at {b}")
    return tuple(out)


@dataclass(frozen=True)
class Curve:
    """Oriented lattice path ``x_0, x_1, ...`` with ``x_{k+1} = x_k + eps_k``."""

    origin: Point
    dir0: int
    turns: tuple[int, ...]
    vertices: tuple[Point, ...]

    @property
    def segments(self) -> list[tuple[Point, Point]]:
        return list(zip(self.vertices, self.vertices[1:]))

    @property
    def end(self) -> Point:
        return self.vertices[-1]


def trace(seq: Iterable[int], origin: Point = (0, 0), dir0: int = 0) -> Curve:
    """Curve with ``len(seq) + 1`` segments starting at ``origin``."""
    turns = tuple(seq)
    x, y = origin
    d = dir0 % 4
    pts = [(x, y)]
    dx, dy = DIRS[d]
    x, y = x + dx, y + dy
    pts.append((x, y))
    for a in turns:
        d = (d + (1 if a > 0 else -1)) % 4
        dx, dy = DIRS[d]
        x, y = x + dx, y + dy
        pts.append((x, y))
    return Curve(origin, dir0 % 4, turns, tuple(pts))


def is_self_avoiding(c: Curve) -> bool:
    """No nonoriented edge repeats, and at each vertex passed twice the two
    rounded corners sit in opposite quadrants (so the passages do not cross)."""
    pts = c.vertices
    seen = set()
    for a, b in zip(pts, pts[1:]):
        k = edge_key(a, b)
        if k in seen:
            return False
        seen.add(k)
    corners: dict[Point, list[int]] = {}
    for a, b, e in zip(pts, pts[1:], pts[2:]):
        q = quadrant(dir_index(sub(a, b)), dir_index(sub(e, b)))
        corners.setdefault(b, []).append(q)
    for qs in corners.values():
        if len(qs) > 2:
            return False
        if len(qs) == 2 and (qs[0] - qs[1]) % 4 != 2:
            return False
    return True


def rigid(c: Curve, quarter_turns: int = 0, translation: Point = (0, 0),
          reflect: bool = False) -> Curve:
    """Image of ``c`` under ``z -> i**q * z + t`` (with ``z`` conjugated first
    when ``reflect``).  Reflection negates every turn."""
    def f(p: Point) -> Point:
        if reflect:
            p = (p[0], -p[1])
        return add(rot(p, quarter_turns), translation)

    verts = tuple(f(p) for p in c.vertices)
    d0 = (-c.dir0 if reflect else c.dir0) + quarter_turns
    turns = tuple(-a for a in c.turns) if reflect else c.turns
    return Curve(verts[0], d0 % 4, turns, verts)


def reverse(c: Curve) -> Curve:
    verts = tuple(reversed(c.vertices))
    d0 = dir_index(sub(verts[1], verts[0]))
    return Curve(verts[0], d0, tuple(-a for a in reversed(c.turns)), verts)


def max_covered_square(edges: Iterable[tuple[int, int, int]]) -> int:
    """Side of the largest lattice square all of whose unit edges are present.

    A square is fully covered iff each of its unit cells has all four edges,
    so this is the largest all-full square of cells.
    """
    es = set(edges)
    if not es:
        return 0
    full = set()
    for (x, y, axis) in es:
        if axis != 0:
            continue
        # cell with this edge as its bottom side
        if (x, y + 1, 0) in es and (x, y, 1) in es and (x + 1, y, 1) in es:
            full.add((x, y))
    best = 0
    size: dict[Point, int] = {}
    for (x, y) in sorted(full):
        s = 1 + min(size.get((x - 1, y), 0), size.get((x, y - 1), 0),
                    size.get((x - 1, y - 1), 0))
        size[(x, y)] = s
        best = max(best, s)
    return best


# -- text format ------------------------------------------------------------

def dump_curve(c: Curve) -> str:
    turns = "".join("+" if a > 0 else "-" for a in c.turns)
    return f"curve v1\norigin {c.origin[0]} {c.origin[1]}\ndir {c.dir0}\nturns {turns}\n"


def parse_curve(text: str) -> Curve:
    lines = [ln.rstrip("\n") for ln in text.splitlines()]
    if len(lines) < 4 or lines[0] != "curve v1":
        raise ValueError("missing 'curve v1' header")
    o = lines[1].split()
    d = lines[2].split()
    t = lines[3].split(" ", 1)
    if o[0] != "origin" or len(o) != 3 or d[0] != "dir" or len(d) != 2 or t[0] != "turns":
        raise ValueError("malformed curve dump")
    turns = []
    for ch in (t[1] if len(t) > 1 else ""):
        if ch not in "+-":
            raise ValueError(f"bad turn character {ch!r}")
        turns.append(1 if ch == "+" else -1)
    q = int(d[1])
    if not 0 <= q <= 3:
        raise ValueError("dir must be 0..3")
    return trace(turns, (int(o[1]), int(o[2])), q)
