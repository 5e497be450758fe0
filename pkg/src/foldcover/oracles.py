"""Brute-force reference implementations used to cross-check the fast code.

They share nothing with the main modules beyond plain tuples: a physical
strip-folding simulation, a complex-number turtle, and a raster flood fill
of the rounded drawing around a vertex.
"""
from __future__ import annotations

import math
from collections import deque
from typing import Sequence


def strip_fold(folds: Sequence[int]) -> tuple[int, ...]:
    """Fold a strip of ``2^n`` cells ``n`` times and read the creases.

    The strip is folded in half ``n`` times, the right half being laid on top
    of the left half for ``+1`` and under it for ``-1``; the instruction
    ``folds[j]`` is used by the fold that creates the creases at odd
    multiples of ``2^j`` (so ``folds[-1]`` is folded first).  After
    unfolding, crease ``k`` is ``+1`` when cell ``k+1`` lies on the face-up
    side of cell ``k``.
    """
    n = len(folds)
    stacks: list[list[tuple[int, bool]]] = [[(c, False)] for c in range(1 << n)]
    for f in reversed(folds):
        half = len(stacks) // 2
        left, right = stacks[:half], stacks[half:]
        merged = []
        for i in range(half):
            moved = [(c, not flipped) for c, flipped in reversed(right[half - 1 - i])]
            merged.append(left[i] + moved if f > 0 else moved + left[i])
        stacks = merged
    pile = stacks[0]
    height = {c: h for h, (c, _) in enumerate(pile)}
    flipped = {c: fl for c, fl in pile}
    return tuple(1 if (height[k + 1] > height[k]) != flipped[k] else -1
                 for k in range((1 << n) - 1))


def turtle(turns: Sequence[int], start: complex = 0, heading: complex = 1) -> list[complex]:
    """Vertices of the walk that steps, then turns left on +1 and right on -1."""
    z, d = start, heading
    pts = [z]
    z += d
    pts.append(z)
    for a in turns:
        d *= 1j if a > 0 else -1j
        z += d
        pts.append(z)
    return pts


def _corner_samples(u, d1, d2, r, n=64):
    """Points of the quarter circle of radius ``r`` tangent to the rays from
    ``u`` along unit vectors ``d1`` and ``d2``."""
    cx = u[0] + r * (d1[0] + d2[0])
    cy = u[1] + r * (d1[1] + d2[1])
    # the arc runs from u + r d1 to u + r d2, facing u
    a0 = math.atan2(u[1] + r * d1[1] - cy, u[0] + r * d1[0] - cx)
    a1 = math.atan2(u[1] + r * d2[1] - cy, u[0] + r * d2[0] - cx)
    da = (a1 - a0 + math.pi) % (2 * math.pi) - math.pi
    return [(cx + r * math.cos(a0 + da * t / n), cy + r * math.sin(a0 + da * t / n))
            for t in range(n + 1)]


def flood_pairing(corner_quadrants: dict[tuple[int, int], list[int]], v: tuple[int, int],
                  radius: float = 0.25, res: int = 16) -> tuple[tuple[int, int], tuple[int, int]] | None:
    """Which diagonal pair of unit squares at ``v`` is connected through ``v``.

    ``corner_quadrants`` maps each vertex of the 3x3 block around ``v`` to the
    quadrants (0 NE, 1 NW, 2 SW, 3 SE) holding its rounded corners.  Every
    unit edge of the block is drawn, shortened by ``radius`` at both ends,
    and each corner as a quarter circle.  Squares ``S`` and ``T`` meeting at
    ``v`` are connected when a 4-connected pixel path joins their centers
    inside ``S``, ``T`` and the disk of radius ``radius`` around ``v``.
    Returns the connected pair (lower-left corners, sorted) or ``None``.
    """
    h = 1.0 / res
    vx, vy = v
    blocked = set()

    def mark(x, y):
        blocked.add((int((x - vx + 1) // h), int((y - vy + 1) // h)))

    quad_dirs = {0: ((1, 0), (0, 1)), 1: ((0, 1), (-1, 0)), 2: ((-1, 0), (0, -1)), 3: ((0, -1), (1, 0))}
    steps = 8 * res
    for ux in range(vx - 1, vx + 2):
        for uy in range(vy - 1, vy + 2):
            for d in ((1, 0), (0, 1)):
                wx, wy = ux + d[0], uy + d[1]
                if wx > vx + 1 or wy > vy + 1:
                    continue
                for t in range(steps + 1):
                    s = radius + (1 - 2 * radius) * t / steps
                    mark(ux + s * d[0], uy + s * d[1])
            for q in corner_quadrants.get((ux, uy), ()):
                d1, d2 = quad_dirs[q]
                for x, y in _corner_samples((ux, uy), d1, d2, radius, steps):
                    mark(x, y)
    n = 2 * res

    def inside(i, j, sq):
        x, y = vx - 1 + (i + 0.5) * h, vy - 1 + (j + 0.5) * h
        if (x - vx) ** 2 + (y - vy) ** 2 < radius ** 2:
            return True
        return any(a <= x <= a + 1 and b <= y <= b + 1 for a, b in sq)

    def connected(s, t):
        sq = (s, t)
        start = (int((s[0] + 0.5 - vx + 1) / h), int((s[1] + 0.5 - vy + 1) / h))
        goal = (int((t[0] + 0.5 - vx + 1) / h), int((t[1] + 0.5 - vy + 1) / h))
        seen = {start}
        todo = deque([start])
        while todo:
            i, j = todo.popleft()
            if (i, j) == goal:
                return True
            for a, b in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
                if 0 <= a < n and 0 <= b < n and (a, b) not in seen and (a, b) not in blocked \
                        and inside(a, b, sq):
                    seen.add((a, b))
                    todo.append((a, b))
        return False

    ne, nw, sw, se = (vx, vy), (vx - 1, vy), (vx - 1, vy - 1), (vx, vy - 1)
    a = connected(ne, sw)
    b = connected(nw, se)
    if a == b:
        return None
    return tuple(sorted((ne, sw) if a else (nw, se)))  # type: ignore[return-value]


__all__ = ["strip_fold", "turtle", "flood_pairing"]
