"""Finite windows of plane coverings by lattice curves.

A :class:`CoveringWindow` holds curve fragments with exact integer vertices,
a rectangle in which the fragments are meant to cover every unit edge, and
bookkeeping for the derivation calculus.  Curve identity is carried by
explicit ids: it is never inferred from geometry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import foldseq
from .foldseq import SequenceGenerator, Signs, reverse_negate
from .lattice import (DIRS, Point, add, cdiv_exact, cmul, dir_index, edge_key,
                      edge_endpoints, parity, quadrant, rot, sub, trace, turns_of)

EdgeKey = tuple[int, int, int]
Rect = tuple[int, int, int, int]  # x0, y0, x1, y1 (inclusive vertex bounds)


class CoveringError(ValueError):
    pass


class OverlapError(CoveringError):
    def __init__(self, edge, owners):
        super().__init__(f"edge {edge} owned by {owners[0]} and {owners[1]}")
        self.edge = edge
        self.owners = owners


class ParityError(CoveringError):
    pass


class ConstructionError(CoveringError):
    pass


class NotDerivable(CoveringError):
    pass


class AmbiguousDerivation(CoveringError):
    def __init__(self, classes):
        super().__init__(f"several vertex classes give a derivation: {classes}")
        self.classes = classes


class InvalidSeed(CoveringError):
    pass


class NeedsMoreSteps(CoveringError):
    pass


@dataclass(frozen=True)
class Fragment:
    """Consecutive segments ``start, start+1, ...`` of curve ``curve``."""

    curve: int
    start: int
    points: tuple[Point, ...]

    @property
    def nseg(self) -> int:
        return len(self.points) - 1

    def translated(self, t: Point) -> "Fragment":
        return Fragment(self.curve, self.start, tuple(add(p, t) for p in self.points))


@dataclass(frozen=True)
class SelfSimilarity:
    """``Delta^{-p}`` maps the covering onto itself when realized by ``p``
    antiderivations over ``base`` with the listed choices (first applied first)."""

    base: Signs = (1,)
    choices: tuple[int, ...] = (1,)

    @property
    def p(self) -> int:
        return len(self.choices)


def rect_contains(r: Rect, p: Point) -> bool:
    return r[0] <= p[0] <= r[2] and r[1] <= p[1] <= r[3]


def rect_edges(r: Rect) -> Iterable[EdgeKey]:
    x0, y0, x1, y1 = r
    for x in range(x0, x1):
        for y in range(y0, y1 + 1):
            yield (x, y, 0)
    for x in range(x0, x1 + 1):
        for y in range(y0, y1):
            yield (x, y, 1)


def centered_rect(half: int, center: Point = (0, 0)) -> Rect:
    return (center[0] - half, center[1] - half, center[0] + half, center[1] + half)


def shrink(r: Rect, d: int) -> Rect:
    return (r[0] + d, r[1] + d, r[2] - d, r[3] - d)


class CoveringWindow:
    """Curve fragments plus a rectangle ``window`` where they should cover.

    Attributes
    ----------
    edges : dict
        nonoriented edge key -> ``(curve, index, orientation)``; orientation
        is +1 when the segment runs towards increasing x or y.
    parity_class : int | None
        horizontal segments start at vertices with ``x + y`` of this parity.
    """

    def __init__(self, fragments: Iterable[Fragment], window: Rect | None = None,
                 similarity: SelfSimilarity | None = None, meta: dict | None = None):
        self.fragments: tuple[Fragment, ...] = tuple(f for f in fragments if f.nseg > 0)
        self.similarity = similarity
        self.meta = dict(meta or {})
        self.edges: dict[EdgeKey, tuple[int, int, int]] = {}
        self._loc: dict[EdgeKey, tuple[int, int]] = {}
        self._vertex_index: dict[Point, list[tuple[int, int]]] | None = None
        pclass = None
        for fi, fr in enumerate(self.fragments):
            pts = fr.points
            for j in range(fr.nseg):
                a, b = pts[j], pts[j + 1]
                key = edge_key(a, b)
                if key in self.edges:
                    c, k, _ = self.edges[key]
                    raise OverlapError(key, [(c, k), (fr.curve, fr.start + j)])
                orient = 1 if (b[0] - a[0]) + (b[1] - a[1]) > 0 else -1
                self.edges[key] = (fr.curve, fr.start + j, orient)
                self._loc[key] = (fi, j)
                horiz = a[1] == b[1]
                pc = parity(a) if horiz else 1 - parity(a)
                if pclass is None:
                    pclass = pc
                elif pc != pclass:
                    raise ParityError(
                        f"segment {a}->{b} of curve {fr.curve} breaks the orientation parity rule")
        self.parity_class = pclass
        if window is None:
            window = self.bbox()
        self.window: Rect = window

    # -- basic queries --------------------------------------------------

    def bbox(self) -> Rect:
        xs = [p[0] for f in self.fragments for p in f.points] or [0]
        ys = [p[1] for f in self.fragments for p in f.points] or [0]
        return (min(xs), min(ys), max(xs), max(ys))

    @property
    def curve_ids(self) -> set[int]:
        return {f.curve for f in self.fragments}

    def __len__(self) -> int:
        return len(self.edges)

    def uncovered(self, core: Rect | None = None) -> list[EdgeKey]:
        core = self.window if core is None else core
        return [e for e in rect_edges(core) if e not in self.edges]

    def is_complete(self, core: Rect | None = None) -> bool:
        core = self.window if core is None else core
        return all(e in self.edges for e in rect_edges(core))

    def oriented(self, key: EdgeKey) -> tuple[Point, Point]:
        a, b = edge_endpoints(key)
        return (a, b) if self.edges[key][2] > 0 else (b, a)

    def vertex_index(self) -> dict[Point, list[tuple[int, int]]]:
        """vertex -> list of (fragment, position) with the vertex at ``points[pos]``."""
        if self._vertex_index is None:
            idx: dict[Point, list[tuple[int, int]]] = {}
            for fi, fr in enumerate(self.fragments):
                for j, p in enumerate(fr.points):
                    idx.setdefault(p, []).append((fi, j))
            self._vertex_index = idx
        return self._vertex_index

    def passages(self, v: Point) -> list[tuple[int, int]]:
        """Rounded corners at ``v`` as ``(quadrant, curve)`` pairs."""
        out = []
        for fi, j in self.vertex_index().get(v, ()):
            fr = self.fragments[fi]
            if 0 < j < fr.nseg:
                q = quadrant(dir_index(sub(fr.points[j - 1], v)), dir_index(sub(fr.points[j + 1], v)))
                out.append((q, fr.curve))
        return sorted(out)

    def pairing(self, v: Point) -> int | None:
        """0 if the corners at ``v`` sit in NE/SW, 1 if in NW/SE, None if unknown."""
        ps = self.passages(v)
        if len(ps) != 2:
            return None
        q = ps[0][0] % 2
        return q if ps[1][0] % 2 == q else None

    def walk(self, v: Point, direction: int, length: int) -> tuple[int, ...] | None:
        """Turns (as seen walking away from ``v``) of the curve piece leaving
        ``v`` in ``direction``; ``None`` if it leaves the registered fragments
        before ``length`` segments."""
        w = add(v, DIRS[direction])
        key = edge_key(v, w)
        loc = self._loc.get(key)
        if loc is None:
            return None
        fi, j = loc
        fr = self.fragments[fi]
        if fr.points[j] == v:
            if j + length > fr.nseg:
                return None
            return turns_of(fr.points[j:j + length + 1])
        if j + 1 - length < 0:
            return None
        return turns_of(fr.points[j + 1 - length:j + 2][::-1])

    def outward_turns(self, v: Point, direction: int, max_len: int) -> tuple[int, ...]:
        """Longest available outward turn sequence (up to ``max_len - 1`` turns)."""
        w = add(v, DIRS[direction])
        loc = self._loc.get(edge_key(v, w))
        if loc is None:
            return ()
        fi, j = loc
        fr = self.fragments[fi]
        if fr.points[j] == v:
            pts = fr.points[j:j + max_len + 1]
        else:
            lo = max(0, j + 1 - max_len)
            pts = fr.points[lo:j + 2][::-1]
        return turns_of(pts)

    # -- transforms -------------------------------------------------------

    def translated(self, t: Point) -> "CoveringWindow":
        w = self.window
        return CoveringWindow([f.translated(t) for f in self.fragments],
                              (w[0] + t[0], w[1] + t[1], w[2] + t[0], w[3] + t[1]),
                              self.similarity, self.meta)

    def rotated(self, quarter_turns: int) -> "CoveringWindow":
        frs = [Fragment(f.curve, f.start, tuple(rot(p, quarter_turns) for p in f.points))
               for f in self.fragments]
        corners = [rot((self.window[0], self.window[1]), quarter_turns),
                   rot((self.window[2], self.window[3]), quarter_turns)]
        win = (min(c[0] for c in corners), min(c[1] for c in corners),
               max(c[0] for c in corners), max(c[1] for c in corners))
        return CoveringWindow(frs, win, self.similarity, self.meta)

    def clipped(self, r: Rect) -> "CoveringWindow":
        """Keep only segments inside ``r``; fragments split at the frontier."""
        out = []
        for fr in self.fragments:
            run: list[Point] = []
            run_start = 0
            for j in range(fr.nseg):
                a, b = fr.points[j], fr.points[j + 1]
                if rect_contains(r, a) and rect_contains(r, b):
                    if not run:
                        run = [a]
                        run_start = fr.start + j
                    run.append(b)
                else:
                    if run:
                        out.append(Fragment(fr.curve, run_start, tuple(run)))
                    run = []
            if run:
                out.append(Fragment(fr.curve, run_start, tuple(run)))
        return CoveringWindow(out, r, self.similarity, self.meta)

    def with_window(self, r: Rect) -> "CoveringWindow":
        return CoveringWindow(self.fragments, r, self.similarity, self.meta)


def build_covering(fragments: Iterable[Fragment], window: Rect | None = None, *,
                   require_complete: bool = False,
                   similarity: SelfSimilarity | None = None) -> CoveringWindow:
    """Validate fragments as (part of) a covering.

    Raises :class:`OverlapError` on a doubly used edge and :class:`ParityError`
    when orientations do not follow one global parity class.
    """
    cov = CoveringWindow(fragments, window, similarity)
    if require_complete:
        missing = cov.uncovered()
        if missing:
            raise CoveringError(f"{len(missing)} uncovered edges in window, e.g. {missing[0]}")
    return cov


def fragments_from_curves(curves: Sequence, starts: Sequence[int] | None = None) -> list[Fragment]:
    starts = starts or [0] * len(curves)
    return [Fragment(i, s, c.vertices) for i, (c, s) in enumerate(zip(curves, starts))]


def pattern_equal(a: CoveringWindow, b: CoveringWindow, rect: Rect | None = None,
                  translation: Point = (0, 0)) -> bool:
    """Same oriented edges inside ``rect`` and the same corner pairing at
    each interior vertex, after translating ``a`` by ``translation``."""
    if rect is None:
        wa, wb = a.window, b.window
        t = translation
        rect = (max(wa[0] + t[0], wb[0]), max(wa[1] + t[1], wb[1]),
                min(wa[2] + t[0], wb[2]), min(wa[3] + t[1], wb[3]))
    tx, ty = translation
    for key in rect_edges(rect):
        ka = (key[0] - tx, key[1] - ty, key[2])
        ea, eb = a.edges.get(ka), b.edges.get(key)
        if (ea is None) != (eb is None):
            return False
        if ea is not None and ea[2] != eb[2]:
            return False
    for x in range(rect[0] + 1, rect[2]):
        for y in range(rect[1] + 1, rect[3]):
            if a.pairing((x - tx, y - ty)) != b.pairing((x, y)):
                return False
    return True


# -- rotation construction --------------------------------------------------

def arm_segments(gen: SequenceGenerator, depth: int) -> int:
    """Arm length used by :func:`rotation_covering`: ``m**depth`` segments for
    a star sequence with block ``m >= 3``, ``4**depth`` otherwise."""
    m = gen.block
    return m ** depth if m >= 3 else 4 ** depth


def largest_covered_square(cov: CoveringWindow, center: Point = (0, 0)) -> Rect | None:
    """Largest square centered at ``center`` whose edges are all present."""
    h = 0
    while all(e in cov.edges for e in _ring_edges(center, h + 1)):
        h += 1
    return centered_rect(h, center) if h > 0 else None


def _ring_edges(c: Point, h: int) -> Iterable[EdgeKey]:
    """Edges of ``[c-h, c+h]^2`` that are not edges of ``[c-h+1, c+h-1]^2``."""
    inner = centered_rect(h - 1, c)
    for e in rect_edges(centered_rect(h, c)):
        a, b = edge_endpoints(e)
        if not (rect_contains(inner, a) and rect_contains(inner, b)):
            yield e


def rotation_pair(gen: SequenceGenerator, sign: int, n_segments: int) -> list[Fragment]:
    """The two complete curves of ``(S-bar, sign, S)`` built from the four
    rotated arms; curve 0 contains ``[0,1]`` as its segment 1."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    arm = trace(gen.prefix(n_segments - 1)).vertices
    back = [rot(p, 1 if sign > 0 else 3) for p in arm]
    neg_half = list(reversed(back))  # ends at the origin
    pts0 = tuple(neg_half + list(arm[1:]))
    pts1 = tuple(rot(p, 2) for p in pts0)
    start = 1 - n_segments
    return [Fragment(0, start, pts0), Fragment(1, start, pts1)]


def rotation_covering(gen: SequenceGenerator, sign: int, depth: int,
                      core: Rect | None = None) -> CoveringWindow:
    """Four rotated copies of the curve of ``gen`` joined at the origin into
    two complete curves.  ``window`` is the largest fully covered centered
    square unless ``core`` is given; ``meta['uncovered']`` lists missing edges
    of ``core`` (or of the square ``[-2, 2]^2`` when nothing is covered)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    n = arm_segments(gen, depth)
    frs = rotation_pair(gen, sign, n)
    arms: list[set[EdgeKey]] = []
    for fr in frs:
        pts = fr.points
        arms.append({edge_key(a, b) for a, b in zip(pts[:n], pts[1:n + 1])})
        arms.append({edge_key(a, b) for a, b in zip(pts[n:], pts[n + 1:])})
    for i in range(4):
        for j in range(i + 1, 4):
            common = arms[i] & arms[j]
            if common:
                raise ConstructionError(f"rotated arms {i} and {j} share edge {min(common)}")
    try:
        cov = CoveringWindow(frs)
    except CoveringError as exc:
        raise ConstructionError(str(exc)) from exc
    if core is None:
        core = largest_covered_square(cov) or centered_rect(2)
    cov = cov.with_window(core)
    cov.meta.update(construction="rotation", sign=sign, depth=depth,
                    uncovered=cov.uncovered(core))
    cov.similarity = similarity_of(gen)
    return cov


def similarity_of(gen: SequenceGenerator) -> SelfSimilarity | None:
    """Antiderivation data under which the rotation covering of ``gen`` is
    mapped onto itself (up to the half-turn symmetry of that covering)."""
    if isinstance(gen, foldseq.StarSequence):
        return SelfSimilarity(gen.base, (1,))
    if isinstance(gen, foldseq.InstructionSequence) and gen.period is not None:
        n = len(gen.folds)
        p = gen.period
        if n != p:
            return None
        block = gen.folds
        # each derivation turns curve 1 by 1 (a_1 = +1) or by -i (a_1 = -1);
        # repeat the period until the total turn is 1 or -1
        reps = 1
        while True:
            q = sum(1 for j in range(p * reps) if block[j % p] < 0) % 4
            if q % 2 == 0:
                break
            reps += 1
        folds = [block[j % p] for j in range(p * reps)]
        return SelfSimilarity((1,), tuple(reversed(folds)))
    return None


# -- derivation calculus ----------------------------------------------------

def base_vector(base: Sequence[int]) -> Point:
    """Displacement of the curve of ``base`` started at 0 towards +1."""
    return sub(trace(base).end, (0, 0))


def _inscribed_half(w: Point, half: float, up: bool) -> int:
    a, b = abs(w[0]), abs(w[1])
    m = a * a + b * b
    return math.floor(half * m / (a + b)) if up else math.floor(half / (a + b))


def antiderive_covering(cov: CoveringWindow, turn_choice: int = 1,
                        base: Sequence[int] = (1,)) -> CoveringWindow:
    """Replace every segment ``[z, z+e]`` by the curve of ``base`` (or of its
    bar) from ``w z`` to ``w (z+e)``, where ``w`` is the displacement of the
    ``base`` curve.  ``base`` is used when ``z`` is even XOR ``turn_choice``
    is -1.  With ``base = (+1,)`` the corner turns left exactly then.
    """
    if turn_choice not in (1, -1):
        raise ValueError("turn_choice must be +1 or -1")
    base = tuple(base)
    bar = reverse_negate(base)
    w = base_vector(base)
    wbar = base_vector(bar)
    m = len(base) + 1
    rot_bar = dir_index(cdiv_exact(w, wbar))  # initial direction offset for bar
    out = []
    lim = foldseq.MAX_TERMS
    total = 0
    for fr in cov.fragments:
        pts = [cmul(w, fr.points[0])]
        for a, b in zip(fr.points, fr.points[1:]):
            d = dir_index(sub(b, a))
            use_base = (parity(a) == 0) != (turn_choice == -1)
            seq = base if use_base else bar
            d0 = d if use_base else (d + rot_bar) % 4
            piece = trace(seq, pts[-1], d0).vertices
            pts.extend(piece[1:])
        total += len(pts)
        if total > lim:
            raise foldseq.ResourceError("antiderived window exceeds the term cap")
        out.append(Fragment(fr.curve, m * (fr.start - 1) + 1, tuple(pts)))
    x0, y0, x1, y1 = cov.window
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    half = min(x1 - x0, y1 - y0) / 2
    c = (cx * w[0] - cy * w[1], cx * w[1] + cy * w[0])
    h = _inscribed_half(w, half, up=True)
    win = (math.ceil(c[0] - h), math.ceil(c[1] - h), math.floor(c[0] + h), math.floor(c[1] + h))
    res = CoveringWindow(out, win, cov.similarity, cov.meta)
    return res


def coset_reps(w: Point) -> list[Point]:
    """Representatives of the Gaussian integers modulo ``w``, 0 first."""
    m = w[0] * w[0] + w[1] * w[1]
    reps: list[Point] = []
    for x in range(m):
        for y in range(m):
            p = (x, y)
            if all(cdiv_exact(sub(p, r), w) is None for r in reps):
                reps.append(p)
            if len(reps) == m:
                return reps
    return reps


def _derive_with(cov: CoveringWindow, rep: Point, base: Signs) -> CoveringWindow:
    bar = reverse_negate(base)
    w = base_vector(base)
    m = len(base) + 1
    assignment: dict[int, bool] = {}  # derived start parity -> block is base
    out = []
    for fr in cov.fragments:
        pts = fr.points
        kept = [j for j, p in enumerate(pts) if cdiv_exact(sub(p, rep), w) is not None]
        if len(kept) < 2:
            continue
        for u, v in zip(kept, kept[1:]):
            if v - u != m:
                raise NotDerivable("kept vertices are not m segments apart")
        new_pts = []
        for u, v in zip(kept, kept[1:]):
            block = turns_of(pts[u:v + 1])
            if block != base and block != bar:
                raise NotDerivable(f"block {block} is neither S nor S-bar")
            z = cdiv_exact(sub(pts[u], rep), w)
            if base != bar:
                is_base = block == base
                prev = assignment.setdefault(parity(z), is_base)
                if prev != is_base:
                    raise NotDerivable("block type does not follow vertex parity")
            if not new_pts:
                new_pts.append(z)
            nz = cdiv_exact(sub(pts[v], rep), w)
            if abs(nz[0] - z[0]) + abs(nz[1] - z[1]) != 1:
                raise NotDerivable("merged block is not a unit step")
            new_pts.append(nz)
        if 0 in assignment and 1 in assignment and assignment[0] == assignment[1]:
            raise NotDerivable("both parities carry the same block type")
        k_first = fr.start + kept[0]
        try:
            turns_of(new_pts)
        except ValueError as exc:
            raise NotDerivable(str(exc)) from exc
        out.append(Fragment(fr.curve, (k_first - 1) // m + 1, tuple(new_pts)))
    try:
        res = CoveringWindow(out, None, cov.similarity, cov.meta)
    except CoveringError as exc:
        raise NotDerivable(str(exc)) from exc
    x0, y0, x1, y1 = cov.window
    cx, cy = (x0 + x1) / 2 - rep[0], (y0 + y1) / 2 - rep[1]
    n = w[0] * w[0] + w[1] * w[1]
    c = ((cx * w[0] + cy * w[1]) / n, (cy * w[0] - cx * w[1]) / n)
    h = _inscribed_half(w, min(x1 - x0, y1 - y0) / 2, up=False)
    win = (math.ceil(c[0] - h), math.ceil(c[1] - h), math.floor(c[0] + h), math.floor(c[1] + h))
    if cov.is_complete():
        # blocks straddling the old frontier may be missing
        while win[0] < win[2] and not res.is_complete(win):
            win = shrink(win, 1)
    return res.with_window(win)


def derive_covering(cov: CoveringWindow, parity: str | int = "auto",
                    base: Sequence[int] = (1,)) -> CoveringWindow:
    """Merge blocks of ``m`` segments so that surviving vertices form one
    class modulo ``w`` and map that class onto the lattice by
    ``z -> (z - rep) / w``.

    ``parity`` is ``"auto"``, ``"classA"`` (keep the class of 0),
    ``"classB"`` (class of 1, for ``m = 2``), or an index into
    :func:`coset_reps`.  Under ``"auto"`` a class is accepted only if its
    result covers the derived window; two accepted classes raise
    :class:`AmbiguousDerivation`.
    """
    base = tuple(base)
    w = base_vector(base)
    reps = coset_reps(w)
    if parity == "classA":
        choice = [0]
    elif parity == "classB":
        choice = [1]
    elif parity == "auto":
        choice = list(range(len(reps)))
    else:
        choice = [int(parity)]
    want_full = cov.is_complete()
    good = []
    for i in choice:
        try:
            res = _derive_with(cov, reps[i], base)
        except NotDerivable:
            if len(choice) == 1:
                raise
            continue
        if parity == "auto" and want_full and not res.is_complete():
            continue
        good.append((i, res))
    if not good:
        raise NotDerivable("no vertex class yields a derivation")
    if len(good) > 1:
        raise AmbiguousDerivation([i for i, _ in good])
    res = good[0][1]
    res.meta["derived_class"] = good[0][0]
    return res


# -- vertex levels ----------------------------------------------------------

@dataclass
class VertexLevels:
    """``level[v]`` = largest ``n <= max_n`` with ``v`` in ``E_n``.

    Vertices whose half-curves leave the window before the level is decided
    are listed in ``unknown``.
    """

    max_n: int
    level: dict[Point, int] = field(default_factory=dict)
    unknown: set[Point] = field(default_factory=set)

    def E(self, n: int) -> set[Point]:
        return {v for v, lv in self.level.items() if lv >= n}

    def F(self, n: int) -> set[Point]:
        if n >= self.max_n:
            raise ValueError("F_n needs levels above n")
        return {v for v, lv in self.level.items() if lv == n}

    @property
    def e_inf_candidates(self) -> set[Point]:
        return self.E(self.max_n)


def vertex_level(cov: CoveringWindow, max_n: int, core: Rect | None = None) -> VertexLevels:
    """Levels from the rotation characterization: ``v`` is in ``E_n`` when the
    four half-curves of length ``2**n`` leaving ``v`` have equal turn sequences."""
    core = cov.window if core is None else core
    L = 1 << max_n
    res = VertexLevels(max_n)
    for x in range(core[0], core[2] + 1):
        for y in range(core[1], core[3] + 1):
            v = (x, y)
            seqs = [cov.outward_turns(v, d, L) for d in range(4)]
            if any(not cov.edges.get(edge_key(v, add(v, DIRS[d]))) for d in range(4)):
                res.unknown.add(v)
                continue
            avail = min(len(s) for s in seqs)
            agree = 0
            while agree < avail and seqs[0][agree] == seqs[1][agree] == seqs[2][agree] == seqs[3][agree]:
                agree += 1
            lv = min((agree + 1).bit_length() - 1, max_n)
            if agree == avail and avail < L - 1 and lv < max_n:
                # agreement ran into the window edge: level may be higher
                res.unknown.add(v)
            res.level[v] = lv
    return res


def vertex_level_by_derivation(cov: CoveringWindow, max_n: int, core: Rect | None = None,
                               choices: Sequence[str | int] | None = None) -> VertexLevels:
    """Levels as the number of derivations a vertex survives (independent route)."""
    core = cov.window if core is None else core
    res = VertexLevels(max_n)
    pts = {(x, y) for x in range(core[0], core[2] + 1) for y in range(core[1], core[3] + 1)}
    for v in pts:
        res.level[v] = 0
    # track images of surviving vertices through successive derivations
    alive = {v: v for v in pts}
    cur = cov
    for n in range(1, max_n + 1):
        par = choices[n - 1] if choices else "auto"
        nxt = derive_covering(cur, par)
        rep = coset_reps((1, 1))[nxt.meta["derived_class"]]
        new_alive = {}
        for v, img in alive.items():
            if parity(img) == parity(rep):
                z = cdiv_exact(sub(img, rep), (1, 1))
                new_alive[v] = z
                res.level[v] = n
        alive = new_alive
        cur = nxt
    return res


def count_curves(cov: CoveringWindow, core: Rect | None = None) -> tuple[int, list[int]]:
    core = cov.window if core is None else core
    ids = sorted({cov.edges[e][0] for e in rect_edges(core) if e in cov.edges})
    return len(ids), ids


# -- interior relation and Proposition-1 limits ---------------------------

def _linked(g: CoveringWindow, e1: EdgeKey, e2: EdgeKey) -> bool:
    """Whether ``e1`` is immediately followed by ``e2`` along a curve of ``g``."""
    l1, l2 = g._loc.get(e1), g._loc.get(e2)
    return l1 is not None and l2 is not None and l1[0] == l2[0] and l2[1] == l1[1] + 1


def is_sub(f: CoveringWindow, g: CoveringWindow, translation: Point = (0, 0)) -> bool:
    """``tau(F) < G``: every fragment is a subcurve of a curve of ``G`` with the
    same orientation, and segments consecutive in ``G`` are consecutive in ``F``."""
    tx, ty = translation
    fk: dict[EdgeKey, tuple[int, int]] = {}
    for fi, fr in enumerate(f.fragments):
        prev = None
        for j in range(fr.nseg):
            a = (fr.points[j][0] + tx, fr.points[j][1] + ty)
            b = (fr.points[j + 1][0] + tx, fr.points[j + 1][1] + ty)
            key = edge_key(a, b)
            ge = g.edges.get(key)
            if ge is None:
                return False
            if g.oriented(key) != (a, b):
                return False
            if prev is not None and not _linked(g, prev, key):
                return False
            fk[key] = (fi, j)
            prev = key
    # consecutive in G and both in F => consecutive in F
    for key, (fi, j) in fk.items():
        gi, gj = g._loc[key]
        gf = g.fragments[gi]
        if gj + 1 < gf.nseg:
            nxt = edge_key(gf.points[gj + 1], gf.points[gj + 2])
            if nxt in fk and fk[nxt] != (fi, j + 1):
                return False
    return True


def curve_map(f: CoveringWindow, g: CoveringWindow, translation: Point = (0, 0)) -> dict[int, int] | None:
    """Curve of ``G`` containing each curve of ``tau(F)`` (``None`` if some
    curve of ``F`` is not carried by a single curve of ``G``)."""
    tx, ty = translation
    out: dict[int, int] = {}
    for fr in f.fragments:
        a, b = fr.points[0], fr.points[1]
        ge = g.edges.get(edge_key((a[0] + tx, a[1] + ty), (b[0] + tx, b[1] + ty)))
        if ge is None:
            return None
        if out.setdefault(fr.curve, ge[0]) != ge[0]:
            return None
    return out


def flank_edges(key: EdgeKey) -> list[EdgeKey]:
    """The 6 edges completing the two unit squares on either side of ``key``."""
    x, y, axis = key
    if axis == 0:
        return [(x, y + 1, 0), (x, y, 1), (x + 1, y, 1),
                (x, y - 1, 0), (x, y - 1, 1), (x + 1, y - 1, 1)]
    return [(x + 1, y, 1), (x, y, 0), (x, y + 1, 0),
            (x - 1, y, 1), (x - 1, y, 0), (x - 1, y + 1, 0)]


def interior_relation(f: CoveringWindow, g: CoveringWindow, translation: Point = (0, 0)) -> bool:
    """``tau(F) << G``: ``tau(F) < G``, ``tau(F) != G``, and both unit squares
    beside every segment of ``tau(F)`` have all their edges in ``G``."""
    tx, ty = translation
    if not is_sub(f, g, translation):
        return False
    for key in f.edges:
        k2 = (key[0] + tx, key[1] + ty, key[2])
        for e in flank_edges(k2):
            if e not in g.edges:
                return False
    return len(f.edges) != len(g.edges)


@dataclass
class SeedCertificate:
    """``rho(F) + tau << Delta^{-p}(F)`` where ``rho`` is the rotation by
    ``rotation`` quarter turns about 0 and ``Delta^{-p}`` is ``similarity``.

    ``curve_map`` sends each curve of ``F`` to the curve of ``Delta^{-p}(F)``
    containing its image; the limit has one curve per periodic point.
    """

    seed: CoveringWindow
    tau: Point
    similarity: SelfSimilarity
    rotation: int = 0
    verified: bool = False
    curve_map: dict[int, int] | None = None

    @property
    def p(self) -> int:
        return self.similarity.p

    @property
    def n_curves(self) -> int:
        if self.curve_map is None:
            return len(self.seed.curve_ids)
        return len(periodic_points(self.curve_map))

    def moved_seed(self) -> CoveringWindow:
        return self.seed.rotated(self.rotation)


def periodic_points(cm: dict[int, int]) -> set[int]:
    s = set(cm)
    for _ in range(len(cm)):
        s = {cm[i] for i in s}
    return s


def antiderive_times(cov: CoveringWindow, sim: SelfSimilarity) -> CoveringWindow:
    for c in sim.choices:
        cov = antiderive_covering(cov, c, sim.base)
    return cov


def verify_certificate(cert: SeedCertificate) -> bool:
    """Re-check ``rho(F) + tau << Delta^{-p}(F)`` from scratch and record the
    curve map."""
    grown = antiderive_times(cert.seed, cert.similarity)
    moved = cert.moved_seed()
    ok = interior_relation(moved, grown, cert.tau)
    cm = curve_map(moved, grown, cert.tau) if ok else None
    cert.verified = ok and cm is not None
    cert.curve_map = cm if cert.verified else None
    return cert.verified


def _motion_between(a: CoveringWindow, b: CoveringWindow) -> tuple[int, Point] | None:
    """``(q, t)`` with ``b == i**q a + t`` fragment by fragment, else ``None``."""
    if len(a.fragments) != len(b.fragments):
        return None
    fa = sorted(a.fragments, key=lambda f: (f.curve, f.start))
    fb = sorted(b.fragments, key=lambda f: (f.curve, f.start))
    for q in range(4):
        t = sub(fb[0].points[0], rot(fa[0].points[0], q))
        if all(x.curve == y.curve and len(x.points) == len(y.points)
               and all(add(rot(p, q), t) == r for p, r in zip(x.points, y.points))
               for x, y in zip(fa, fb)):
            return q, t
    return None


def _translation_between(a: CoveringWindow, b: CoveringWindow) -> Point | None:
    m = _motion_between(a, b)
    return m[1] if m is not None and m[0] == 0 else None


def prop1_limit(cert: SeedCertificate, steps: int, core: Rect | None = None) -> CoveringWindow:
    """Inductive limit of ``Delta^{-np}(F)`` along the motions ``psi_n``.

    Returns the union after ``steps`` iterations, expressed in the
    coordinates of ``F``.  Curves of ``F`` that the curve map eventually
    identifies are merged (ids and segment indices made consistent).
    ``window`` is the largest fully covered square centered at the middle of
    the seed (or ``core`` when given, which must then be covered).
    """
    if not verify_certificate(cert):
        raise InvalidSeed("seed certificate fails rho(F) + tau << Delta^{-p}(F)")
    sim = cert.similarity
    g = cert.seed
    h = cert.moved_seed().translated(cert.tau)
    rq, shift = 0, (0, 0)  # limit = i**rq * G_n + shift
    history = []
    for n in range(steps):
        g_next = antiderive_times(g, sim)
        mot = _motion_between(g, h)
        if mot is None:
            raise InvalidSeed(f"Delta^-{n * sim.p}(psi F) is not a rigid image of Delta^-{n * sim.p}(F)")
        if not is_sub(h, g_next):
            raise InvalidSeed(f"step {n}: moved copy is not inside the next primitive")
        a, t = mot
        rq = (rq - a) % 4
        shift = sub(shift, rot(t, rq))
        history.append((rq, shift))
        h = antiderive_times(h, sim)
        g = g_next
    limit = _merge_curves(g, cert, steps)
    limit = limit.rotated(rq).translated(shift)
    center = _fixed_point(cert, limit)
    if core is not None:
        limit = limit.with_window(core)
        if not limit.is_complete():
            raise NeedsMoreSteps(f"core {core} not covered after {steps} steps")
    else:
        win = largest_covered_square(limit, center)
        if win is None:
            raise NeedsMoreSteps(f"nothing covered around {center} after {steps} steps")
        limit = limit.with_window(win)
    limit.meta.update(construction="prop1", steps=steps, fixed_point=center, motions=history,
                      n_curves=cert.n_curves)
    limit.similarity = None
    return limit


def _merge_curves(g: CoveringWindow, cert: SeedCertificate, level: int) -> CoveringWindow:
    """Relabel the curves of ``Delta^{-level p}(F)`` by their limit curve."""
    cm = cert.curve_map
    assert cm is not None
    if len(set(cm.values())) == len(cm):
        return g
    grown = antiderive_times(cert.seed, cert.similarity)
    moved = cert.moved_seed().translated(cert.tau)
    off: dict[int, int] = {}
    for fr in moved.fragments:
        key = edge_key(fr.points[0], fr.points[1])
        off[fr.curve] = grown.edges[key][1] - fr.start
    big_m = (len(cert.similarity.base) + 1) ** cert.p
    k = len(cm)
    frs = []
    for fr in g.fragments:
        c, delta = fr.curve, 0
        for s in range(k):
            delta += big_m ** (level + s) * off[c]
            c = cm[c]
        frs.append(Fragment(c, fr.start + delta, fr.points))
    return CoveringWindow(frs, g.window, g.similarity, g.meta)


def _fixed_point(cert: SeedCertificate, limit: CoveringWindow) -> Point:
    """A lattice point near the middle of the seed (the growth is centered there)."""
    xs = [p[0] for f in cert.seed.fragments for p in f.points]
    ys = [p[1] for f in cert.seed.fragments for p in f.points]
    return (round(sum(xs) / len(xs)), round(sum(ys) / len(ys)))


# -- six-curve completion ---------------------------------------------------

THEOREM2_SEED: tuple[tuple[Point, ...], ...] = (
    ((0, 1), (0, 0), (1, 0)),       # [i,0],[0,1]
    ((0, -1), (0, 0), (-1, 0)),     # [-i,0],[0,-1]
    ((1, 1), (0, 1)),               # [1+i, i]
    ((-1, 0), (-1, 1)),             # [-1, -1+i]
    ((-1, -1), (0, -1)),            # [-1-i, -i]
    ((1, 0), (1, -1)),              # [1, 1-i]
)


def theorem2_seed(sign: int = 1) -> CoveringWindow:
    """The 8-segment, 6-curve seed around the origin.

    For ``sign = -1`` the central curves are joined the other way at 0.
    """
    frs = []
    for i, pts in enumerate(THEOREM2_SEED):
        if i < 2 and sign < 0:
            pts = (rot(pts[0], 2),) + pts[1:]
        start = 0 if i < 2 else 1
        frs.append(Fragment(i, start, pts))
    return CoveringWindow(frs)


def _star_base(gen) -> tuple[Signs, list[int]]:
    """Base string ``S`` with ``gen = primitives of S^{*infinity}``, plus the
    antiderivation choices (outermost last) leading back to ``gen``."""
    if isinstance(gen, (tuple, list)):
        return tuple(gen), []
    if isinstance(gen, foldseq.StarSequence):
        return gen.base, []
    if isinstance(gen, foldseq.InstructionSequence) and gen.period is not None:
        g = gen
        prefix: list[int] = []
        for _ in range(len(gen.folds) + 2):
            if g.period in (1, 2) and len(g.folds) == g.period:
                folds = (g.folds * 2)[:2]
                return foldseq.unfold(folds, 2), list(reversed(prefix))
            prefix.append(g.folds[0])
            g = g.shifted()
        raise ConstructionError("instructions are not eventually of period 1 or 2")
    raise ConstructionError(f"unsupported sequence {gen!r}")


def six_curve_completion(gen, sign: int = 1, steps: int = 3, depth: int = 4,
                         core_half: int | None = None) -> CoveringWindow:
    """Complete the rotation pair of a non-perfect ``S`` into a 6-curve covering.

    Builds the 8-segment seed, checks ``F << Delta^{-2}(F)`` for the
    derivation of ``S``, and takes the Proposition-1 limit.  Instruction
    sequences are reduced to their periodic derivative and the result is
    antiderived back with the prefix folds.
    """
    base, prefix = _star_base(gen)
    star = foldseq.StarSequence(base)
    rc = rotation_covering(star, sign, depth, core=centered_rect(2))
    if not rc.meta["uncovered"]:
        raise ConstructionError("the rotation pair already covers: S is perfect")
    sim = SelfSimilarity(base, (1, 1))
    cert = SeedCertificate(theorem2_seed(sign), (0, 0), sim)
    if not verify_certificate(cert) or cert.n_curves != 6:
        raise InvalidSeed("the 8-segment seed is not interior to its second primitive")
    cov = prop1_limit(cert, steps)
    cov.meta["seed"] = cert
    for c in prefix:
        cov = antiderive_covering(cov, c, (1,))
    if core_half is not None:
        cov = cov.with_window(centered_rect(core_half))
        if not cov.is_complete():
            raise NeedsMoreSteps(f"core of half-size {core_half} not covered")
    cov.meta.update(construction="six", base=base, sign=sign)
    return cov


# -- text format ------------------------------------------------------------

def dump_covering(cov: CoveringWindow, rect: Rect | None = None) -> str:
    """``covering v1`` dump restricted to ``rect`` (default: the window)."""
    r = cov.window if rect is None else rect
    lines = ["covering v1", f"window {r[0]} {r[1]} {r[2]} {r[3]}",
             f"parity {cov.parity_class if cov.parity_class is not None else 0}"]
    if cov.similarity is not None:
        sim = cov.similarity
        lines.append(f"similarity {foldseq.format_signs(sim.base)} {foldseq.format_signs(sim.choices)}")
    for key in sorted(k for k in cov.edges if rect_contains(r, edge_endpoints(k)[0])
                      and rect_contains(r, edge_endpoints(k)[1])):
        c, k, _ = cov.edges[key]
        lines.append(f"E {key[0]} {key[1]} {'RU'[key[2]]} {c} {k}")
    # corners whose two edges both survive the clip
    inner = cov.clipped(r)
    for x in range(r[0], r[2] + 1):
        for y in range(r[1], r[3] + 1):
            ps = inner.passages((x, y))
            if len(ps) == 2:
                lines.append(f"P {x} {y} {ps[0][0]} {ps[1][0]}")
    return "\n".join(lines) + "\n"


def parse_covering(text: str) -> CoveringWindow:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "covering v1":
        raise CoveringError("missing 'covering v1' header")
    win = None
    pclass = 0
    sim = None
    per_curve: dict[int, dict[int, EdgeKey]] = {}
    passages = []
    for ln in lines[1:]:
        parts = ln.split()
        if not parts:
            continue
        tag = parts[0]
        if tag == "window":
            win = tuple(int(v) for v in parts[1:5])
        elif tag == "parity":
            pclass = int(parts[1])
        elif tag == "similarity":
            sim = SelfSimilarity(foldseq.parse_signs(parts[1]), foldseq.parse_signs(parts[2]))
        elif tag == "E":
            x, y = int(parts[1]), int(parts[2])
            if parts[3] not in ("R", "U"):
                raise CoveringError(f"bad axis {parts[3]!r}")
            axis = 0 if parts[3] == "R" else 1
            c, k = int(parts[4]), int(parts[5])
            per_curve.setdefault(c, {})[k] = (x, y, axis)
        elif tag == "P":
            passages.append(((int(parts[1]), int(parts[2])), int(parts[3]), int(parts[4])))
        else:
            raise CoveringError(f"unknown record {tag!r}")
    frs = []
    for c in sorted(per_curve):
        segs = per_curve[c]
        run: list[int] = []
        for k in sorted(segs):
            if run and k != run[-1] + 1:
                frs.append(_fragment_from(c, run, segs, pclass))
                run = []
            run.append(k)
        if run:
            frs.append(_fragment_from(c, run, segs, pclass))
    cov = CoveringWindow(frs, win, sim)
    for v, q1, q2 in passages:
        got = sorted(q for q, _ in cov.passages(v))
        if got != sorted((q1, q2)):
            raise CoveringError(f"passage record at {v} disagrees with edges")
    return cov


def _orient(key: EdgeKey, pclass: int) -> tuple[Point, Point]:
    a, b = edge_endpoints(key)
    horiz = key[2] == 0
    start_parity = pclass if horiz else 1 - pclass
    return (a, b) if parity(a) == start_parity else (b, a)


def _fragment_from(c: int, run: list[int], segs: dict[int, EdgeKey], pclass: int) -> Fragment:
    pts = list(_orient(segs[run[0]], pclass))
    for k in run[1:]:
        a, b = _orient(segs[k], pclass)
        if a != pts[-1]:
            raise CoveringError(f"curve {c} segments {k - 1},{k} are not joined")
        pts.append(b)
    return Fragment(c, run[0], tuple(pts))
