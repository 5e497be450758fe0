"""Window-level evidence about coverings: local isomorphism, pattern
densities, recentering at deep vertices, seed searches and diagnostics.

Patterns are compared up to translation and without orientation: a covering
and its translate by an odd vector carry opposite orientations, yet they are
the same set of rounded curves.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import foldseq
from .covering import (CoveringWindow, EdgeKey, Fragment, NeedsMoreSteps, Rect, SeedCertificate,
                       SelfSimilarity, VertexLevels, _orient, antiderive_times,
                       centered_rect, curve_map, interior_relation, prop1_limit, rect_contains,
                       shrink, vertex_level, verify_certificate)
from .lattice import Point, add, edge_key, sub


class Inconclusive(Exception):
    """The window does not contain enough data to decide."""


# -- patterns ---------------------------------------------------------------

Path = tuple[Point, ...]


def _canon_path(p: Sequence[Point]) -> Path:
    p = tuple(p)
    r = p[::-1]
    return min(p, r)


@dataclass(frozen=True)
class Pattern:
    """Finite set of curve pieces up to translation (and orientation).

    ``paths`` are vertex lists, translated so that the lexicographically
    least vertex is the origin.
    """

    paths: tuple[Path, ...]

    @classmethod
    def from_paths(cls, paths: Iterable[Sequence[Point]]) -> "Pattern":
        paths = [tuple(p) for p in paths if len(p) >= 2]
        if not paths:
            raise ValueError("empty pattern")
        o = min(v for p in paths for v in p)
        return cls(tuple(sorted(_canon_path([sub(v, o) for v in p]) for p in paths)))

    @classmethod
    def from_window(cls, cov: CoveringWindow) -> "Pattern":
        return cls.from_paths(f.points for f in cov.fragments)

    def at(self, t: Point) -> list[Path]:
        return [tuple(add(v, t) for v in p) for p in self.paths]

    def bbox(self) -> Rect:
        xs = [v[0] for p in self.paths for v in p]
        ys = [v[1] for p in self.paths for v in p]
        return (min(xs), min(ys), max(xs), max(ys))

    @property
    def diam(self) -> int:
        x0, y0, x1, y1 = self.bbox()
        return max(x1 - x0, y1 - y0)

    @property
    def nseg(self) -> int:
        return sum(len(p) - 1 for p in self.paths)


def _linked_either(cov: CoveringWindow, e1: EdgeKey, e2: EdgeKey) -> bool:
    l1, l2 = cov._loc.get(e1), cov._loc.get(e2)
    return (l1 is not None and l2 is not None and l1[0] == l2[0]
            and abs(l1[1] - l2[1]) == 1)


def _successor(cov: CoveringWindow, key: EdgeKey) -> EdgeKey | None:
    fi, j = cov._loc[key]
    fr = cov.fragments[fi]
    if j + 1 >= fr.nseg:
        return None
    return edge_key(fr.points[j + 1], fr.points[j + 2])


def occurs(cov: CoveringWindow, paths: Sequence[Path]) -> bool:
    """``B < C`` without orientation: each path runs along one curve of
    ``cov`` and segments consecutive in ``cov`` are consecutive in ``B``."""
    where: dict[EdgeKey, tuple[int, int]] = {}
    for pi, p in enumerate(paths):
        prev = None
        for j in range(len(p) - 1):
            key = edge_key(p[j], p[j + 1])
            if key not in cov.edges or key in where:
                return False
            if prev is not None and not _linked_either(cov, prev, key):
                return False
            where[key] = (pi, j)
            prev = key
    for key, (pi, j) in where.items():
        nxt = _successor(cov, key)
        if nxt is not None and nxt in where:
            qi, k = where[nxt]
            if qi != pi or abs(k - j) != 1:
                return False
    return True


def occurrences(cov: CoveringWindow, pat: Pattern, rect: Rect) -> list[Point]:
    """Translations ``t`` with ``t + pat`` inside ``rect`` and occurring in ``cov``."""
    bx0, by0, bx1, by1 = pat.bbox()
    out = []
    for tx in range(rect[0] - bx0, rect[2] - bx1 + 1):
        for ty in range(rect[1] - by0, rect[3] - by1 + 1):
            if occurs(cov, pat.at((tx, ty))):
                out.append((tx, ty))
    return out


# -- local isomorphism ------------------------------------------------------

@dataclass
class LIResult:
    ok: bool | None
    witness: tuple[str, Point] | None = None
    reason: str = ""


def _ball(cov: CoveringWindow, v: Point, r: int) -> tuple:
    """Connection data of the radius-``r`` square around ``v``: which edges
    are present and how the passages pair at each inner vertex."""
    x, y = v
    edges = tuple(e in cov.edges for e in
                  [(x + dx, y + dy, 0) for dx in range(-r, r) for dy in range(-r, r + 1)]
                  + [(x + dx, y + dy, 1) for dx in range(-r, r + 1) for dy in range(-r, r)])
    pairs = tuple(cov.pairing((x + dx, y + dy))
                  for dx in range(-r + 1, r) for dy in range(-r + 1, r))
    return edges, pairs


def ball_patterns(cov: CoveringWindow, r: int, rect: Rect | None = None) -> dict[tuple, Point]:
    """Radius-``r`` ball patterns centered in ``rect`` (first center kept)."""
    rect = shrink(cov.window, r) if rect is None else rect
    out: dict[tuple, Point] = {}
    for x in range(rect[0], rect[2] + 1):
        for y in range(rect[1], rect[3] + 1):
            out.setdefault(_ball(cov, (x, y), r), (x, y))
    return out


def default_core(cov: CoveringWindow) -> Rect:
    """Central half of the window."""
    x0, y0, x1, y1 = cov.window
    return shrink(cov.window, min(x1 - x0, y1 - y0) // 4)


def locally_isomorphic(a: CoveringWindow, b: CoveringWindow, r: int,
                       core_a: Rect | None = None, core_b: Rect | None = None) -> LIResult:
    """Every radius-``r`` pattern centered in the core of one window occurs
    somewhere in the other window, and conversely."""
    core_a = default_core(a) if core_a is None else core_a
    core_b = default_core(b) if core_b is None else core_b
    for name, c in (("a", core_a), ("b", core_b)):
        if min(c[2] - c[0], c[3] - c[1]) <= 4 * r:
            return LIResult(None, None, f"core of {name} is not wider than 4r")
    all_a = ball_patterns(a, r)
    all_b = ball_patterns(b, r)
    for pat, v in sorted(ball_patterns(a, r, core_a).items(), key=lambda kv: kv[1]):
        if pat not in all_b:
            return LIResult(False, ("a", v), "pattern of a missing from b")
    for pat, v in sorted(ball_patterns(b, r, core_b).items(), key=lambda kv: kv[1]):
        if pat not in all_a:
            return LIResult(False, ("b", v), "pattern of b missing from a")
    return LIResult(True)


# -- densities --------------------------------------------------------------

@dataclass
class DensityReport:
    pattern: Pattern
    table: list[tuple[int, Point, int, Fraction]] = field(default_factory=list)
    eps: float = 0.1

    @property
    def estimates(self) -> list[Fraction]:
        return [row[3] for row in self.table]

    @property
    def stable(self) -> bool:
        """Largest pairwise relative deviation is at most ``eps``."""
        est = self.estimates
        if not est:
            return False
        hi, lo = max(est), min(est)
        return hi == 0 or (hi - lo) / hi <= self.eps


def sigma(s: int, z: Point) -> Rect:
    """The square window of side ``s`` with lower-left corner ``z``."""
    return (z[0], z[1], z[0] + s, z[1] + s)


def pattern_density(cov: CoveringWindow, pat: Pattern, sizes: Sequence[int],
                    anchors: Sequence[Point], eps: float = 0.1) -> DensityReport:
    """Exact counts of copies of ``pat`` inside ``Sigma_s(z)``, divided by ``s^2``."""
    if pat.diam >= min(sizes):
        raise ValueError("pattern larger than the counting window")
    rep = DensityReport(pat, eps=eps)
    for s in sizes:
        for z in anchors:
            r = sigma(s, z)
            if not (rect_contains(cov.window, (r[0], r[1])) and rect_contains(cov.window, (r[2], r[3]))):
                raise ValueError(f"Sigma_{s}{z} leaves the covering window")
            n = len(occurrences(cov, pat, r))
            rep.table.append((s, z, n, Fraction(n, s * s)))
    return rep


def joint_vertices(paths: Sequence[Path]) -> list[Point]:
    """Common vertices of consecutive segments."""
    return [v for p in paths for v in p[1:-1]]


def _level_below(levels: VertexLevels, v: Point, k: int) -> bool | None:
    lv = levels.level.get(v)
    if lv is None:
        return None
    if lv >= k:
        return False
    return None if v in levels.unknown else True


def density_lower_bound(cov: CoveringWindow, pat: Pattern, max_n: int = 2,
                        rect: Rect | None = None,
                        levels: VertexLevels | None = None) -> tuple[Fraction, int, Point]:
    """Smallest ``n`` such that some copy of ``pat`` has all its joint
    vertices outside ``E_{2n+1}``; returns ``(1/2^(2n+2), n, translation)``.

    Raises :class:`Inconclusive` when no suitable copy is found.
    """
    rect = shrink(cov.window, 1 << (2 * max_n + 1)) if rect is None else rect
    if levels is None:
        levels = vertex_level(cov, 2 * max_n + 1, rect)
    occ = occurrences(cov, pat, rect)
    if not occ:
        raise Inconclusive("no copy of the pattern in the window")
    for n in range(max_n + 1):
        k = 2 * n + 1
        for t in occ:
            if all(_level_below(levels, v, k) for v in joint_vertices(pat.at(t))):
                return Fraction(1, 1 << (2 * n + 2)), n, t
    raise Inconclusive(f"every copy meets E_{2 * max_n + 1}")


def has_joint_in(paths: Sequence[Path], levels: VertexLevels, k: int) -> bool:
    return any(levels.level.get(v, 0) >= k for v in joint_vertices(paths))


def translation_periodicity(cov: CoveringWindow, paths: Sequence[Path], n: int,
                            u: Point) -> bool | None:
    """Whether ``paths`` translated by ``2^(n+1) u`` occur in ``cov``
    (``None`` when the translate leaves the window)."""
    t = (u[0] << (n + 1), u[1] << (n + 1))
    moved = [tuple(add(v, t) for v in p) for p in paths]
    if not all(rect_contains(cov.window, v) for p in moved for v in p):
        return None
    return occurs(cov, moved)


# -- recentering ------------------------------------------------------------

@dataclass
class Recentered:
    center: Point
    direction: int
    prefix: tuple[int, ...]


def recenter_infinite(cov: CoveringWindow, depth: int, core: Rect | None = None,
                      levels: VertexLevels | None = None) -> Recentered:
    """Turn prefix (``2^depth - 1`` terms) of a half-curve leaving a vertex of
    ``E_depth``, the one nearest the middle of ``core``."""
    core = cov.window if core is None else core
    if levels is None:
        levels = vertex_level(cov, depth, core)
    deep = [v for v in levels.E(depth)]
    if not deep:
        raise Inconclusive(f"no vertex of E_{depth} in the core")
    cx, cy = (core[0] + core[2]) / 2, (core[1] + core[3]) / 2
    x = min(deep, key=lambda v: ((v[0] - cx) ** 2 + (v[1] - cy) ** 2, v))
    for d in range(4):
        turns = cov.walk(x, d, 1 << depth)
        if turns is not None:
            return Recentered(x, d, turns)
    raise Inconclusive(f"half-curves from {x} leave the window")


def is_factor(word: Sequence[int], gen: foldseq.SequenceGenerator, span: int = 1 << 12) -> bool:
    """Whether ``word`` occurs in a complete sequence ``(S-bar, +-1, S)``
    restricted to indices ``-span .. span``."""
    w = list(word)
    n = len(w)
    for c in (1, -1):
        seq = foldseq.complete_seq(gen, c).window(-span, span)
        for i in range(len(seq) - n + 1):
            if list(seq[i:i + n]) == w:
                return True
    return False


# -- Theorem 6 style diagnostic ---------------------------------------------

def min_vertex_distance(cov: CoveringWindow, point: tuple[Fraction, Fraction],
                        radius: int | None = None) -> dict[int, Fraction]:
    """Squared distance from ``point`` to the nearest registered vertex of
    each curve (only vertices within ``radius`` in max-norm when given)."""
    px, py = Fraction(point[0]), Fraction(point[1])
    best: dict[int, Fraction] = {}
    if radius is None:
        items = ((fr.curve, v) for fr in cov.fragments for v in fr.points)
    else:
        idx = cov.vertex_index()
        cx, cy = int(px), int(py)
        items = ((cov.fragments[fi].curve, (x, y))
                 for x in range(cx - radius, cx + radius + 2)
                 for y in range(cy - radius, cy + radius + 2)
                 for fi, _ in idx.get((x, y), ()))
    for c, v in items:
        d = (v[0] - px) ** 2 + (v[1] - py) ** 2
        if c not in best or d < best[c]:
            best[c] = d
    return best


def delta_witness(cov: CoveringWindow, rect: Rect, bound_sq: Fraction,
                  step: Fraction = Fraction(1, 4)) -> tuple[Fraction, Fraction] | None:
    """First grid point of ``rect`` (row by row, spacing ``step``) whose
    squared distance to some vertex of every curve is below ``bound_sq``."""
    ids = cov.curve_ids
    radius = 2
    nx = int((rect[2] - rect[0]) / step)
    ny = int((rect[3] - rect[1]) / step)
    for i in range(nx + 1):
        for j in range(ny + 1):
            pt = (rect[0] + i * step, rect[1] + j * step)
            d = min_vertex_distance(cov, pt, radius)
            if set(d) == ids and all(v < bound_sq for v in d.values()):
                return pt
    return None


def vertical_periods(cov: CoveringWindow, rect: Rect, periods: Iterable[int]) -> list[int]:
    """Vertical translations that preserve the passage pairing on ``rect``
    (diagnostic for periodic strips)."""
    out = []
    for p in periods:
        ok = True
        for x in range(rect[0], rect[2] + 1):
            for y in range(rect[1], rect[3] + 1):
                a, b = cov.pairing((x, y)), cov.pairing((x, y + p))
                if a is None or b is None or a != b:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(p)
    return out


# -- seed search ------------------------------------------------------------

def _relabel(frs: Iterable[Fragment]) -> CoveringWindow:
    frs = sorted(frs, key=lambda f: f.points)
    return CoveringWindow([Fragment(i, f.start, f.points) for i, f in enumerate(frs)])


def _with_holes(base: CoveringWindow, r: Rect) -> list[Fragment]:
    """Clip of ``base`` to ``r`` plus each uncovered edge of ``r`` as a
    one-segment curve oriented by the parity rule of ``base``."""
    frs = list(base.clipped(r).fragments)
    pc = base.parity_class or 0
    for key in base.uncovered(r):
        frs.append(Fragment(-1, 0, _orient(key, pc)))
    return frs


def _origin_star(base: CoveringWindow, k: int) -> list[Fragment]:
    """Pieces of the curves through 0 reaching ``k`` segments from 0, plus the
    uncovered edges of ``[-k, k]^2``."""
    frs = []
    for fr in base.fragments:
        if (0, 0) in fr.points:
            j = fr.points.index((0, 0))
            lo = max(0, j - k)
            frs.append(Fragment(fr.curve, fr.start + lo, fr.points[lo:j + k + 1]))
    r = centered_rect(k)
    pc = base.parity_class or 0
    for key in base.uncovered(r):
        frs.append(Fragment(-1, 0, _orient(key, pc)))
    return frs


def seed_candidates(base: CoveringWindow, min_pieces: int, max_pieces: int, size_cap: int,
                    radius: int = 3, sides: Sequence[int] = (1, 2, 3)) -> list[CoveringWindow]:
    """Small fragment sets near the origin: pieces of the curves through 0 and
    clips of boxes, with the window's holes added as one-segment curves.
    Each piece is registered as its own curve."""
    seen = set()
    out = []

    def consider(frs):
        frs = [f for f in frs if f.nseg > 0]
        if not min_pieces <= len(frs) <= max_pieces or sum(f.nseg for f in frs) > size_cap:
            return
        key = tuple(sorted(f.points for f in frs))
        if key in seen:
            return
        seen.add(key)
        out.append(_relabel(frs))

    for k in range(1, radius + 1):
        consider(_origin_star(base, k))
    for w in sides:
        for h in sides:
            for x0 in range(-radius, radius + 1):
                for y0 in range(-radius, radius + 1):
                    consider(_with_holes(base, (x0, y0, x0 + w, y0 + h)))
    return out


def _tau_candidates(f: CoveringWindow, g: CoveringWindow) -> Iterable[Point]:
    """Translations putting every oriented segment of ``f`` on a segment of ``g``."""
    fr = f.fragments[0]
    a, b = fr.points[0], fr.points[1]
    d = sub(b, a)
    axis, o = (0 if d[1] == 0 else 1), d[0] + d[1]
    keys = list(f.edges.items())
    for key, (_, _, o1) in g.edges.items():
        if key[2] != axis or o1 != o:
            continue
        c = key[:2] if o > 0 else sub(key[:2], d)
        tau = sub(c, a)
        ok = True
        for k2, (_, _, o2) in keys:
            ge = g.edges.get((k2[0] + tau[0], k2[1] + tau[1], k2[2]))
            if ge is None or ge[2] != o2:
                ok = False
                break
        if ok:
            yield tau


def _periodic_count(cm: dict[int, int]) -> int:
    s = set(cm)
    for _ in range(len(cm)):
        s = {cm[i] for i in s}
    return len(s)


def seed_search(base: CoveringWindow, target_count: int, p_max: int, size_cap: int = 24,
                radius: int = 3, similarity: SelfSimilarity | None = None,
                limit: int | None = None, sides: Sequence[int] = (1, 2, 3),
                max_pieces: int | None = None,
                rotations: Sequence[int] = (0, 1, 2, 3)) -> list[SeedCertificate]:
    """Certificates ``rho(F) + tau << Delta^{-p}(F)`` whose limit has
    ``target_count`` curves, for small seeds ``F`` and ``p`` a multiple of
    the base period up to ``p_max``.

    Each hit of the search loop is re-verified from scratch by
    :func:`verify_certificate` before being returned.  Results are ordered by
    ``p``, candidate, rotation and translation.
    """
    sim0 = similarity or base.similarity
    if sim0 is None:
        raise ValueError("base covering carries no self-similarity")
    max_pieces = target_count + 4 if max_pieces is None else max_pieces
    cands = seed_candidates(base, target_count, max_pieces, size_cap, radius, sides)
    moved = [[f.rotated(q) for q in rotations] for f in cands]
    found: list[SeedCertificate] = []
    grown = list(cands)
    for r in range(1, p_max // sim0.p + 1):
        grown = [antiderive_times(g, sim0) for g in grown]
        sim = SelfSimilarity(sim0.base, sim0.choices * r)
        for f, fs_, g in zip(cands, moved, grown):
            for q, fq in zip(rotations, fs_):
                for tau in _tau_candidates(fq, g):
                    if not interior_relation(fq, g, tau):
                        continue
                    cm = curve_map(fq, g, tau)
                    if cm is None or _periodic_count(cm) != target_count:
                        continue
                    cert = SeedCertificate(f, tau, sim, q)
                    if verify_certificate(cert) and cert.n_curves == target_count:
                        found.append(cert)
                        if limit is not None and len(found) >= limit:
                            return found
    return found


def grow_limit(cert: SeedCertificate, min_side: int = 60, max_steps: int = 6) -> CoveringWindow:
    """Proposition-1 limit iterated until its covered square has ``min_side``."""
    last = None
    for steps in range(1, max_steps + 1):
        try:
            lim = prop1_limit(cert, steps)
        except NeedsMoreSteps:
            continue
        last = lim
        w = lim.window
        if min(w[2] - w[0], w[3] - w[1]) >= min_side:
            return lim
    if last is None:
        raise NeedsMoreSteps("limit never covered a square")
    return last

__all__ = ["Inconclusive", "Pattern", "occurs", "occurrences", "LIResult", "ball_patterns",
           "locally_isomorphic", "DensityReport", "sigma", "pattern_density",
           "joint_vertices", "density_lower_bound", "has_joint_in", "translation_periodicity",
           "Recentered", "recenter_infinite", "is_factor", "min_vertex_distance",
           "delta_witness", "vertical_periods", "seed_candidates", "seed_search", "grow_limit"]
