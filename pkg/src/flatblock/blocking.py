"""Blocking experiments: thin rectangles, teepees, blocking probes.

The teepee machinery works on a surface normalized so that a cylinder ``C``
in an incomplete periodic direction has width 1, height 2 and a horizontal
boundary saddle connection ``gamma`` on its upper side whose other side is
not a cylinder.  Developed coordinates put the left end of ``gamma`` at the
origin, ``C`` below the x-axis and the grown rectangle above it.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from gmpy2 import mpq

from .cylinders import Cylinder, decompose_direction
from .exact import is_rational, rational_part, sign, to_scalar
from .flow import Direction, direction, geodesics_between, prepare_endpoints, trace_ray
from .geometry import add, cross, dot, norm2, point_in_triangle, polygon_area2, sub
from .surface import SurfaceError, apply_gl2
from .triangulation import SurfacePoint

__all__ = [
    "TeepeeSetup",
    "GrownRectangle",
    "Teepee",
    "BlockedFraction",
    "BlockingReport",
    "CaseViolation",
    "normalize_for_teepee",
    "clearance",
    "grow_rectangle",
    "build_teepee",
    "blocked_fraction",
    "blocking_probe",
    "midpoint_census",
    "geodesic_incidence",
    "min_hitting_set",
]


class CaseViolation(ValueError):
    """The grown rectangle closed up into a cylinder."""


# -- exact clipping and region development -------------------------------------


def _clip(poly, rect):
    """Clip a convex polygon to the closed box ``rect = (x0, y0, x1, y1)``.

    ``None`` bounds are unbounded.
    """
    x0, y0, x1, y1 = rect
    planes = []
    if x0 is not None:
        planes.append((0, x0, 1))
    if x1 is not None:
        planes.append((0, x1, -1))
    if y0 is not None:
        planes.append((1, y0, 1))
    if y1 is not None:
        planes.append((1, y1, -1))
    pts = list(poly)
    for axis, bound, s in planes:
        if not pts:
            break
        out = []
        n = len(pts)
        for i in range(n):
            p, q = pts[i], pts[(i + 1) % n]
            fp = s * sign(p[axis] - bound)
            fq = s * sign(q[axis] - bound)
            if fp >= 0:
                out.append(p)
            if fp * fq < 0:
                t = (bound - p[axis]) / (q[axis] - p[axis])
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
        pts = out
    return pts


def _inside_open(p, rect):
    x0, y0, x1, y1 = rect
    return (
        (x0 is None or sign(p[0] - x0) > 0)
        and (x1 is None or sign(x1 - p[0]) > 0)
        and (y0 is None or sign(p[1] - y0) > 0)
        and (y1 is None or sign(y1 - p[1]) > 0)
    )


def _segment_enters(a, b, rect):
    seg = _clip([a, b], rect)
    if len(seg) < 2:
        return False
    m = ((seg[0][0] + seg[1][0]) / 2, (seg[0][1] + seg[1][1]) / 2)
    return _inside_open(m, rect)


def _overlap_region(T, t, o1, o2, rect):
    """Part of copy ``(t, o2)`` whose points also lie in the box through ``(t, o1)``."""
    v = sub(o2, o1)
    x0, y0, x1, y1 = rect
    box = (
        _smax(x0, x0 + v[0]),
        _smax(y0, y0 + v[1]),
        _smin(x1, x1 + v[0]),
        _smin(y1, y1 + v[1]),
    )
    if sign(box[2] - box[0]) <= 0 or sign(box[3] - box[1]) <= 0:
        return []
    poly = _clip([add(p, o2) for p in T.tris[t].pts], box)
    if len(poly) < 3 or sign(polygon_area2(poly)) <= 0:
        return []
    return poly


def _smax(a, b):
    return a if sign(a - b) >= 0 else b


def _smin(a, b):
    return a if sign(a - b) <= 0 else b


@dataclass
class _Development:
    copies: list  # (key, t, off) in processing order
    offsets: dict  # t -> list of offsets


def _develop(T, seed, rect, key, stop=None, on_pop=None, on_new=None):
    """Develop the triangles meeting the open box, smallest ``key`` first.

    ``rect`` is a mutable list; callbacks may shrink it.  ``on_pop(t, off)``
    runs before a copy's edges are crossed, so shrinking the box past a cone
    point keeps the sweep on one sheet.  ``on_new(t, off, previous offsets)``
    sees every new copy and ``stop(key)`` ends the sweep.
    """
    t0, off0 = seed
    tri = T.tris[t0]
    clip0 = _clip([add(p, off0) for p in tri.pts], rect)
    counter = 0
    heap = [(key(clip0), counter, t0, off0)]
    seen = {(t0, off0)}
    offsets = {t0: [off0]}
    done = []
    while heap:
        k, _, t, off = heapq.heappop(heap)
        if stop is not None and stop(k):
            break
        done.append((k, t, off))
        if on_pop is not None:
            on_pop(t, off)
        tri = T.tris[t]
        V = [add(p, off) for p in tri.pts]
        for i in range(3):
            if not _segment_enters(V[i], V[(i + 1) % 3], rect):
                continue
            t2, j = T.glue[(t, i)]
            tri2 = T.tris[t2]
            off2 = sub(V[i], tri2.pts[(j + 1) % 3])
            if (t2, off2) in seen:
                continue
            poly = _clip([add(p, off2) for p in tri2.pts], rect)
            if len(poly) < 3 or sign(polygon_area2(poly)) <= 0:
                continue
            seen.add((t2, off2))
            if on_new is not None:
                on_new(t2, off2, offsets.get(t2, []))
            offsets.setdefault(t2, []).append(off2)
            counter += 1
            heapq.heappush(heap, (key(poly), counter, t2, off2))
    return _Development(done, offsets)


def _min_x(poly):
    return min((p[0] for p in poly), key=_K)


def _min_y(poly):
    return min((p[1] for p in poly), key=_K)


class _K:
    """Sort wrapper for exact scalars."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return sign(self.v - other.v) < 0


def _stop_classes(T):
    return {c.index for c in T.classes if c.stop or c.multiplicity > 0}


# -- normalization -------------------------------------------------------------


@dataclass
class TeepeeSetup:
    surface: object  # normalized surface
    matrix: tuple
    direction: Direction
    cylinder: Cylinder  # in the normalized surface, width 1, height 2
    gamma: object  # SaddleConnection on the cylinder's upper side
    length: object  # l(gamma)
    seed: tuple  # (t, off): copy with the left end of gamma at the origin
    chain: list  # gamma's developed copies in origin coordinates


def _free_top(dec):
    bottoms = {id(s) for c in dec.cylinders for s in c.bottom}
    for c in dec.cylinders:
        for s in c.top:
            if id(s) not in bottoms:
                return c, s
    return None


def normalize_for_teepee(surface, dir, cap=None):
    """Normalize around a cylinder with a free upper boundary connection.

    Returns a :class:`TeepeeSetup` or None when the direction is complete
    or has no cylinder.
    """
    dec = decompose_direction(surface, dir, cap)
    if dec.complete or not dec.cylinders:
        return None
    d = dec.direction.vector
    d2 = norm2(d)
    f = surface.field
    bottoms = {id(s) for c in dec.cylinders for s in c.bottom}
    tops = {id(s) for c in dec.cylinders for s in c.top}
    choice = None
    for c in dec.cylinders:
        if any(id(s) not in bottoms for s in c.top):
            choice = (c, 1)
            break
        if any(id(s) not in tops for s in c.bottom):
            choice = (c, -1)
            break
    if choice is None:
        return None
    c, flip = choice
    w, h = c.width, c.height
    k = 2 * d2 / h
    M = (
        (flip * d[0] / (w * d2), flip * d[1] / (w * d2)),
        (-flip * k * d[1] / d2, flip * k * d[0] / d2),
    )
    S2 = apply_gl2(surface, M)
    dec2 = decompose_direction(S2, (1, 0), cap)
    for c2 in dec2.cylinders:
        if sign(c2.width - 1) != 0 or sign(c2.height - 2) != 0:
            continue
        bott = {id(s) for cc in dec2.cylinders for s in cc.bottom}
        for g in c2.top:
            if id(g) in bott:
                continue
            T = S2.triangulation
            t, kk = g.corner
            P0 = T.tris[t].pts[kk]
            chain = [(tt, sub(off, P0)) for tt, off in g.chain]
            seed = (t, (f(0) - P0[0], f(0) - P0[1]))
            return TeepeeSetup(S2, M, dec.direction, c2, g, g.holonomy[0], seed, chain)
    return None


def clearance(setup: TeepeeSetup):
    """Largest s with (0, l) x (0, s) injectively immersed above gamma,
    free of singularities and of horizontal cylinder boundaries."""
    S = setup.surface
    T = S.triangulation
    f = T.field
    l = setup.length
    stops = _stop_classes(T)
    rect = [f(0), f(0), l, S.area / l + 1]
    walls = {}
    for c in decompose_direction(S, (1, 0)).cylinders:
        for sc in c.top + c.bottom:
            t, k = sc.corner
            P0 = T.tris[t].pts[k]
            for tt, off in sc.chain:
                walls.setdefault(tt, []).append((sub(P0, off), sc.holonomy[0]))

    def consider(y):
        if sign(y) > 0 and sign(y - rect[3]) < 0:
            rect[3] = y

    def on_pop(t, off):
        tri = T.tris[t]
        for i, p in enumerate(tri.pts):
            q = add(p, off)
            if tri.cls[i] in stops and _inside_open(q, rect):
                consider(q[1])
        for base, ln in walls.get(t, ()):
            b = add(base, off)
            if sign(b[0] - l) < 0 and sign(b[0] + ln) > 0:
                consider(b[1])

    def on_new(t, off, prev):
        for o in prev:
            lo, hi = (o, off) if sign(off[1] - o[1]) > 0 else (off, o)
            reg = _overlap_region(T, t, lo, hi, rect)
            if reg:
                consider(_min_y(reg))

    _develop(T, setup.seed, rect, _min_y, stop=lambda k: sign(k - rect[3]) >= 0, on_pop=on_pop, on_new=on_new)
    return rect[3]


# -- growing rectangles --------------------------------------------------------


@dataclass
class GrownRectangle:
    eps: object
    T_eps: object
    case: str  # "singularity" or "wrap"
    sigma: int | None = None  # vertex class met by the right edge
    y: object = None  # its height
    eps_prime: object = None  # wrap case
    copies: list = dc_field(default_factory=list, repr=False)
    A: SurfacePoint | None = None
    A_dev: tuple | None = None


def grow_rectangle(setup: TeepeeSetup, eps) -> GrownRectangle:
    S = setup.surface
    T = S.triangulation
    f = T.field
    eps = f.coerce(eps)
    l = setup.length
    if sign(eps) <= 0:
        raise ValueError("eps must be positive")
    # injectivity bounds the length by area / eps
    rect = [f(0), f(0), S.area / eps + l + 1, eps]
    stops = _stop_classes(T)
    best = [None]  # (x, kind, payload)

    def offer(x, kind, payload):
        b = best[0]
        if b is None or sign(x - b[0]) < 0 or (sign(x - b[0]) == 0 and kind == "singularity" and b[1] != kind):
            best[0] = (x, kind, payload)
            rect[2] = x

    def on_pop(t, off):
        tri = T.tris[t]
        for i, p in enumerate(tri.pts):
            q = add(p, off)
            if tri.cls[i] in stops and _inside_open(q, rect):
                offer(q[0], "singularity", (tri.cls[i], q[1]))
            elif tri.cls[i] in stops and best[0] is not None and sign(q[0] - rect[2]) == 0 and best[0][1] != "singularity":
                if sign(q[1]) > 0 and sign(q[1] - eps) < 0:
                    offer(q[0], "singularity", (tri.cls[i], q[1]))

    def on_new(t, off, prev):
        for o in prev:
            lo, hi = (o, off) if sign(off[0] - o[0]) > 0 else (off, o)
            if sign(hi[0] - lo[0]) == 0:
                continue
            reg = _overlap_region(T, t, lo, hi, rect)
            if reg:
                offer(_min_x(reg), "overlap", sub(hi, lo))

    dev = _develop(
        T, setup.seed, rect, _min_x, stop=lambda k: sign(k - rect[2]) > 0, on_pop=on_pop, on_new=on_new
    )
    if best[0] is None:
        raise AssertionError("rectangle growth found no terminal event")
    x, kind, payload = best[0]
    copies = [(t, off) for k, t, off in dev.copies if sign(k - x) < 0]
    if kind == "singularity":
        cls, y = payload
        out = GrownRectangle(eps, x, "singularity", cls, y, copies=copies)
        A = (x - l / 2, y)
        out.A_dev = A
        out.A = _locate(T, copies, A)
        return out
    v = payload
    if sign(v[1]) == 0:
        raise CaseViolation("the rectangle closes up into a cylinder")
    if sign(v[1]) > 0:
        # the right edge would pass through the start of gamma at (x, vy)
        raise AssertionError("overlap above the start edge without a singularity event")
    return GrownRectangle(eps, x, "wrap", eps_prime=-v[1], copies=copies)


def _locate(T, copies, p):
    for t, off in copies:
        loc = sub(p, off)
        if point_in_triangle(loc, *T.tris[t].pts) >= 0:
            return SurfacePoint(t, loc)
    raise AssertionError("developed point is not covered")


def grow_until_singularity(setup, eps, max_wraps=1):
    """Grow, replacing eps by eps' after a wrap; returns (rectangle, wraps)."""
    wraps = 0
    rect = grow_rectangle(setup, eps)
    while rect.case == "wrap":
        if wraps >= max_wraps:
            return rect, wraps
        wraps += 1
        rect = grow_rectangle(setup, rect.eps_prime)
    return rect, wraps


# -- teepees -------------------------------------------------------------------


@dataclass
class Teepee:
    setup: TeepeeSetup
    rectangle: GrownRectangle
    eps: object
    y: object
    A: SurfacePoint
    A_dev: tuple
    O: SurfacePoint
    S_x: object
    S2_x: object
    ks: list  # integer x-coordinates of the O pre-images on y = -1
    cyl_copies: list = dc_field(default_factory=list, repr=False)
    wraps: int = 0

    @property
    def card(self):
        return len(self.ks)

    @property
    def bound(self):
        """l (1 + y) / y - 1."""
        l = self.setup.length
        return l * (1 + self.y) / self.y - 1

    def members(self):
        for k in self.ks:
            yield (k, sub(self.A_dev, (k, -1)))

    def validate(self):
        """Re-trace every member from O and check it ends at A."""
        T = self.setup.surface.triangulation
        target = T.canonical(self.A)
        bad = []
        for k, v in self.members():
            res = trace_ray(T, self.O, v, until=norm2(v))
            if res.kind != "capped" or T.canonical(res.point) != target:
                bad.append(k)
        return bad

    def cylinder_point(self, x, depth):
        """Surface point of developed (x, -depth) inside C."""
        f = self.setup.surface.field
        x = f.coerce(x)
        x = x - _floor(x)
        return _locate(self.setup.surface.triangulation, self.cyl_copies, (x, -f.coerce(depth)))


def _floor(x):
    fl = math.floor(float(x))
    while sign(x - fl) < 0:
        fl -= 1
    while sign(x - (fl + 1)) >= 0:
        fl += 1
    return fl


def _ceil(x):
    return -_floor(-x)


def build_teepee(setup: TeepeeSetup, eps, max_wraps=1) -> Teepee:
    rect, wraps = grow_until_singularity(setup, eps, max_wraps)
    if rect.case != "singularity":
        raise CaseViolation("rectangle still wraps after the allowed reductions")
    S = setup.surface
    T = S.triangulation
    f = T.field
    l = setup.length
    xA, yA = rect.A_dev
    # develop C below gamma from the point (l/2, -1)
    mid = _locate(T, [(t, off) for t, off in setup.chain], (l / 2, f(0)))
    down = trace_ray(T, mid, (0, -1), until=f(1))
    seed_off = sub((l / 2, f(-1)), down.point.xy)
    crect = (f(-1) / 4, f(-2), f(5) / 4, f(0))
    cdev = _develop(T, (down.point.tri, seed_off), crect, _min_x)
    cyl_copies = [(t, off) for _, t, off in cdev.copies]
    O = _locate(T, cyl_copies, (f(0), f(-1)))
    Sx = -xA / yA
    S2x = l + (l - xA) / yA
    lo, hi = _floor(Sx) + 1, _ceil(S2x) - 1
    ks = list(range(lo, hi + 1))
    return Teepee(setup, rect, rect.eps, yA, rect.A, rect.A_dev, O, Sx, S2x, ks, cyl_copies, wraps)


# -- blocked fractions ---------------------------------------------------------


@dataclass
class BlockedFraction:
    count: int
    card: int
    fraction: object
    region: str  # "cylinder", "strip" or "outside"
    rho: object = None  # Thales ratio (h + y) / (1 + y)
    q: int | None = None
    p: int | None = None
    bound_ok: bool = True


def blocked_fraction(teepee: Teepee, B: SurfacePoint) -> BlockedFraction:
    S = teepee.setup.surface
    T = S.triangulation
    key = T.canonical(B)
    if key in (T.canonical(teepee.O), T.canonical(teepee.A)):
        raise ValueError("B coincides with O or A")
    reps = T.representations(B)
    card = teepee.card
    yA = teepee.y
    xA = teepee.A_dev[0]
    l = teepee.setup.length
    f = T.field
    # inside C?
    for t, off in teepee.cyl_copies:
        for rt, loc in reps:
            if rt != t:
                continue
            p = add(loc, off)
            if sign(p[1]) < 0 and sign(p[1] + 2) > 0:
                return _fraction_in_cylinder(teepee, p[0], -p[1])
    # inside the strip (bottom edge on gamma included)?
    rect = teepee.rectangle
    for t, off in rect.copies:
        for rt, loc in reps:
            if rt != t:
                continue
            p = add(loc, off)
            inside = sign(p[0]) > 0 and sign(p[0] - rect.T_eps) < 0 and sign(p[1] - rect.eps) < 0
            inside = inside and (sign(p[1]) > 0 or (sign(p[1]) == 0 and sign(p[0] - l) < 0))
            if not inside:
                continue
            count = 0
            if sign(p[1] - yA) < 0:
                k = ((yA + 1) * p[0] - xA * (p[1] + 1)) / (yA - p[1])
                if is_rational(k) and rational_part(k).denominator == 1 and int(rational_part(k)) in set(teepee.ks):
                    count = 1
            frac = mpq(count, card) if card else mpq(0)
            return BlockedFraction(count, card, frac, "strip", bound_ok=count <= 1)
    return BlockedFraction(0, card, mpq(0), "outside")


def _fraction_in_cylinder(teepee, bx, h):
    card = teepee.card
    yA = teepee.y
    xA = teepee.A_dev[0]
    rho = (h + yA) / (1 + yA)
    Q = None
    if is_rational(rho):
        Q = int(rational_part(rho).denominator)
    if sign(h - 1) >= 0:
        return BlockedFraction(0, card, mpq(0), "cylinder", rho, Q)
    c0 = xA * (1 - h) / (1 + yA)
    hits = []
    for k in teepee.ks:
        x = k * rho + c0 - bx
        if is_rational(x) and rational_part(x).denominator == 1:
            hits.append(k)
    count = len(hits)
    q = Q
    p = None
    if count >= 2:
        q = min(b - a for a, b in zip(hits, hits[1:]))
        pr = q * rho
        if not (is_rational(pr) and rational_part(pr).denominator == 1):
            raise AssertionError("Thales relation fails")
        p = int(rational_part(pr))
    frac = mpq(count, card) if card else mpq(0)
    bound = (mpq(1, q) if q else mpq(0)) + (mpq(1, card) if card else mpq(0))
    return BlockedFraction(count, card, frac, "cylinder", rho, q, p, frac <= bound)


# -- generic blocking probes ---------------------------------------------------


class _Pieces:
    """Per-triangle float arrays of geodesic pieces, built on first use."""

    def __init__(self, geos):
        self.geos = geos
        self.rows = {}
        for gi, g in enumerate(geos):
            for t, off in g.chain:
                self.rows.setdefault(t, []).append((gi, off))
        self.hol = [(float(g.holonomy[0]), float(g.holonomy[1])) for g in geos]
        self.arrays = {}

    def __contains__(self, t):
        return t in self.rows

    def __getitem__(self, t):
        a = self.arrays.get(t)
        if a is None:
            rows = self.rows[t]
            n = len(rows)
            gid = np.fromiter((r[0] for r in rows), dtype=np.int64, count=n)
            h = np.array(self.hol, dtype=float)[gid] if n else np.zeros((0, 2))
            ox = np.fromiter((float(r[1][0]) for r in rows), dtype=float, count=n)
            oy = np.fromiter((float(r[1][1]) for r in rows), dtype=float, count=n)
            a = (gid, h[:, 0].copy(), h[:, 1].copy(), ox, oy, rows)
            self.arrays[t] = a
        return a


def _pieces(T, geos):
    return _Pieces(geos)


def _on_geodesic(g, t, loc, off):
    X = add(loc, off)
    H = g.holonomy
    if sign(cross(H, X)) != 0:
        return False
    s = dot(X, H)
    return sign(s) > 0 and sign(s - norm2(H)) < 0


def geodesic_incidence(T, geos, points, index=None):
    """For each surface point, the set of geodesic ids passing through it."""
    index = index if index is not None else _pieces(T, geos)
    out = []
    for pt in points:
        hit = set()
        for t, loc in T.representations(pt):
            if t not in index:
                continue
            gid, hx, hy, ox, oy, rows = index[t]
            lx, ly = float(loc[0]), float(loc[1])
            vals = hx * (ly + oy) - hy * (lx + ox)
            scale = np.abs(hx) + np.abs(hy) + 1.0
            for r in np.nonzero(np.abs(vals) <= 1e-7 * scale * (1 + abs(lx) + abs(ly)))[0]:
                g = int(gid[r])
                if g in hit:
                    continue
                if _on_geodesic(geos[g], t, loc, rows[r][1]):
                    hit.add(g)
        out.append(hit)
    return out


def _midpoint(T, g):
    m = (g.holonomy[0] / 2, g.holonomy[1] / 2)
    n = len(g.chain)
    # copies are in path order, so search outward from the middle
    order = sorted(range(n), key=lambda i: abs(2 * i + 1 - n))
    return _locate(T, [g.chain[i] for i in order], m)


def _segment_crossings(T, g1, g2):
    """Interior crossing points of two geodesics (developed from their O)."""
    H1, H2 = g1.holonomy, g2.holonomy
    den = cross(H1, H2)
    if sign(den) == 0:
        return []
    by_t = {}
    for t, off in g2.chain:
        by_t.setdefault(t, []).append(off)
    out = []
    for t, off1 in g1.chain:
        for off2 in by_t.get(t, ()):
            # P1 = s H1 - off1 (local), P2 = u H2 - off2
            d = sub(off1, off2)
            s = cross(d, H2) / den
            u = cross(d, H1) / den
            if sign(s) <= 0 or sign(s - 1) >= 0 or sign(u) <= 0 or sign(u - 1) >= 0:
                continue
            loc = sub((s * H1[0], s * H1[1]), off1)
            if point_in_triangle(loc, *T.tris[t].pts) >= 0:
                out.append(SurfacePoint(t, loc))
    return out


def _canon_sort_key(T, key):
    return tuple(str(x) for x in key)


def min_hitting_set(covers, n_elements, exact=True, node_budget=200000):
    """Minimum set of candidates covering every element.

    ``covers[i]`` is a set of element ids.  Returns (chosen ids, method)
    where method is "exact" when optimality was proven.
    """
    full = (1 << n_elements) - 1
    masks = []
    for c in covers:
        m = 0
        for e in c:
            m |= 1 << e
        masks.append(m)
    covered = 0
    for m in masks:
        covered |= m
    if covered != full:
        raise ValueError("some element has no candidate")
    # drop dominated candidates (keep the first of equals)
    keep = []
    for i, m in enumerate(masks):
        dom = False
        for j, m2 in enumerate(masks):
            if j != i and (m | m2) == m2 and (m != m2 or j < i):
                dom = True
                break
        if not dom:
            keep.append(i)
    # collapse identical elements
    elem_key = {}
    for e in range(n_elements):
        sig = tuple(i for i in keep if masks[i] >> e & 1)
        elem_key.setdefault(sig, e)
    elems = sorted(elem_key.values())
    cand_of = {e: [i for i in keep if masks[i] >> e & 1] for e in elems}
    emask = 0
    for e in elems:
        emask |= 1 << e

    def greedy(uncov):
        chosen = []
        while uncov:
            i = max(keep, key=lambda i: (bin(masks[i] & uncov).count("1"), -i))
            chosen.append(i)
            uncov &= ~masks[i]
        return chosen

    best = greedy(emask)
    if not exact:
        return sorted(best), "greedy"
    nodes = [0]
    exhausted = [False]

    def lower_bound(uncov):
        used = 0
        lb = 0
        for e in elems:
            if not uncov >> e & 1:
                continue
            cs = 0
            for i in cand_of[e]:
                cs |= 1 << i
            if cs & used:
                continue
            used |= cs
            lb += 1
        return lb

    def search(uncov, chosen):
        nonlocal best
        if exhausted[0]:
            return
        nodes[0] += 1
        if nodes[0] > node_budget:
            exhausted[0] = True
            return
        if not uncov:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + lower_bound(uncov) >= len(best):
            return
        e = min((e for e in elems if uncov >> e & 1), key=lambda e: (len(cand_of[e]), e))
        for i in sorted(cand_of[e], key=lambda i: (-bin(masks[i] & uncov).count("1"), i)):
            chosen.append(i)
            search(uncov & ~masks[i], chosen)
            chosen.pop()

    search(emask, [])
    return sorted(best), ("greedy" if exhausted[0] else "exact")


@dataclass
class BlockingRow:
    L: object
    geodesics: int
    candidates: int
    blockers: list  # SurfacePoints
    method: str
    carried: bool = False  # verified minimum carried over from the previous length

    @property
    def size(self):
        return len(self.blockers)


@dataclass
class BlockingReport:
    O: object
    A: object
    rows: list
    triangulation: object = dc_field(repr=False, default=None)

    @property
    def final(self):
        return self.rows[0]


def _candidates(T, geos, core, exclude):
    cands = {}

    def add_pt(p):
        k = T.canonical(p)
        if k in exclude or k in cands:
            return
        cands[k] = p

    for g in geos:
        add_pt(_midpoint(T, g))
    short = geos[:core]
    for i in range(len(short)):
        for j in range(i + 1, len(short)):
            for p in _segment_crossings(T, short[i], short[j]):
                add_pt(p)
    keys = sorted(cands, key=lambda k: _canon_sort_key(T, k))
    return [cands[k] for k in keys]


def _blocks_all(T, geos, blockers, index):
    ver = geodesic_incidence(T, geos, blockers, index)
    hit = set().union(*ver) if ver else set()
    return len(hit) == len(geos)


def _probe_once(T, cO, cA, L, exact, jobs, core, prev=None):
    geos = geodesics_between(None, None, None, L, jobs=jobs, prepared=(T, cO, cA))
    if not geos:
        return BlockingRow(L, 0, 0, [], "exact"), geos
    index = _pieces(T, geos)
    if prev is not None and prev.method == "exact" and prev.blockers:
        # minimal sizes never shrink as L grows, so a previous exact minimum
        # that still blocks everything is a minimum here as well
        if _blocks_all(T, geos, prev.blockers, index):
            return BlockingRow(L, len(geos), None, list(prev.blockers), "exact", carried=True), geos
    exclude = {("v", cO), ("v", cA)}
    pts = _candidates(T, geos, core, exclude)
    inc = geodesic_incidence(T, geos, pts, index)
    chosen, method = min_hitting_set(inc, len(geos), exact=exact)
    blockers = [pts[i] for i in chosen]
    if not _blocks_all(T, geos, blockers, index):
        raise AssertionError("blocking set misses a geodesic")
    return BlockingRow(L, len(geos), len(pts), blockers, method), geos


def blocking_probe(surface, O, A, L, mode="exact", doublings=2, jobs=1, core=24):
    """Minimal blocking sets for geodesics O -> A of length <= L, 2L, ..."""
    T, cO, cA = prepare_endpoints(surface, O, A)
    rows = []
    Li = to_scalar(L)
    prev = None
    for _ in range(doublings + 1):
        prev, _ = _probe_once(T, cO, cA, Li, mode == "exact", jobs, core, prev)
        rows.append(prev)
        Li = 2 * Li
    return BlockingReport(O, A, rows, T)


@dataclass
class CensusRow:
    L: object
    geodesics: int
    midpoints: list

    @property
    def size(self):
        return len(self.midpoints)


def midpoint_census(surface, O, A, L, doublings=1, jobs=1):
    T, cO, cA = prepare_endpoints(surface, O, A)
    rows = []
    Li = to_scalar(L)
    for _ in range(doublings + 1):
        geos = geodesics_between(None, None, None, Li, jobs=jobs, prepared=(T, cO, cA))
        seen = {}
        for g in geos:
            p = _midpoint(T, g)
            seen.setdefault(T.canonical(p), p)
        keys = sorted(seen, key=lambda k: _canon_sort_key(T, k))
        rows.append(CensusRow(Li, len(geos), [seen[k] for k in keys]))
        Li = 2 * Li
    return rows, T


def polygon_coordinates(T, surface, pt: SurfacePoint):
    """Readable (polygon name, x, y) for a surface point: smallest representative."""
    reps = []
    for t, loc in T.representations(pt):
        p = T.tris[t].poly
        reps.append((surface.polygons[p].name, loc))
    reps.sort(key=lambda r: (r[0], float(r[1][0]), float(r[1][1])))
    return reps[0]
